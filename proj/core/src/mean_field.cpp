#include "rqcm/mean_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rqcm/errors.hpp"

namespace rqcm {

namespace {

using RowMajorView = Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

constexpr double kDegeneracy = 1e-8;
constexpr double kTie = 1e-12;

BandMinimum lowest(const ExcitationMatrix& e) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(e.matrix);
  BandMinimum out;
  out.band = e.band;
  out.sigma = e.sigma;
  out.value = eig.eigenvalues()(0);
  out.multiplicity = 0;
  for (Eigen::Index j = 0; j < eig.eigenvalues().size() && eig.eigenvalues()(j) <= out.value + kDegeneracy; ++j)
    ++out.multiplicity;
  Eigen::VectorXcd w = e.complement * eig.eigenvectors().col(0);
  w.normalize();
  fix_phase(w);
  out.witness = w;
  return out;
}

}  // namespace

const char* to_string(Band b) { return b == Band::symmetric ? "symmetric" : "antisymmetric"; }

ExcitationMatrix excitation_matrix(const LocalMomentOperator& m, const Permutation& sigma, Band band) {
  const int t = m.copies();
  if (static_cast<int>(sigma.size()) != t || !is_permutation(sigma)) {
    throw InvalidArgument("excitation_matrix: sigma is not a permutation of t elements");
  }
  const Eigen::MatrixXcd& b = m.basis().kets;
  const int d = m.local_size();
  if (d < 2) throw InvalidArgument("excitation_matrix: local basis has no complement to |sigma>>");

  Eigen::VectorXcd s = b.adjoint() * normalized_permutation_coordinates(sigma);
  if (std::abs(s.norm() - 1.0) > 1e-10) {
    throw InvalidArgument("excitation_matrix: local basis does not contain " + to_cycle_string(sigma));
  }
  s.normalize();
  // Orthonormal complement of s inside the basis span.
  const Eigen::MatrixXcd s_col = s;
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(s_col);
  const Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd f = q.rightCols(d - 1);

  const Eigen::VectorXcd e = b * s;
  const Eigen::MatrixXcd g = b * f;
  const Eigen::Index nd = e.size();
  Eigen::VectorXcd ee(nd * nd);
  for (Eigen::Index nu = 0; nu < nd; ++nu) ee.segment(nu * nd, nd) = e(nu) * e;
  if ((m.apply_pair(e, e) - ee).norm() > 1e-9) {
    throw InvalidArgument("excitation_matrix: " + to_cycle_string(sigma) + " is not a fixed point of m");
  }

  const Eigen::Index k = d - 1;
  Eigen::MatrixXcd direct(k, k), direct_swapped(k, k), exchange(k, k), exchange_swapped(k, k);
  const Eigen::VectorXcd e_conj = e.conjugate();
  const Eigen::MatrixXcd g_adj = g.adjoint();
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index beta = 0; beta < k; ++beta) {
    const Eigen::VectorXcd v1 = m.apply_pair(e, g.col(beta));  // |sigma beta>>
    const Eigen::VectorXcd v2 = m.apply_pair(g.col(beta), e);  // |beta sigma>>
    const RowMajorView w1(v1.data(), nd, nd);
    const RowMajorView w2(v2.data(), nd, nd);
    direct.col(beta) = g_adj * (w1.transpose() * e_conj);
    exchange_swapped.col(beta) = g_adj * (w1 * e_conj);
    exchange.col(beta) = g_adj * (w2.transpose() * e_conj);
    direct_swapped.col(beta) = g_adj * (w2 * e_conj);
  }

  Eigen::MatrixXcd raw = 2.0 * Eigen::MatrixXcd::Identity(k, k) - direct - direct_swapped;
  if (band == Band::symmetric) raw -= exchange + exchange_swapped;

  ExcitationMatrix out;
  out.band = band;
  out.sigma = sigma;
  out.asymmetry = (raw - raw.adjoint()).cwiseAbs().maxCoeff();
  if (out.asymmetry > 1e-8) {
    throw ToleranceError("excitation_matrix: result is not Hermitian (asymmetry " + std::to_string(out.asymmetry) + ")");
  }
  out.matrix = 0.5 * (raw + raw.adjoint());
  out.complement = g;
  return out;
}

GapPrediction leading_coefficient(const LocalMomentOperator& m, bool include_antisymmetric) {
  GapPrediction out;
  out.t = m.copies();
  out.basis_descriptor = m.basis().descriptor;
  out.antisymmetric_included = include_antisymmetric || !m.left_swap_invariant();

  bool have = false;
  for (const auto& sigma : all_permutations(m.copies())) {
    for (Band band : {Band::symmetric, Band::antisymmetric}) {
      BandMinimum bm = lowest(excitation_matrix(m, sigma, band));
      const bool counts = band == Band::symmetric || out.antisymmetric_included;
      if (counts && (!have || bm.value < out.minimum.value - kTie)) {
        out.minimum = bm;
        have = true;
      }
      out.scanned.push_back(std::move(bm));
    }
  }
  out.a1 = out.minimum.value;
  out.nonuniversal_warning = out.a1 <= 1e-9;
  return out;
}

LocalBasis mean_field_basis(int t, bool full) {
  if (full) {
    if (t > 3) throw DimensionError("full-complement mean-field scan is capped at t <= 3");
    return pauli_basis(t);
  }
  return u2_invariant_basis(t);
}

std::vector<std::pair<PauliString, cplx>> pauli_terms(const Eigen::VectorXcd& coords, double drop) {
  int t = 0;
  for (Eigen::Index size = 1; size < coords.size(); size *= 4) ++t;
  if (static_cast<Eigen::Index>(ipow(4, t)) != coords.size()) throw InvalidArgument("pauli_terms: length is not 4^t");
  std::vector<std::pair<PauliString, cplx>> out;
  for (Eigen::Index i = 0; i < coords.size(); ++i)
    if (std::abs(coords(i)) > drop) out.emplace_back(PauliString::from_index(t, static_cast<std::size_t>(i)), coords(i));
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return std::abs(a.second) > std::abs(b.second) + 1e-12; });
  return out;
}

std::string format_pauli_terms(const std::vector<std::pair<PauliString, cplx>>& terms) {
  std::string out;
  char buf[96];
  for (const auto& [p, c] : terms) {
    if (!out.empty()) out += " + ";
    if (std::abs(c.imag()) <= 1e-12) {
      std::snprintf(buf, sizeof buf, "%.12g*", c.real());
    } else {
      std::snprintf(buf, sizeof buf, "(%.12g%+.12gi)*", c.real(), c.imag());
    }
    out += buf;
    out += p.to_string();
  }
  return out.empty() ? "0" : out;
}

PolynomialCheck invariant_polynomial_check(const Eigen::VectorXcd& omega, double q, double r, double s, int t) {
  const auto d = static_cast<Eigen::Index>(ipow(4, t));
  if (t < 1 || t > kMaxCopiesPair) throw DimensionError("invariant_polynomial_check: 1 <= t <= 4");
  if (omega.size() != d) throw InvalidArgument("invariant_polynomial_check: omega has wrong length");
  if (std::abs(omega.norm() - 1.0) > 1e-10) throw InvalidArgument("invariant_polynomial_check: omega is not normalized");
  if (std::abs(omega(0)) > 1e-10) throw InvalidArgument("invariant_polynomial_check: omega overlaps the identity");
  if (twirl_defect(omega, t, 8, 0xA11CEULL) > 1e-10) {
    throw InvalidArgument("invariant_polynomial_check: omega is not U(2)-invariant");
  }

  Eigen::VectorXcd io = Eigen::VectorXcd::Zero(d * d);
  io.head(d) = omega;  // site-major: nu = 0 (identity) on the first qubit
  const auto& map = site_major_to_interleaved(t);
  Eigen::VectorXcd inter(io.size());
  for (std::size_t i = 0; i < map.size(); ++i) inter(map[i]) = io(static_cast<Eigen::Index>(i));
  const Eigen::MatrixXd rm = pauli_transfer_matrix(canonical_gate(q, r, s)).entries;
  const Eigen::VectorXcd moved = apply_per_copy(inter, t, rm);
  const cplx lhs = inter.dot(moved);

  PolynomialCheck out;
  const double q1 = std::cos(2 * q), r1 = std::cos(2 * r), s1 = std::cos(2 * s);
  out.x = r1 * s1;
  out.y = s1 * q1;
  out.z = q1 * r1;
  out.bound = (out.x * out.x + out.y * out.y + out.z * out.z) / 3.0;
  out.lhs = lhs.real();
  out.lhs_imag = lhs.imag();
  return out;
}

int monotone_crossover(const std::vector<GapTableRow>& rows) {
  if (rows.size() < 2) return rows.empty() ? -1 : rows.front().n;
  std::size_t k = rows.size() - 1;
  if (!(rows[k].rel_dev < rows[k - 1].rel_dev)) return -1;
  while (k > 0 && rows[k].rel_dev < rows[k - 1].rel_dev) --k;
  return rows[k].n;
}

GapTable gap_prediction_vs_exact(const GateDistribution& dist, int t, const std::vector<int>& n_list,
                                 const SpectralOptions& options) {
  GapTable table;
  table.t = t;
  table.distribution = dist.name();

  const LocalMomentOperator scan = build_local_moment_operator(dist, t, mean_field_basis(t, t <= 3));
  table.prediction = leading_coefficient(scan);
  const double a1 = table.prediction.a1;

  const LocalBasis sector_basis = dist.locally_invariant() ? u2_invariant_basis(t) : pauli_basis(t);
  const LocalMomentOperator m = build_local_moment_operator(dist, t, sector_basis);
  table.sector_basis = sector_basis.descriptor;
  const TwoBodyCoefficients c = TwoBodyCoefficients::from_operator(m);

  for (int n : n_list) {
    const SymmetricMomentMatrix sector = assemble_symmetric_moment_matrix(c, n, t, sector_basis.descriptor);
    const SpectralResult res = spectral_gap(sector, permutation_fixed_vectors(sector_basis, *sector.basis), options);
    GapTableRow row;
    row.n = n;
    row.dim = res.dimension;
    row.unit_multiplicity = res.unit_multiplicity;
    row.lambda1 = res.lambda1;
    row.gap = res.gap;
    row.prediction = a1 / n;
    row.rel_dev = std::abs(res.gap * n / a1 - 1.0);
    row.method = res.method;
    row.residual = res.residual;
    row.lambda1_multiplicity = res.lambda1_multiplicity;
    table.rows.push_back(row);
  }
  table.crossover_n = monotone_crossover(table.rows);
  return table;
}

}  // namespace rqcm
