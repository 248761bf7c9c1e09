#include "rqcm/moment_space.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <random>

#include "rqcm/errors.hpp"

namespace rqcm {

namespace {

constexpr double kNullTolerance = 1e-9;  // relative, on Gram eigenvalues

void check_local_dim(int copies, int local_dim) {
  if (copies < 1) throw InvalidArgument("copies must be >= 1");
  if (local_dim != 2 && local_dim != 4) throw InvalidArgument("local_dim must be 2 or 4");
  const int cap = local_dim == 2 ? kMaxCopiesQubit : kMaxCopiesPair;
  if (copies > cap) {
    throw DimensionError("dense operator ket with local_dim " + std::to_string(local_dim) + " is capped at t <= " +
                         std::to_string(cap) + " (requested t = " + std::to_string(copies) + ")");
  }
}

// Normalized Pauli basis element for one copy, as a local_dim x local_dim matrix.
Eigen::MatrixXcd copy_pauli_element(int local_dim, int label) {
  if (local_dim == 2) return pauli_matrix(label) / std::sqrt(2.0);
  Eigen::MatrixXcd m(4, 4);
  const auto& a = pauli_matrix(label / 4);
  const auto& b = pauli_matrix(label % 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l) / 2.0;
  return m;
}

// T[label][(i, j)] = conj(P_label(i, j)): maps per-copy entries to Pauli coefficients.
Eigen::MatrixXcd copy_to_pauli_transform(int local_dim) {
  const int k = local_dim * local_dim;
  Eigen::MatrixXcd t(k, k);
  for (int label = 0; label < k; ++label) {
    const Eigen::MatrixXcd p = copy_pauli_element(local_dim, label);
    for (int i = 0; i < local_dim; ++i)
      for (int j = 0; j < local_dim; ++j) t(label, i * local_dim + j) = std::conj(p(i, j));
  }
  return t;
}

// computational index -> copy-interleaved (i_c, j_c) index.
std::vector<std::size_t> computational_to_interleaved(int copies, int local_dim) {
  const std::size_t side = ipow(static_cast<std::uint64_t>(local_dim), copies);
  const std::size_t k = static_cast<std::size_t>(local_dim) * static_cast<std::size_t>(local_dim);
  std::vector<std::size_t> map(side * side);
  for (std::size_t ket = 0; ket < side; ++ket) {
    for (std::size_t bra = 0; bra < side; ++bra) {
      std::size_t out = 0;
      std::size_t kk = ket, bb = bra, scale = 1;
      for (int c = copies - 1; c >= 0; --c) {
        const std::size_t i = kk % static_cast<std::size_t>(local_dim);
        const std::size_t j = bb % static_cast<std::size_t>(local_dim);
        kk /= static_cast<std::size_t>(local_dim);
        bb /= static_cast<std::size_t>(local_dim);
        out += (i * static_cast<std::size_t>(local_dim) + j) * scale;
        scale *= k;
      }
      map[ket * side + bra] = out;
    }
  }
  return map;
}

template <typename Op>
Eigen::VectorXcd apply_per_copy_impl(const Eigen::VectorXcd& v, int copies, const Op& op) {
  const Eigen::Index k = op.rows();
  if (op.cols() != k) throw InvalidArgument("apply_per_copy: operator must be square");
  const std::uint64_t total = ipow(static_cast<std::uint64_t>(k), copies);
  if (static_cast<std::uint64_t>(v.size()) != total) throw InvalidArgument("apply_per_copy: size mismatch");
  Eigen::VectorXcd cur = v;
  Eigen::VectorXcd next(v.size());
  Eigen::VectorXcd fiber(k);
  for (int c = 0; c < copies; ++c) {
    const Eigen::Index stride = static_cast<Eigen::Index>(ipow(static_cast<std::uint64_t>(k), copies - 1 - c));
    const Eigen::Index block = stride * k;
    for (Eigen::Index outer = 0; outer < v.size(); outer += block) {
      for (Eigen::Index inner = 0; inner < stride; ++inner) {
        for (Eigen::Index a = 0; a < k; ++a) fiber(a) = cur(outer + a * stride + inner);
        for (Eigen::Index a = 0; a < k; ++a) {
          cplx acc = 0.0;
          for (Eigen::Index b = 0; b < k; ++b) acc += op(a, b) * fiber(b);
          next(outer + a * stride + inner) = acc;
        }
      }
    }
    cur.swap(next);
  }
  return cur;
}

}  // namespace

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

const Eigen::Matrix2cd& pauli_matrix(int label) {
  static const std::array<Eigen::Matrix2cd, 4> paulis = [] {
    std::array<Eigen::Matrix2cd, 4> p;
    const cplx i(0.0, 1.0);
    p[0] << 1, 0, 0, 1;
    p[1] << 0, 1, 1, 0;
    p[2] << 0, -i, i, 0;
    p[3] << 1, 0, 0, -1;
    return p;
  }();
  if (label < 0 || label > 3) throw InvalidArgument("Pauli label out of range");
  return paulis[static_cast<std::size_t>(label)];
}

// ---------------------------------------------------------------------------
// PauliString

int PauliString::degree() const {
  int d = 0;
  for (auto l : labels) d += l != 0;
  return d;
}

std::size_t PauliString::index() const {
  std::size_t idx = 0;
  for (auto l : labels) idx = idx * 4 + l;
  return idx;
}

std::string PauliString::to_string() const {
  static constexpr char kChars[] = {'I', 'X', 'Y', 'Z'};
  std::string s;
  for (auto l : labels) s.push_back(kChars[l]);
  return s;
}

PauliString PauliString::from_index(int copies, std::size_t index) {
  PauliString s;
  s.labels.assign(static_cast<std::size_t>(copies), 0);
  for (int c = copies - 1; c >= 0; --c) {
    s.labels[static_cast<std::size_t>(c)] = static_cast<std::uint8_t>(index % 4);
    index /= 4;
  }
  return s;
}

PauliString PauliString::parse(const std::string& text) {
  PauliString s;
  for (char ch : text) {
    switch (ch) {
      case 'I': case '0': s.labels.push_back(0); break;
      case 'X': case '1': s.labels.push_back(1); break;
      case 'Y': case '2': s.labels.push_back(2); break;
      case 'Z': case '3': s.labels.push_back(3); break;
      default: throw InvalidArgument(std::string("invalid Pauli label '") + ch + "'");
    }
  }
  if (s.labels.empty()) throw InvalidArgument("empty Pauli string");
  return s;
}

// ---------------------------------------------------------------------------
// OperatorKet

OperatorKet::OperatorKet(int copies, int local_dim, Eigen::VectorXcd coefficients)
    : copies_(copies), local_dim_(local_dim), coefficients_(std::move(coefficients)) {
  check_local_dim(copies, local_dim);
  const auto side = ipow(static_cast<std::uint64_t>(local_dim), copies);
  if (static_cast<std::uint64_t>(coefficients_.size()) != side * side) {
    throw InvalidArgument("OperatorKet: coefficient vector has wrong dimension");
  }
}

OperatorKet OperatorKet::from_matrix(int copies, int local_dim, const Eigen::MatrixXcd& op) {
  check_local_dim(copies, local_dim);
  const auto side = static_cast<Eigen::Index>(ipow(static_cast<std::uint64_t>(local_dim), copies));
  if (op.rows() != side || op.cols() != side) throw InvalidArgument("OperatorKet::from_matrix: wrong shape");
  Eigen::VectorXcd v(side * side);
  for (Eigen::Index r = 0; r < side; ++r)
    for (Eigen::Index c = 0; c < side; ++c) v(r * side + c) = op(r, c);
  return OperatorKet(copies, local_dim, std::move(v));
}

OperatorKet OperatorKet::zero(int copies, int local_dim) {
  check_local_dim(copies, local_dim);
  const auto side = static_cast<Eigen::Index>(ipow(static_cast<std::uint64_t>(local_dim), copies));
  return OperatorKet(copies, local_dim, Eigen::VectorXcd::Zero(side * side));
}

Eigen::Index OperatorKet::side() const {
  return static_cast<Eigen::Index>(ipow(static_cast<std::uint64_t>(local_dim_), copies_));
}

Eigen::MatrixXcd OperatorKet::to_matrix() const {
  const Eigen::Index s = side();
  Eigen::MatrixXcd m(s, s);
  for (Eigen::Index r = 0; r < s; ++r)
    for (Eigen::Index c = 0; c < s; ++c) m(r, c) = coefficients_(r * s + c);
  return m;
}

cplx OperatorKet::inner(const OperatorKet& other) const {
  if (other.copies_ != copies_ || other.local_dim_ != local_dim_) {
    throw InvalidArgument("OperatorKet::inner: incompatible kets");
  }
  return coefficients_.dot(other.coefficients_);  // conjugates the left operand
}

OperatorKet OperatorKet::normalized() const {
  const double n = norm();
  if (n == 0.0) throw InvalidArgument("cannot normalize the zero ket");
  return OperatorKet(copies_, local_dim_, coefficients_ / n);
}

// ---------------------------------------------------------------------------
// Permutation kets and Gram matrices

OperatorKet permutation_ket(const Permutation& sigma, int local_dim) {
  if (!is_permutation(sigma)) throw InvalidArgument("permutation_ket: not a permutation");
  const int t = static_cast<int>(sigma.size());
  check_local_dim(t, local_dim);
  const std::size_t q = static_cast<std::size_t>(local_dim);
  const std::size_t side = ipow(q, t);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(side * side));
  std::vector<std::size_t> digits(static_cast<std::size_t>(t));
  for (std::size_t ket = 0; ket < side; ++ket) {
    std::size_t rem = ket;
    for (int c = t - 1; c >= 0; --c) {
      digits[static_cast<std::size_t>(c)] = rem % q;
      rem /= q;
    }
    std::size_t bra = 0;
    for (int c = 0; c < t; ++c) bra = bra * q + digits[static_cast<std::size_t>(sigma[static_cast<std::size_t>(c)])];
    v(static_cast<Eigen::Index>(ket * side + bra)) = 1.0;
  }
  return OperatorKet(t, local_dim, std::move(v));
}

Eigen::MatrixXd gram_matrix(int t, int local_dim) {
  if (local_dim != 2 && local_dim != 4) throw InvalidArgument("gram_matrix: local_dim must be 2 or 4");
  if (t < 1 || t > kMaxCopiesQubit) throw DimensionError("gram_matrix: t must be in [1, 5]");
  const auto perms = all_permutations(t);
  const auto n = static_cast<Eigen::Index>(perms.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index s = 0; s < n; ++s) {
    const Permutation inv = inverse(perms[static_cast<std::size_t>(s)]);
    for (Eigen::Index u = 0; u < n; ++u) {
      g(s, u) = std::pow(static_cast<double>(local_dim), cycle_count(compose(inv, perms[static_cast<std::size_t>(u)])));
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Pauli coordinates

OperatorKet pauli_string_ket(const PauliString& s) {
  const int t = s.copies();
  check_local_dim(t, 2);
  Eigen::VectorXcd coords = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ipow(4, t)));
  coords(static_cast<Eigen::Index>(s.index())) = 1.0;
  return from_pauli_coordinates(t, 2, coords);
}

Eigen::VectorXcd to_pauli_coordinates(const OperatorKet& ket) {
  const auto map = computational_to_interleaved(ket.copies(), ket.local_dim());
  Eigen::VectorXcd inter(ket.coefficients().size());
  for (std::size_t i = 0; i < map.size(); ++i) inter(static_cast<Eigen::Index>(map[i])) = ket.coefficients()(static_cast<Eigen::Index>(i));
  return apply_per_copy(inter, ket.copies(), copy_to_pauli_transform(ket.local_dim()));
}

OperatorKet from_pauli_coordinates(int copies, int local_dim, const Eigen::VectorXcd& coords) {
  check_local_dim(copies, local_dim);
  const Eigen::MatrixXcd back = copy_to_pauli_transform(local_dim).adjoint();
  const Eigen::VectorXcd inter = apply_per_copy(coords, copies, back);
  const auto map = computational_to_interleaved(copies, local_dim);
  Eigen::VectorXcd v(inter.size());
  for (std::size_t i = 0; i < map.size(); ++i) v(static_cast<Eigen::Index>(i)) = inter(static_cast<Eigen::Index>(map[i]));
  return OperatorKet(copies, local_dim, std::move(v));
}

Eigen::VectorXcd apply_per_copy(const Eigen::VectorXcd& v, int copies, const Eigen::MatrixXcd& op) {
  return apply_per_copy_impl(v, copies, op);
}

Eigen::VectorXcd apply_per_copy(const Eigen::VectorXcd& v, int copies, const Eigen::MatrixXd& op) {
  return apply_per_copy_impl(v, copies, op);
}

const std::vector<std::uint32_t>& site_major_to_interleaved(int copies) {
  if (copies < 1 || copies > kMaxCopiesQubit) throw DimensionError("two-site layout supports 1 <= t <= 5");
  static std::mutex mutex;
  static std::map<int, std::vector<std::uint32_t>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(copies);
  if (it != cache.end()) return it->second;
  const std::size_t d = ipow(4, copies);
  std::vector<std::uint32_t> map(d * d);
  for (std::size_t nu = 0; nu < d; ++nu) {
    for (std::size_t mu = 0; mu < d; ++mu) {
      std::size_t out = 0, a = nu, b = mu, scale = 1;
      for (int c = 0; c < copies; ++c) {
        out += (4 * (a % 4) + (b % 4)) * scale;
        a /= 4;
        b /= 4;
        scale *= 16;
      }
      map[nu * d + mu] = static_cast<std::uint32_t>(out);
    }
  }
  return cache.emplace(copies, std::move(map)).first->second;
}

// ---------------------------------------------------------------------------
// Local bases

OperatorKet LocalBasis::ket(int k) const {
  if (k < 0 || k >= size()) throw InvalidArgument("LocalBasis::ket: index out of range");
  return from_pauli_coordinates(copies, 2, kets.col(k));
}

double LocalBasis::orthonormality_defect() const {
  const Eigen::MatrixXcd g = kets.adjoint() * kets;
  return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

LocalBasis pauli_basis(int t) {
  check_local_dim(t, 2);
  const auto d = static_cast<Eigen::Index>(ipow(4, t));
  return LocalBasis{t, "pauli", Eigen::MatrixXcd::Identity(d, d)};
}

void fix_phase(Eigen::VectorXcd& v) {
  if (v.size() == 0) return;
  const double vmax = v.cwiseAbs().maxCoeff();
  if (vmax == 0.0) return;
  Eigen::Index pick = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= vmax * (1.0 - 1e-9)) {
      pick = i;
      break;
    }
  }
  v *= std::conj(v(pick)) / std::abs(v(pick));
  v(pick) = std::abs(v(pick));
}

Eigen::VectorXcd normalized_permutation_coordinates(const Permutation& sigma) {
  const int t = static_cast<int>(sigma.size());
  Eigen::VectorXcd c = to_pauli_coordinates(permutation_ket(sigma, 2));
  return c / std::sqrt(std::pow(2.0, t));
}

LocalBasis u2_invariant_basis(int t) {
  check_local_dim(t, 2);
  const auto perms = all_permutations(t);
  const auto np = static_cast<Eigen::Index>(perms.size());
  const auto d = static_cast<Eigen::Index>(ipow(4, t));
  const auto expected = static_cast<Eigen::Index>(catalan(t));

  const Eigen::MatrixXd gram = gram_matrix(t, 2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram_eig(gram, Eigen::EigenvaluesOnly);
  const double gmax = gram_eig.eigenvalues().maxCoeff();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < np; ++i) rank += gram_eig.eigenvalues()(i) > kNullTolerance * gmax;
  if (np - rank != np - expected) {
    throw ToleranceError("u2_invariant_basis: Gram null space has dimension " + std::to_string(np - rank) +
                         ", expected " + std::to_string(np - expected));
  }

  Eigen::MatrixXcd k(d, np);
  for (Eigen::Index s = 0; s < np; ++s) k.col(s) = to_pauli_coordinates(permutation_ket(perms[static_cast<std::size_t>(s)], 2));

  // Remove the identity direction, then orthonormalize each Pauli-degree block.
  // Degree projection commutes with U^{(x)t} conjugation, so every block of an
  // invariant is itself invariant.
  k.row(0).setZero();
  std::vector<int> degree(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) degree[static_cast<std::size_t>(i)] = PauliString::from_index(t, static_cast<std::size_t>(i)).degree();

  std::vector<Eigen::VectorXcd> elements;
  Eigen::VectorXcd identity = Eigen::VectorXcd::Zero(d);
  identity(0) = 1.0;
  elements.push_back(identity);

  // The span is closed under adjoints (sigma -> sigma^-1), and adjoints act as
  // complex conjugation on Pauli coordinates, so a real basis exists.
  for (int deg = 1; deg <= t; ++deg) {
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(d, 2 * np);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (degree[static_cast<std::size_t>(i)] != deg) continue;
      block.row(i).head(np) = k.row(i).real();
      block.row(i).tail(np) = k.row(i).imag();
    }
    const Eigen::MatrixXd bg = block.transpose() * block;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(bg);
    for (Eigen::Index j = 2 * np - 1; j >= 0; --j) {
      const double lam = eig.eigenvalues()(j);
      if (lam <= kNullTolerance * gmax) continue;
      Eigen::VectorXcd e = (block * eig.eigenvectors().col(j) / std::sqrt(lam)).cast<cplx>();
      fix_phase(e);
      elements.push_back(e);
    }
  }

  if (static_cast<Eigen::Index>(elements.size()) != expected) {
    throw ToleranceError("u2_invariant_basis: found " + std::to_string(elements.size()) + " invariants, expected " +
                         std::to_string(expected));
  }
  LocalBasis basis{t, "u2_invariant", Eigen::MatrixXcd(d, expected)};
  for (Eigen::Index j = 0; j < expected; ++j) basis.kets.col(j) = elements[static_cast<std::size_t>(j)];
  if (basis.orthonormality_defect() > 1e-10) throw ToleranceError("u2_invariant_basis: result is not orthonormal");
  return basis;
}

// ---------------------------------------------------------------------------
// Single-qubit twirl utilities

Eigen::Matrix4d pauli_transfer_matrix_1q(const Eigen::Matrix2cd& u) {
  Eigen::Matrix4d r;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) r(a, b) = 0.5 * (pauli_matrix(a) * u * pauli_matrix(b) * u.adjoint()).trace().real();
  return r;
}

Eigen::Matrix2cd random_u2(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Matrix2cd z;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) z(i, j) = cplx(g(rng), g(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(z);
  Eigen::Matrix2cd q = qr.householderQ();
  const Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 2; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

double twirl_defect(const Eigen::VectorXcd& pauli_coords, int copies, int samples, std::uint64_t seed) {
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Eigen::MatrixXd r = pauli_transfer_matrix_1q(random_u2(seed + static_cast<std::uint64_t>(s) * 0x9E3779B97F4A7C15ULL));
    const Eigen::VectorXcd moved = apply_per_copy(pauli_coords, copies, r);
    worst = std::max(worst, (moved - pauli_coords).norm());
  }
  return worst;
}

}  // namespace rqcm
