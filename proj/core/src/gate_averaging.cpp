#include "rqcm/gate_averaging.hpp"

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <tuple>

#include "rqcm/errors.hpp"

namespace rqcm {

namespace {

constexpr double kWeightTolerance = 1e-12;
constexpr double kUnitaryTolerance = 1e-10;
constexpr double kDuplicateDistance = 1e-12;
constexpr double kAsymmetryError = 1e-8;

// Bucket key for candidate duplicate lookup: entries rounded to a 1e-9 grid.
using GateKey = std::vector<long long>;

GateKey gate_key(const Gate& g) {
  GateKey k;
  k.reserve(32);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      k.push_back(std::llround(g(i, j).real() * 1e9));
      k.push_back(std::llround(g(i, j).imag() * 1e9));
    }
  return k;
}

// Global phase drops out of every moment, so gates are compared after
// rotating the first (near-)largest entry onto the positive real axis.
Gate phase_normalized(const Gate& g) {
  const double top = g.cwiseAbs().maxCoeff();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (std::abs(g(i, j)) > top - 1e-6) return g * (std::conj(g(i, j)) / std::abs(g(i, j)));
  return g;
}

// Multiset of weighted gates with lookup up to global phase.
class GateIndex {
 public:
  // Returns the slot of an existing gate within kDuplicateDistance, or -1.
  long find(const Gate& g) const { return find_normalized(phase_normalized(g)); }

  void add(const Gate& g, double w) {
    const Gate c = phase_normalized(g);
    const long slot = find_normalized(c);
    if (slot >= 0) {
      weights_[static_cast<std::size_t>(slot)] += w;
      return;
    }
    buckets_[gate_key(c)].push_back(gates_.size());
    gates_.push_back(g);
    normalized_.push_back(c);
    weights_.push_back(w);
  }

  double weight_of(const Gate& g) const {
    const long slot = find(g);
    return slot < 0 ? 0.0 : weights_[static_cast<std::size_t>(slot)];
  }

  std::vector<Gate> gates_;
  std::vector<double> weights_;

 private:
  long find_normalized(const Gate& c) const {
    auto it = buckets_.find(gate_key(c));
    if (it == buckets_.end()) return -1;
    for (std::size_t slot : it->second)
      if ((normalized_[slot] - c).cwiseAbs().maxCoeff() < kDuplicateDistance) return static_cast<long>(slot);
    return -1;
  }

  std::vector<Gate> normalized_;
  std::map<GateKey, std::vector<std::size_t>> buckets_;
};

Eigen::VectorXcd to_interleaved(const Eigen::VectorXcd& v, int t) {
  const auto& map = site_major_to_interleaved(t);
  Eigen::VectorXcd out(v.size());
  for (std::size_t i = 0; i < map.size(); ++i) out(map[i]) = v(static_cast<Eigen::Index>(i));
  return out;
}

Eigen::VectorXcd from_interleaved(const Eigen::VectorXcd& v, int t) {
  const auto& map = site_major_to_interleaved(t);
  Eigen::VectorXcd out(v.size());
  for (std::size_t i = 0; i < map.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(map[i]);
  return out;
}

class HaarAverage final : public TwoSiteAverage {
 public:
  explicit HaarAverage(int t) : TwoSiteAverage(t) {
    if (t < 1 || t > kMaxCopiesPair) {
      throw ToleranceError("Haar projector: two-site Gram matrix is singular for t > 4 (requested t = " +
                           std::to_string(t) + ")");
    }
    const auto perms = all_permutations(t);
    const auto d = static_cast<Eigen::Index>(ipow(4, t));
    kets_.resize(d * d, static_cast<Eigen::Index>(perms.size()));
    for (std::size_t s = 0; s < perms.size(); ++s) {
      const Eigen::VectorXcd a = to_pauli_coordinates(permutation_ket(perms[s], 2));
      for (Eigen::Index nu = 0; nu < d; ++nu) kets_.col(static_cast<Eigen::Index>(s)).segment(nu * d, d) = a(nu) * a;
    }
    const Eigen::MatrixXd gram = gram_matrix(t, 4);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-12) {
      throw ToleranceError("Haar projector: two-site Gram matrix inversion failed");
    }
    gram_inverse_ = ldlt.solve(Eigen::MatrixXd::Identity(gram.rows(), gram.cols()));
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const override {
    const Eigen::VectorXcd overlaps = kets_.adjoint() * v;
    return kets_ * (gram_inverse_.cast<cplx>() * overlaps);
  }

 private:
  Eigen::MatrixXcd kets_;  // columns |sigma>>|sigma>>, unnormalized
  Eigen::MatrixXd gram_inverse_;
};

class FiniteAverage final : public TwoSiteAverage {
 public:
  FiniteAverage(const GateDistribution& dist, int t) : TwoSiteAverage(t), weights_(dist.weights()) {
    if (t < 1 || t > kMaxCopiesPair) throw DimensionError("finite-set two-site average supports 1 <= t <= 4");
    transfers_.reserve(dist.gates().size());
    for (const auto& g : dist.gates()) transfers_.push_back(pauli_transfer_matrix(g).entries);
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const override {
    const int t = copies();
    const Eigen::VectorXcd in = to_interleaved(v, t);
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(v.size());
    for (std::size_t g = 0; g < transfers_.size(); ++g) {
      const Eigen::MatrixXd r = transfers_[g];
      acc += weights_[g] * apply_per_copy(in, t, r);
    }
    return from_interleaved(acc, t);
  }

 private:
  std::vector<double> weights_;
  std::vector<Eigen::Matrix<double, 16, 16>> transfers_;
};

bool check_left_swap_invariance(const TwoSiteAverage& avg) {
  const auto d2 = static_cast<Eigen::Index>(ipow(16, avg.copies()));
  std::mt19937_64 rng(0x5EEDULL);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 2; ++trial) {
    Eigen::VectorXcd v(d2);
    for (Eigen::Index i = 0; i < d2; ++i) v(i) = cplx(g(rng), g(rng));
    const Eigen::VectorXcd mv = avg.apply(v);
    if ((swap_sites(mv) - mv).norm() > 1e-10 * v.norm()) return false;
  }
  return true;
}

}  // namespace

Gate kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Gate g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) g(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return g;
}

Gate swap_gate() {
  Gate s = Gate::Zero();
  s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1.0;
  return s;
}

Gate cnot_gate() {
  Gate c = Gate::Zero();
  c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1.0;
  return c;
}

bool is_unitary(const Gate& u, double tol) {
  return (u * u.adjoint() - Gate::Identity()).cwiseAbs().maxCoeff() <= tol;
}

Gate canonical_gate(double q, double r, double s) {
  const cplx i(0.0, 1.0);
  const Gate id = Gate::Identity();
  const Gate xx = kron(pauli_matrix(1), pauli_matrix(1));
  const Gate yy = kron(pauli_matrix(2), pauli_matrix(2));
  const Gate zz = kron(pauli_matrix(3), pauli_matrix(3));
  // XX, YY and ZZ commute and square to the identity.
  return (std::cos(q) * id + i * std::sin(q) * xx) * (std::cos(r) * id + i * std::sin(r) * yy) *
         (std::cos(s) * id + i * std::sin(s) * zz);
}

PauliTransferMatrix pauli_transfer_matrix(const Gate& u) {
  if (!is_unitary(u, kUnitaryTolerance)) throw InvalidArgument("pauli_transfer_matrix: gate is not unitary");
  std::array<Gate, 16> p;
  for (int a = 0; a < 16; ++a) p[static_cast<std::size_t>(a)] = kron(pauli_matrix(a / 4), pauli_matrix(a % 4));
  PauliTransferMatrix r;
  for (int b = 0; b < 16; ++b) {
    const Gate moved = u * p[static_cast<std::size_t>(b)] * u.adjoint();
    for (int a = 0; a < 16; ++a) r.entries(a, b) = 0.25 * (p[static_cast<std::size_t>(a)] * moved).trace().real();
  }
  return r;
}

// ---------------------------------------------------------------------------
// GateDistribution

GateDistribution GateDistribution::haar_u4() {
  GateDistribution d;
  d.kind_ = Kind::haar_u4;
  d.name_ = "haar-u4";
  return d;
}

GateDistribution GateDistribution::finite_set(std::string name, std::vector<Gate> gates, std::vector<double> weights,
                                              bool declared_symmetric) {
  if (gates.empty()) throw InvalidArgument("finite gate set is empty");
  if (gates.size() != weights.size()) throw InvalidArgument("finite gate set: gates and weights differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (!(weights[i] >= 0.0)) throw InvalidArgument("finite gate set: negative or NaN weight");
    if (!is_unitary(gates[i], kUnitaryTolerance)) {
      throw InvalidArgument("finite gate set: gate " + std::to_string(i) + " is not unitary within 1e-10");
    }
    total += weights[i];
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw InvalidArgument("finite gate set: weights sum to " + std::to_string(total) + ", not 1");
  }

  GateIndex index;
  if (declared_symmetric) {
    for (std::size_t i = 0; i < gates.size(); ++i) index.add(gates[i], weights[i]);
    for (std::size_t i = 0; i < index.gates_.size(); ++i) {
      if (std::abs(index.weight_of(index.gates_[i].adjoint()) - index.weights_[i]) > kWeightTolerance) {
        throw InvalidArgument("finite gate set declared dagger-symmetric but U and U^dagger weights differ");
      }
    }
  } else {
    for (std::size_t i = 0; i < gates.size(); ++i) {
      index.add(gates[i], 0.5 * weights[i]);
      index.add(gates[i].adjoint(), 0.5 * weights[i]);
    }
  }

  GateDistribution d;
  d.kind_ = Kind::finite_set;
  d.name_ = std::move(name);
  d.gates_ = std::move(index.gates_);
  d.weights_ = std::move(index.weights_);
  d.dagger_symmetrized_ = true;

  GateIndex lookup;
  for (std::size_t i = 0; i < d.gates_.size(); ++i) lookup.add(d.gates_[i], d.weights_[i]);
  const Gate s = swap_gate();
  d.swap_invariant_ = true;
  for (std::size_t i = 0; i < d.gates_.size() && d.swap_invariant_; ++i) {
    const double w = d.weights_[i];
    if (std::abs(lookup.weight_of(s * d.gates_[i]) - w) > kWeightTolerance ||
        std::abs(lookup.weight_of(d.gates_[i] * s) - w) > kWeightTolerance) {
      d.swap_invariant_ = false;
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Two-site averages

std::shared_ptr<const TwoSiteAverage> make_haar_average(int t) { return std::make_shared<HaarAverage>(t); }

std::shared_ptr<const TwoSiteAverage> make_finite_average(const GateDistribution& dist, int t) {
  if (dist.kind() != GateDistribution::Kind::finite_set) throw InvalidArgument("make_finite_average: not a finite set");
  return std::make_shared<FiniteAverage>(dist, t);
}

std::shared_ptr<const TwoSiteAverage> make_two_site_average(const GateDistribution& dist, int t) {
  if (dist.kind() == GateDistribution::Kind::haar_u4) return make_haar_average(t);
  return make_finite_average(dist, t);
}

cplx haar_m_element(int t, const std::pair<OperatorKet, OperatorKet>& bra,
                    const std::pair<OperatorKet, OperatorKet>& ket) {
  if (t > kMaxCopiesPair) {
    throw ToleranceError("haar_m_element: two-site Gram matrix is singular for t > 4");
  }
  for (const OperatorKet* k : {&bra.first, &bra.second, &ket.first, &ket.second}) {
    if (k->copies() != t || k->local_dim() != 2) throw InvalidArgument("haar_m_element: kets must be one-qubit, t copies");
  }
  const auto perms = all_permutations(t);
  const auto np = static_cast<Eigen::Index>(perms.size());
  Eigen::VectorXcd left(np), right(np);
  for (Eigen::Index s = 0; s < np; ++s) {
    const OperatorKet p = permutation_ket(perms[static_cast<std::size_t>(s)], 2);
    left(s) = bra.first.inner(p) * bra.second.inner(p);
    right(s) = p.inner(ket.first) * p.inner(ket.second);
  }
  const Eigen::MatrixXd gram = gram_matrix(t, 4);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-12) throw ToleranceError("haar_m_element: Gram inversion failed");
  const Eigen::VectorXcd coeffs = ldlt.solve(right.real()).cast<cplx>() + cplx(0, 1) * ldlt.solve(right.imag()).cast<cplx>();
  return left.transpose() * coeffs;
}

cplx pair_overlap(const Eigen::VectorXcd& v, const Eigen::VectorXcd& left, const Eigen::VectorXcd& right) {
  const Eigen::Index d = left.size();
  if (right.size() != d || v.size() != d * d) throw InvalidArgument("pair_overlap: size mismatch");
  // Row-major view: W(nu, mu) = v[nu * d + mu].
  const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w(v.data(), d, d);
  return left.dot(w * right.conjugate());
}

Eigen::VectorXcd swap_sites(const Eigen::VectorXcd& v) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw InvalidArgument("swap_sites: not a two-site vector");
  Eigen::VectorXcd out(v.size());
  for (Eigen::Index nu = 0; nu < d; ++nu)
    for (Eigen::Index mu = 0; mu < d; ++mu) out(mu * d + nu) = v(nu * d + mu);
  return out;
}

// ---------------------------------------------------------------------------
// LocalMomentOperator

LocalMomentOperator::LocalMomentOperator(int t, LocalBasis basis, std::shared_ptr<const TwoSiteAverage> average,
                                         std::string distribution_name, bool left_swap_invariant)
    : t_(t),
      basis_(std::move(basis)),
      average_(std::move(average)),
      distribution_name_(std::move(distribution_name)),
      left_swap_invariant_(left_swap_invariant) {
  if (!average_ || average_->copies() != t_ || basis_.copies != t_) {
    throw InvalidArgument("LocalMomentOperator: basis/average order mismatch");
  }
  if (basis_.orthonormality_defect() > 1e-10) throw InvalidArgument("LocalMomentOperator: basis is not orthonormal");
  const int d = basis_.size();
  if (d > kMaterializeLimit) return;

  const Eigen::Index dim = static_cast<Eigen::Index>(d) * d;
  const Eigen::Index nd = basis_.kets.rows();
  Eigen::MatrixXcd a(dim, dim);
  const Eigen::MatrixXcd e = basis_.kets;
  const Eigen::MatrixXcd e_conj = e.conjugate();
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Eigen::Index beta = col / d;
    const Eigen::Index delta = col % d;
    Eigen::VectorXcd in(nd * nd);
    for (Eigen::Index nu = 0; nu < nd; ++nu) in.segment(nu * nd, nd) = e(nu, beta) * e.col(delta);
    const Eigen::VectorXcd out = average_->apply(in);
    const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w(out.data(), nd, nd);
    const Eigen::MatrixXcd block = e.adjoint() * w * e_conj;  // (alpha, gamma)
    for (Eigen::Index alpha = 0; alpha < d; ++alpha)
      for (Eigen::Index gamma = 0; gamma < d; ++gamma) a(alpha * d + gamma, col) = block(alpha, gamma);
  }
  asymmetry_ = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (asymmetry_ > kAsymmetryError) {
    throw ToleranceError("LocalMomentOperator: matrix is not Hermitian (asymmetry " + std::to_string(asymmetry_) +
                         "); is the distribution dagger-symmetric?");
  }
  matrix_ = 0.5 * (a + a.adjoint());
  materialized_ = true;
}

const Eigen::MatrixXcd& LocalMomentOperator::matrix() const {
  if (!materialized_) throw DimensionError("LocalMomentOperator: dense matrix not materialized for this basis size");
  return matrix_;
}

Eigen::VectorXcd LocalMomentOperator::apply_pair(const Eigen::VectorXcd& left, const Eigen::VectorXcd& right) const {
  const Eigen::Index nd = basis_.kets.rows();
  if (left.size() != nd || right.size() != nd) throw InvalidArgument("apply_pair: size mismatch");
  Eigen::VectorXcd in(nd * nd);
  for (Eigen::Index nu = 0; nu < nd; ++nu) in.segment(nu * nd, nd) = left(nu) * right;
  return average_->apply(in);
}

cplx LocalMomentOperator::element(int alpha, int gamma, int beta, int delta) const {
  const int d = basis_.size();
  if (materialized_) return matrix_(alpha * d + gamma, beta * d + delta);
  const Eigen::VectorXcd out = apply_pair(basis_.kets.col(beta), basis_.kets.col(delta));
  return pair_overlap(out, basis_.kets.col(alpha), basis_.kets.col(gamma));
}

LocalMomentOperator build_local_moment_operator(const GateDistribution& dist, int t, const LocalBasis& basis,
                                                int /*quadrature_samples*/) {
  if (basis.copies != t) throw InvalidArgument("build_local_moment_operator: basis built for a different t");
  if (dist.kind() == GateDistribution::Kind::haar_u4 && t > kMaxCopiesPair) {
    throw InvalidArgument("build_local_moment_operator: haar-u4 supports t <= 4");
  }
  if (dist.kind() == GateDistribution::Kind::finite_set && !dist.dagger_symmetrized()) {
    throw InvalidArgument("build_local_moment_operator: finite gate set is not dagger-symmetrized");
  }
  auto average = make_two_site_average(dist, t);
  const bool swap_inv = dist.kind() == GateDistribution::Kind::haar_u4 || check_left_swap_invariance(*average);
  return LocalMomentOperator(t, basis, std::move(average), dist.name(), swap_inv);
}

}  // namespace rqcm
