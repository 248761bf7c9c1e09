#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rqcm/moment_space.hpp"

namespace rqcm {

/// Two-qubit unitary; computational index 2 b1 + b2 with b1 the first qubit.
using Gate = Eigen::Matrix4cd;

Gate kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b);
Gate swap_gate();
Gate cnot_gate();
bool is_unitary(const Gate& u, double tol = 1e-10);

/// exp{i (q XX + r YY + s ZZ)}.
Gate canonical_gate(double q, double r, double s);

/// R[(p',q'),(p,q)] = tr[(s_p' (x) s_q') U (s_p (x) s_q) U^dagger] / 4, index 4p+q.
struct PauliTransferMatrix {
  Eigen::Matrix<double, 16, 16> entries;
};

/// Throws InvalidArgument if `u` is not unitary within 1e-10.
PauliTransferMatrix pauli_transfer_matrix(const Gate& u);

/// A dagger-symmetric probability distribution over two-qubit unitaries.
class GateDistribution {
 public:
  enum class Kind { haar_u4, finite_set };

  static GateDistribution haar_u4();

  /// Validates unitarity and weight normalization. Unless `declared_symmetric`,
  /// the set is closed under U -> U^dagger (halved weights; gates equal up to a
  /// global phase are merged). A declared-symmetric set is verified instead.
  static GateDistribution finite_set(std::string name, std::vector<Gate> gates, std::vector<double> weights,
                                     bool declared_symmetric = false);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<double>& weights() const { return weights_; }
  bool dagger_symmetrized() const { return dagger_symmetrized_; }
  /// mu(S U) = mu(U S) = mu(U) for the qubit swap S.
  bool swap_invariant() const { return swap_invariant_; }
  /// Invariant under U(2) x U(2) on either side.
  bool locally_invariant() const { return kind_ == Kind::haar_u4; }

 private:
  GateDistribution() = default;

  Kind kind_ = Kind::haar_u4;
  std::string name_;
  std::vector<Gate> gates_;
  std::vector<double> weights_;
  bool dagger_symmetrized_ = true;
  bool swap_invariant_ = true;
};

/// The averaged two-site superoperator m_t acting on site-major two-site Pauli
/// coordinates (length 16^t).
class TwoSiteAverage {
 public:
  explicit TwoSiteAverage(int copies) : copies_(copies) {}
  virtual ~TwoSiteAverage() = default;

  int copies() const { return copies_; }
  virtual Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const = 0;

 private:
  int copies_;
};

/// Haar on U(4): orthogonal projector onto span{|sigma>>|sigma>>}. Requires t <= 4.
std::shared_ptr<const TwoSiteAverage> make_haar_average(int t);
/// Weighted average of R(U)^{(x)t} over a finite gate set.
std::shared_ptr<const TwoSiteAverage> make_finite_average(const GateDistribution& dist, int t);
std::shared_ptr<const TwoSiteAverage> make_two_site_average(const GateDistribution& dist, int t);

/// <<bra.first bra.second| m_t(Haar) |ket.first ket.second>> for one-qubit local
/// kets, evaluated through the permutation projector with the exact two-site
/// Gram matrix 4^cycles. Throws ToleranceError for t > 4.
cplx haar_m_element(int t, const std::pair<OperatorKet, OperatorKet>& bra,
                    const std::pair<OperatorKet, OperatorKet>& ket);

/// sum conj(left_nu) conj(right_mu) v[nu * 4^t + mu].
cplx pair_overlap(const Eigen::VectorXcd& v, const Eigen::VectorXcd& left, const Eigen::VectorXcd& right);

/// Site exchange of a site-major two-site vector.
Eigen::VectorXcd swap_sites(const Eigen::VectorXcd& v);

/// Matrix of m_t in a local basis pair: entry ((alpha,gamma),(beta,delta)) =
/// <<e_alpha e_gamma| m_t |e_beta e_delta>>, row index alpha * d + gamma.
class LocalMomentOperator {
 public:
  LocalMomentOperator(int t, LocalBasis basis, std::shared_ptr<const TwoSiteAverage> average,
                      std::string distribution_name, bool left_swap_invariant);

  int copies() const { return t_; }
  const LocalBasis& basis() const { return basis_; }
  int local_size() const { return basis_.size(); }
  const std::string& distribution_name() const { return distribution_name_; }
  const TwoSiteAverage& average() const { return *average_; }

  /// Dense matrix is materialized for local bases of size <= kMaterializeLimit.
  static constexpr int kMaterializeLimit = 16;
  bool materialized() const { return materialized_; }
  const Eigen::MatrixXcd& matrix() const;
  /// max |A - A^dagger| before Hermitian symmetrization (materialized only).
  double asymmetry() const { return asymmetry_; }

  /// S m_t = m_t with S the site exchange (Haar: exact).
  bool left_swap_invariant() const { return left_swap_invariant_; }

  cplx element(int alpha, int gamma, int beta, int delta) const;
  /// m_t (left (x) right) for one-site Pauli coordinate vectors.
  Eigen::VectorXcd apply_pair(const Eigen::VectorXcd& left, const Eigen::VectorXcd& right) const;

 private:
  int t_;
  LocalBasis basis_;
  std::shared_ptr<const TwoSiteAverage> average_;
  std::string distribution_name_;
  bool left_swap_invariant_;
  bool materialized_ = false;
  Eigen::MatrixXcd matrix_;
  double asymmetry_ = 0.0;
};

/// Builds m_t over `basis`. Haar uses the exact permutation projector (t <= 4);
/// finite sets use factorized Pauli transfer products. `quadrature_samples` is
/// reserved for continuous non-Haar distributions and is ignored.
LocalMomentOperator build_local_moment_operator(const GateDistribution& dist, int t, const LocalBasis& basis,
                                                int quadrature_samples = 0);

}  // namespace rqcm
