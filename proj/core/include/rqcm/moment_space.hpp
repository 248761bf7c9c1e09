#pragma once

// Local moment spaces: operators on t copies of one qubit (local_dim 2) or of
// a qubit pair (local_dim 4), viewed as vectors ("operator kets").
//
// Two coordinate systems are used throughout:
//
//  * computational: the entries of the operator, ket-copy digits first, then
//    bra-copy digits, each block row-major with copy 1 outermost. This is the
//    OperatorKet storage format.
//  * Pauli: coefficients in the orthonormal basis of normalized Pauli strings.
//    For one qubit the string label of copy c is nu_c in {0,1,2,3} and the
//    index is sum_c nu_c 4^(t-1-c). For a qubit pair the per-copy label is
//    4 p_c + q_c (p on the first qubit) and the index is sum_c label_c 16^(t-1-c).
//
// Two-site vectors (a pair of local moment spaces) are stored in "site-major"
// Pauli layout, index = nu * 4^t + mu, so that the product ket |a>>|b>> is
// simply kron(a, b) of the one-site Pauli coordinates.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rqcm/permutation.hpp"

namespace rqcm {

using cplx = std::complex<double>;

/// Hard caps on dense realizations of permutation kets and invariant bases.
inline constexpr int kMaxCopiesQubit = 5;
inline constexpr int kMaxCopiesPair = 4;

/// Integer power for small non-negative exponents.
std::uint64_t ipow(std::uint64_t base, int exp);

/// A tensor product of single-qubit Pauli matrices across t copies.
struct PauliString {
  std::vector<std::uint8_t> labels;  ///< 0 = I, 1 = X, 2 = Y, 3 = Z

  int copies() const { return static_cast<int>(labels.size()); }
  int degree() const;
  /// Index in the one-site Pauli coordinate layout.
  std::size_t index() const;
  /// e.g. "XIZ".
  std::string to_string() const;

  static PauliString from_index(int copies, std::size_t index);
  static PauliString parse(const std::string& text);
};

/// Vectorized operator on t copies of a local_dim-dimensional space.
class OperatorKet {
 public:
  OperatorKet(int copies, int local_dim, Eigen::VectorXcd coefficients);

  static OperatorKet from_matrix(int copies, int local_dim, const Eigen::MatrixXcd& op);
  static OperatorKet zero(int copies, int local_dim);

  int copies() const { return copies_; }
  int local_dim() const { return local_dim_; }
  /// Side length of the operator matrix, local_dim^t.
  Eigen::Index side() const;
  const Eigen::VectorXcd& coefficients() const { return coefficients_; }

  Eigen::MatrixXcd to_matrix() const;

  /// <<this|other>> = tr(this^dagger other).
  cplx inner(const OperatorKet& other) const;
  double norm() const { return coefficients_.norm(); }
  OperatorKet normalized() const;

 private:
  int copies_;
  int local_dim_;
  Eigen::VectorXcd coefficients_;
};

/// Vectorized permutation operator sum_i |i_1..i_t><i_sigma(1)..i_sigma(t)|.
OperatorKet permutation_ket(const Permutation& sigma, int local_dim);

/// Entry (s, u) is <<sigma_s|sigma_u>> = local_dim^cycles(sigma_s^-1 sigma_u), with
/// permutations in lexicographic order.
Eigen::MatrixXd gram_matrix(int t, int local_dim);

/// Normalized Pauli-string ket (Hilbert-Schmidt norm 1).
OperatorKet pauli_string_ket(const PauliString& s);

/// Computational <-> normalized-Pauli coordinates (local_dim 2 or 4).
Eigen::VectorXcd to_pauli_coordinates(const OperatorKet& ket);
OperatorKet from_pauli_coordinates(int copies, int local_dim, const Eigen::VectorXcd& coords);

/// Applies `op` (K x K) to every copy mode of a vector of length K^t.
Eigen::VectorXcd apply_per_copy(const Eigen::VectorXcd& v, int copies, const Eigen::MatrixXcd& op);
Eigen::VectorXcd apply_per_copy(const Eigen::VectorXcd& v, int copies, const Eigen::MatrixXd& op);

/// Index maps between site-major two-site layout (nu * 4^t + mu) and the
/// copy-interleaved pair layout (sum_c (4 nu_c + mu_c) 16^(t-1-c)).
/// `result[site_major] = interleaved`.
const std::vector<std::uint32_t>& site_major_to_interleaved(int copies);

/// Single-qubit Pauli matrices sigma_0..sigma_3.
const Eigen::Matrix2cd& pauli_matrix(int label);

/// An orthonormal set of local kets stored by Pauli coordinates (columns).
struct LocalBasis {
  int copies = 0;
  std::string descriptor;
  Eigen::MatrixXcd kets;  ///< 4^t x size

  int size() const { return static_cast<int>(kets.cols()); }
  OperatorKet ket(int k) const;
  /// max |B^dagger B - I|.
  double orthonormality_defect() const;
};

/// All 4^t normalized Pauli strings, in index order.
LocalBasis pauli_basis(int t);

/// Orthonormal basis of the commutant of {U^{(x)t}: U in U(2)}, i.e. the span of
/// the t! permutation kets (dimension C_t). Element 0 is the normalized
/// identity; the remaining elements are grouped by Pauli degree (2, 3, ...),
/// each with real Pauli coordinates whose largest-magnitude entry is positive.
/// Throws ToleranceError if the Gram null space is not t! - C_t dimensional.
LocalBasis u2_invariant_basis(int t);

/// Pauli coordinates of the normalized permutation ket |sigma>> on one qubit.
Eigen::VectorXcd normalized_permutation_coordinates(const Permutation& sigma);

/// Makes the largest-magnitude component real positive (first one on ties).
void fix_phase(Eigen::VectorXcd& v);

/// Single-qubit Pauli transfer matrix R[a][b] = tr(P_a U P_b U^dagger) / 2 (real).
Eigen::Matrix4d pauli_transfer_matrix_1q(const Eigen::Matrix2cd& u);

/// max || (U^{(x)t}) w (U^{(x)t})^dagger - w || over `samples` random U in U(2).
double twirl_defect(const Eigen::VectorXcd& pauli_coords, int copies, int samples, std::uint64_t seed);

/// Haar-random single-qubit unitary (QR of a complex Gaussian with phase fix).
Eigen::Matrix2cd random_u2(std::uint64_t seed);

}  // namespace rqcm
