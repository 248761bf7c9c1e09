#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rqcm/gate_averaging.hpp"
#include "rqcm/lanczos.hpp"
#include "rqcm/occupation_basis.hpp"

namespace rqcm {

using SparseMatrixXcd = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

/// Nonzero two-body coefficients c_{alpha beta gamma delta} = <<e_alpha e_gamma|m|e_beta e_delta>>
/// grouped by the annihilated pair (beta, delta).
struct TwoBodyCoefficients {
  struct Entry {
    int alpha;
    int gamma;
    cplx value;
  };
  int local_size = 0;
  std::vector<std::vector<Entry>> by_column;  ///< index beta * d + delta

  static TwoBodyCoefficients from_matrix(const Eigen::MatrixXcd& c, int local_size, double drop = 1e-14);
  static TwoBodyCoefficients from_operator(const LocalMomentOperator& m, double drop = 1e-14);
};

/// M restricted to the totally symmetric sector over a local basis.
struct SymmetricMomentMatrix {
  int n = 0;
  int t = 0;
  int local_size = 0;
  std::string basis_descriptor;
  std::shared_ptr<const OccupationBasis> basis;
  SparseMatrixXcd matrix;
  /// max |A - A^dagger| before symmetrization.
  double asymmetry = 0.0;
  /// True when every entry is real (imaginary parts below 1e-14 are zeroed).
  bool real = false;

  Eigen::Index dimension() const { return matrix.rows(); }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const { return matrix * v; }
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix); }
};

/// Normal-ordered two-body action
/// M = 1/(n(n-1)) sum c_{abgd} a+_a a+_g a_b a_d, which equals
/// (B B - delta B)/(n(n-1)) and hence the pair average over i<j.
SymmetricMomentMatrix assemble_symmetric_moment_matrix(const LocalMomentOperator& m_local, int n);
SymmetricMomentMatrix assemble_symmetric_moment_matrix(const TwoBodyCoefficients& c, int n, int t,
                                                       const std::string& basis_descriptor);

/// Fock images of (|sigma>>/|sigma>>|)^{(x)n} for every sigma in S_t, in
/// lexicographic permutation order. Throws InvalidArgument if the local basis
/// does not contain the permutation kets.
std::vector<Eigen::VectorXcd> permutation_fixed_vectors(const LocalBasis& local, const OccupationBasis& occupations);

enum class SolverMethod { dense, iterative };
const char* to_string(SolverMethod m);

struct SpectralOptions {
  /// Dense eigensolve at or below this dimension. Eigen's unblocked
  /// tridiagonalization takes ~6 s at 1820 and ~70 s at 4000 on one core.
  Eigen::Index dense_limit = 1500;
  double fixed_tolerance = 1e-8;
  double rank_tolerance = 1e-8;
  /// Eigenvalues within this distance of lambda1 count toward its multiplicity.
  double degeneracy_tolerance = 1e-8;
  /// Iterative path: how many extra locked solves to spend probing
  /// multiplicity; the reported multiplicity saturates at probe + 1.
  int multiplicity_probe = 8;
  LanczosOptions lanczos;
};

struct SpectralResult {
  Eigen::Index dimension = 0;
  int unit_multiplicity = 0;
  double lambda1 = 0.0;
  double gap = 0.0;
  SolverMethod method = SolverMethod::dense;
  double residual = 0.0;
  int lambda1_multiplicity = 1;
  /// max ||M v - v|| over the supplied fixed vectors.
  double fixed_defect = 0.0;
  int iterations = 0;
  Eigen::VectorXcd eigenvector;
};

/// Largest eigenvalue of M on the orthogonal complement of span(fixed).
/// Throws DeflationError if a supplied vector is not fixed within
/// options.fixed_tolerance and ConvergenceError if Lanczos stalls.
SpectralResult spectral_gap(const SymmetricMomentMatrix& m, const std::vector<Eigen::VectorXcd>& fixed,
                            const SpectralOptions& options = {});

/// Assemble, build the permutation fixed vectors and solve.
SpectralResult sector_spectral_gap(const LocalMomentOperator& m_local, int n, const SpectralOptions& options = {});

}  // namespace rqcm
