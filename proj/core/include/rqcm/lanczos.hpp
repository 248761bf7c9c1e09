#pragma once

#include <complex>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace rqcm {

struct LanczosOptions {
  int krylov_dim = 160;
  int max_restarts = 80;
  /// Convergence when ||A x - theta x|| <= tolerance.
  double tolerance = 1e-10;
  std::uint64_t seed = 20240607;
};

template <typename Scalar>
struct LanczosResult {
  double value = 0.0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> vector;
  double residual = 0.0;
  int iterations = 0;  ///< total operator applications
  bool converged = false;
};

/// Largest algebraic eigenvalue of a Hermitian operator restricted to the
/// orthogonal complement of the columns of `deflate` (orthonormal, invariant
/// under the operator). Restarted Lanczos with full reorthogonalization.
template <typename Scalar>
LanczosResult<Scalar> lanczos_largest(
    const std::function<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&)>& op,
    Eigen::Index dim, const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& deflate,
    const LanczosOptions& options = {});

extern template LanczosResult<double> lanczos_largest<double>(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>&, Eigen::Index, const Eigen::MatrixXd&,
    const LanczosOptions&);
extern template LanczosResult<std::complex<double>> lanczos_largest<std::complex<double>>(
    const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>&, Eigen::Index, const Eigen::MatrixXcd&,
    const LanczosOptions&);

}  // namespace rqcm
