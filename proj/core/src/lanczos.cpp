#include "rqcm/lanczos.hpp"

#include <cmath>
#include <random>

#include "rqcm/errors.hpp"

namespace rqcm {

namespace {

template <typename Scalar>
Scalar random_scalar(std::mt19937_64& rng, std::normal_distribution<double>& g);

template <>
double random_scalar<double>(std::mt19937_64& rng, std::normal_distribution<double>& g) {
  return g(rng);
}

template <>
std::complex<double> random_scalar<std::complex<double>>(std::mt19937_64& rng, std::normal_distribution<double>& g) {
  const double re = g(rng);
  return {re, g(rng)};
}

template <typename Vec, typename Mat>
void project_out(Vec& w, const Mat& basis, Eigen::Index cols) {
  if (cols == 0) return;
  const auto block = basis.leftCols(cols);
  // Two passes of classical Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass) w.noalias() -= block * (block.adjoint() * w);
}

}  // namespace

template <typename Scalar>
LanczosResult<Scalar> lanczos_largest(
    const std::function<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&)>& op,
    Eigen::Index dim, const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& deflate,
    const LanczosOptions& options) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  if (deflate.rows() != dim && deflate.cols() > 0) throw InvalidArgument("lanczos_largest: deflation basis has wrong length");
  const Eigen::Index free_dim = dim - deflate.cols();
  if (free_dim <= 0) throw InvalidArgument("lanczos_largest: deflated complement is empty");

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> g;
  Vec start(dim);
  for (Eigen::Index i = 0; i < dim; ++i) start(i) = random_scalar<Scalar>(rng, g);
  project_out(start, deflate, deflate.cols());
  start.normalize();

  const Eigen::Index m = std::min<Eigen::Index>(options.krylov_dim, free_dim);
  Mat v(dim, m + 1);
  LanczosResult<Scalar> result;

  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    v.col(0) = start;
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
    Eigen::Index steps = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      Vec w = op(v.col(j));
      ++result.iterations;
      project_out(w, deflate, deflate.cols());
      alpha(j) = std::real(v.col(j).dot(w));
      project_out(w, v, j + 1);
      steps = j + 1;
      const double b = w.norm();
      beta(j) = b;
      if (j + 1 == m || b < 1e-13) break;
      v.col(j + 1) = w / b;
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(steps, steps);
    for (Eigen::Index j = 0; j < steps; ++j) {
      tri(j, j) = alpha(j);
      if (j + 1 < steps) tri(j, j + 1) = tri(j + 1, j) = beta(j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri);
    const Eigen::VectorXd y = eig.eigenvectors().col(steps - 1);

    Vec x = v.leftCols(steps) * y.cast<Scalar>();
    project_out(x, deflate, deflate.cols());
    x.normalize();
    Vec ax = op(x);
    ++result.iterations;
    const double rq = std::real(x.dot(ax));
    const double residual = (ax - rq * x).norm();

    result.value = rq;
    result.vector = x;
    result.residual = residual;
    if (residual <= options.tolerance) {
      result.converged = true;
      return result;
    }
    start = x;
  }
  return result;
}

template LanczosResult<double> lanczos_largest<double>(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>&,
                                                       Eigen::Index, const Eigen::MatrixXd&, const LanczosOptions&);
template LanczosResult<std::complex<double>> lanczos_largest<std::complex<double>>(
    const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>&, Eigen::Index, const Eigen::MatrixXcd&,
    const LanczosOptions&);

}  // namespace rqcm
