#include "rqcm/convergence.hpp"

#include <cmath>
#include <string>

#include "rqcm/errors.hpp"

namespace rqcm {

ConvergenceBound convergence_time_bound(double gap, int n, int t, double epsilon) {
  if (!(gap > 0.0 && gap <= 1.0)) throw InvalidArgument("gap must satisfy 0 < gap <= 1, got " + std::to_string(gap));
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidArgument("epsilon must satisfy 0 < epsilon < 1, got " + std::to_string(epsilon));
  }
  if (n < 1 || t < 1) throw InvalidArgument("n and t must be positive");

  const double eps_log = std::log(1.0 / epsilon);
  const double size_log = static_cast<double>(n) * t * std::log(2.0);
  ConvergenceBound out;
  out.gap = gap;
  out.epsilon_term = eps_log / gap;
  out.size_term = size_log / gap;
  out.headline = static_cast<long long>(std::ceil((eps_log + size_log) / gap));
  out.sharper = gap >= 1.0 ? 1 : static_cast<long long>(std::ceil((eps_log + size_log) / -std::log1p(-gap)));
  return out;
}

ConvergenceBound asymptotic_convergence_time(double a1, int n, int t, double epsilon) {
  if (!(a1 > 0.0)) throw InvalidArgument("a1 must be positive");
  if (n < 1) throw InvalidArgument("n must be positive");
  return convergence_time_bound(a1 / n, n, t, epsilon);
}

}  // namespace rqcm
