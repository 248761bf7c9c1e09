#pragma once

namespace rqcm {

struct ConvergenceBound {
  /// ceil((ln(1/eps) + n t ln 2) / gap)
  long long headline = 0;
  /// ceil((ln(1/eps) + n t ln 2) / (-ln(1 - gap))); 1 when gap = 1.
  long long sharper = 0;
  /// ln(1/eps) / gap and n t ln 2 / gap.
  double epsilon_term = 0.0;
  double size_term = 0.0;
  double gap = 0.0;
};

/// Design length from the 1-norm bound 2^{nt} lambda1^k <= eps.
/// Throws InvalidArgument unless 0 < gap <= 1, 0 < eps < 1, n >= 1, t >= 1.
ConvergenceBound convergence_time_bound(double gap, int n, int t, double epsilon);

/// Same with the asymptotic gap a1 / n.
ConvergenceBound asymptotic_convergence_time(double a1, int n, int t, double epsilon);

}  // namespace rqcm
