#include "rqcm/circuit_mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rqcm/errors.hpp"

namespace rqcm {

namespace {

void check_qubits(int n) {
  if (n < 2) throw InvalidArgument("circuit needs n >= 2 qubits");
  if (n > kMaxMonteCarloQubits) {
    throw DimensionError("Monte Carlo simulation is capped at n <= " + std::to_string(kMaxMonteCarloQubits) + " qubits");
  }
}

// Left-multiplies columns of x by g acting on qubits (i, j).
void apply_left(Eigen::MatrixXcd& x, int n, int i, int j, const Gate& g) {
  const Eigen::Index bi = Eigen::Index{1} << (n - 1 - i);
  const Eigen::Index bj = Eigen::Index{1} << (n - 1 - j);
  const Eigen::Index dim = x.rows();
  for (Eigen::Index col = 0; col < x.cols(); ++col) {
    cplx* c = x.col(col).data();
    for (Eigen::Index base = 0; base < dim; ++base) {
      if (base & (bi | bj)) continue;
      const Eigen::Index idx[4] = {base, base | bj, base | bi, base | bi | bj};
      const cplx v[4] = {c[idx[0]], c[idx[1]], c[idx[2]], c[idx[3]]};
      for (int k = 0; k < 4; ++k) c[idx[k]] = g(k, 0) * v[0] + g(k, 1) * v[1] + g(k, 2) * v[2] + g(k, 3) * v[3];
    }
  }
}

Eigen::MatrixXcd kron_sites(const std::vector<Eigen::Matrix2cd>& sites) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Ones(1, 1);
  for (const auto& s : sites) {
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c) next.block<2, 2>(2 * r, 2 * c) = out(r, c) * s;
    out = std::move(next);
  }
  return out;
}

void check_operators(const TestOperator& a, const TestOperator& b) {
  if (a.n != b.n || a.copy_count() != b.copy_count() || a.copy_count() < 1) {
    throw InvalidArgument("test operators differ in shape");
  }
  const Eigen::Index dim = Eigen::Index{1} << a.n;
  for (const auto* ops : {&a, &b})
    for (const auto& m : ops->copies)
      if (m.rows() != dim || m.cols() != dim) throw InvalidArgument("test operator copy has wrong dimension");
}

// tr(P_sigma^dagger (A_1 (x) ... (x) A_t)) = prod over cycles of tr(A_c A_sigma(c) ...).
cplx permutation_overlap(const TestOperator& a, const Permutation& sigma) {
  const int t = a.copy_count();
  std::vector<bool> seen(static_cast<std::size_t>(t), false);
  cplx total(1.0, 0.0);
  for (int start = 0; start < t; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(a.copies[0].rows(), a.copies[0].cols());
    for (int c = start; !seen[static_cast<std::size_t>(c)]; c = sigma[static_cast<std::size_t>(c)]) {
      seen[static_cast<std::size_t>(c)] = true;
      prod = prod * a.copies[static_cast<std::size_t>(c)];
    }
    total *= prod.trace();
  }
  return total;
}

Eigen::VectorXcd local_coordinates(const TestOperator& a, int site) {
  const int t = a.copy_count();
  std::vector<Eigen::Matrix2cd> per_copy;
  for (int c = 0; c < t; ++c) per_copy.push_back(a.factors[static_cast<std::size_t>(c)][static_cast<std::size_t>(site)]);
  return to_pauli_coordinates(OperatorKet::from_matrix(t, 2, kron_sites(per_copy)));
}

// U is built once per circuit; each distinct copy is conjugated at the end.
cplx correlator_dense(const TestOperator& a, const TestOperator& b, const std::vector<int>& distinct,
                      const CircuitSample& circuit, std::vector<Eigen::MatrixXcd>& scratch) {
  const int t = a.copy_count();
  const Eigen::Index dim = a.copies[0].rows();
  scratch.resize(static_cast<std::size_t>(t) + 1);
  Eigen::MatrixXcd& u = scratch[static_cast<std::size_t>(t)];
  u.setIdentity(dim, dim);
  for (const auto& s : circuit.steps) apply_left(u, a.n, s.i, s.j, s.gate);
  cplx total(1.0, 0.0);
  for (int c = 0; c < t; ++c) {
    const int src = distinct[static_cast<std::size_t>(c)];
    if (src == c) {
      scratch[static_cast<std::size_t>(c)].noalias() = u * a.copies[static_cast<std::size_t>(c)] * u.adjoint();
    }
    total *= b.copies[static_cast<std::size_t>(c)].conjugate().cwiseProduct(scratch[static_cast<std::size_t>(src)]).sum();
  }
  return total;
}

std::vector<int> distinct_copies(const TestOperator& a) {
  std::vector<int> out;
  for (int c = 0; c < a.copy_count(); ++c) {
    int src = c;
    for (int k = 0; k < c; ++k)
      if (out[static_cast<std::size_t>(k)] == k && a.copies[static_cast<std::size_t>(k)] == a.copies[static_cast<std::size_t>(c)]) {
        src = k;
        break;
      }
    out.push_back(src);
  }
  return out;
}

}  // namespace

Gate random_u4(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Gate z;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double re = g(rng);
      z(i, j) = cplx(re, g(rng));
    }
  // Modified Gram-Schmidt: the QR factor with positive diagonal R, so the
  // phase correction is built in.
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < j; ++k) z.col(j) -= z.col(k).dot(z.col(j)) * z.col(k);
    z.col(j) /= z.col(j).norm();
  }
  return z;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t depth, std::uint64_t replica) {
  return splitmix64(splitmix64(splitmix64(master) ^ depth) ^ replica);
}

CircuitSample sample_circuit(int n, int k, const GateDistribution& dist, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("sample_circuit: need n >= 2");
  if (k < 0) throw InvalidArgument("sample_circuit: negative depth");
  std::mt19937_64 rng(seed);
  const int pairs = n * (n - 1) / 2;
  std::uniform_int_distribution<int> pick_pair(0, pairs - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> cumulative;
  if (dist.kind() == GateDistribution::Kind::finite_set) {
    double acc = 0.0;
    for (double w : dist.weights()) cumulative.push_back(acc += w);
  }

  CircuitSample out;
  out.n = n;
  out.seed = seed;
  out.steps.reserve(static_cast<std::size_t>(k));
  for (int step = 0; step < k; ++step) {
    int p = pick_pair(rng);
    int i = 0;
    while (p >= n - 1 - i) p -= n - 1 - i++;
    CircuitStep s;
    s.i = i;
    s.j = i + 1 + p;
    if (dist.kind() == GateDistribution::Kind::haar_u4) {
      s.gate = random_u4(rng);
    } else {
      const double u = unit(rng) * cumulative.back();
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      const auto g = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
      s.gate = dist.gates()[g];
      if (unit(rng) < 0.5) std::swap(s.i, s.j);
    }
    out.steps.push_back(std::move(s));
  }
  return out;
}

void conjugate_by_gate(Eigen::MatrixXcd& x, int n, int i, int j, const Gate& g) {
  // G X G^dagger = (G (G X)^dagger)^dagger
  apply_left(x, n, i, j, g);
  x.adjointInPlace();
  apply_left(x, n, i, j, g);
  x.adjointInPlace();
}

Eigen::MatrixXcd circuit_unitary(const CircuitSample& c) {
  check_qubits(c.n);
  const Eigen::Index dim = Eigen::Index{1} << c.n;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& s : c.steps) apply_left(u, c.n, s.i, s.j, s.gate);
  return u;
}

TestOperator TestOperator::from_factors(int n, std::vector<std::vector<Eigen::Matrix2cd>> factors) {
  TestOperator out;
  out.n = n;
  for (const auto& copy : factors) {
    if (static_cast<int>(copy.size()) != n) throw InvalidArgument("TestOperator: copy has wrong number of sites");
    out.copies.push_back(kron_sites(copy));
  }
  out.factors = std::move(factors);
  return out;
}

TestOperator single_site_pauli(int n, int t, int site, int pauli) {
  if (site < 0 || site >= n) throw InvalidArgument("single_site_pauli: site out of range");
  if (pauli < 1 || pauli > 3) throw InvalidArgument("single_site_pauli: pauli label must be 1, 2 or 3");
  if (t < 1) throw InvalidArgument("single_site_pauli: t >= 1");
  const double scale = std::pow(2.0, -0.5 * n);
  std::vector<std::vector<Eigen::Matrix2cd>> factors;
  for (int c = 0; c < t; ++c) {
    std::vector<Eigen::Matrix2cd> sites(static_cast<std::size_t>(n), Eigen::Matrix2cd::Identity());
    sites[static_cast<std::size_t>(site)] = pauli_matrix(pauli);
    sites[0] *= scale;
    factors.push_back(std::move(sites));
  }
  return TestOperator::from_factors(n, std::move(factors));
}

TestOperator collective_pauli(int n, int t, int pauli) {
  if (pauli < 1 || pauli > 3) throw InvalidArgument("collective_pauli: pauli label must be 1, 2 or 3");
  if (t < 1) throw InvalidArgument("collective_pauli: t >= 1");
  Eigen::MatrixXcd sum;
  for (int site = 0; site < n; ++site) {
    const Eigen::MatrixXcd term = single_site_pauli(n, 1, site, pauli).copies[0];
    sum = site == 0 ? term : Eigen::MatrixXcd(sum + term);
  }
  TestOperator out;
  out.n = n;
  out.copies.assign(static_cast<std::size_t>(t), sum / std::sqrt(static_cast<double>(n)));
  return out;
}

cplx fixed_point_value(const TestOperator& a, const TestOperator& b) {
  check_operators(a, b);
  const int t = a.copy_count();
  if (t > kMaxCopiesQubit) throw DimensionError("fixed_point_value: t <= 5");
  const double big_n = std::ldexp(1.0, a.n);
  if (big_n < t) throw InvalidArgument("fixed_point_value: global Gram matrix is singular for 2^n < t");
  const auto perms = all_permutations(t);
  const auto np = static_cast<Eigen::Index>(perms.size());
  Eigen::VectorXcd oa(np), ob(np);
  Eigen::MatrixXd gram(np, np);
  for (Eigen::Index s = 0; s < np; ++s) {
    oa(s) = permutation_overlap(a, perms[static_cast<std::size_t>(s)]);
    ob(s) = permutation_overlap(b, perms[static_cast<std::size_t>(s)]);
    const Permutation inv = inverse(perms[static_cast<std::size_t>(s)]);
    for (Eigen::Index u = 0; u < np; ++u)
      gram(s, u) = std::pow(big_n, cycle_count(compose(inv, perms[static_cast<std::size_t>(u)])));
  }
  const Eigen::MatrixXcd ginv = gram.inverse().cast<cplx>();
  return ob.dot(ginv * oa);
}

cplx exact_depth_one(const TestOperator& a, const TestOperator& b, const GateDistribution& dist) {
  check_operators(a, b);
  if (!a.site_product() || !b.site_product()) throw InvalidArgument("exact_depth_one: needs site-product operators");
  const int n = a.n;
  const int t = a.copy_count();
  const auto avg = make_two_site_average(dist, t);
  std::vector<Eigen::VectorXcd> la, lb;
  for (int site = 0; site < n; ++site) {
    la.push_back(local_coordinates(a, site));
    lb.push_back(local_coordinates(b, site));
  }
  const bool symmetric = dist.kind() == GateDistribution::Kind::haar_u4;
  const auto d = la[0].size();
  auto pair_element = [&](int i, int j) {
    Eigen::VectorXcd in(d * d);
    for (Eigen::Index nu = 0; nu < d; ++nu) in.segment(nu * d, d) = la[static_cast<std::size_t>(i)](nu) * la[static_cast<std::size_t>(j)];
    return pair_overlap(avg->apply(in), lb[static_cast<std::size_t>(i)], lb[static_cast<std::size_t>(j)]);
  };
  cplx total(0.0, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      cplx rest(1.0, 0.0);
      for (int l = 0; l < n; ++l)
        if (l != i && l != j) rest *= lb[static_cast<std::size_t>(l)].dot(la[static_cast<std::size_t>(l)]);
      const cplx m = symmetric ? pair_element(i, j) : 0.5 * (pair_element(i, j) + pair_element(j, i));
      total += rest * m;
    }
  return total / (0.5 * n * (n - 1));
}

cplx circuit_correlator(const TestOperator& a, const TestOperator& b, const CircuitSample& circuit) {
  check_operators(a, b);
  check_qubits(a.n);
  if (circuit.n != a.n) throw InvalidArgument("circuit_correlator: circuit and operators differ in n");
  std::vector<Eigen::MatrixXcd> scratch;
  return correlator_dense(a, b, distinct_copies(a), circuit, scratch);
}

double pairwise_sum(const double* values, std::size_t count) {
  if (count == 0) return 0.0;
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += values[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

CorrelatorEstimate moment_correlator(const TestOperator& a, const TestOperator& b, int k, int replicas,
                                     const GateDistribution& dist, std::uint64_t seed) {
  check_operators(a, b);
  check_qubits(a.n);
  if (replicas < 1) throw InvalidArgument("moment_correlator: need at least one replica");
  const std::vector<int> distinct = distinct_copies(a);
  std::vector<double> re(static_cast<std::size_t>(replicas)), im(static_cast<std::size_t>(replicas));
#pragma omp parallel for schedule(dynamic, 64)
  for (int r = 0; r < replicas; ++r) {
    thread_local std::vector<Eigen::MatrixXcd> scratch;
    const CircuitSample c = sample_circuit(a.n, k, dist, substream_seed(seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(r)));
    const cplx v = correlator_dense(a, b, distinct, c, scratch);
    re[static_cast<std::size_t>(r)] = v.real();
    im[static_cast<std::size_t>(r)] = v.imag();
  }
  const auto count = static_cast<std::size_t>(replicas);
  CorrelatorEstimate out;
  out.depth = k;
  out.replicas = replicas;
  const double mr = pairwise_sum(re.data(), count) / replicas;
  const double mi = pairwise_sum(im.data(), count) / replicas;
  out.mean = cplx(mr, mi);
  if (replicas > 1) {
    for (std::size_t r = 0; r < count; ++r) {
      re[r] = (re[r] - mr) * (re[r] - mr);
      im[r] = (im[r] - mi) * (im[r] - mi);
    }
    const double denom = static_cast<double>(replicas) * (replicas - 1);
    out.stderr_real = std::sqrt(pairwise_sum(re.data(), count) / denom);
    out.stderr_imag = std::sqrt(pairwise_sum(im.data(), count) / denom);
  }
  return out;
}

DecayEstimate fit_decay_rate(const std::vector<int>& depths, const std::vector<double>& signal,
                             const std::vector<double>& stderrs, double reference_lambda1, double snr, int min_depth) {
  if (depths.size() != signal.size() || depths.size() != stderrs.size()) {
    throw InvalidArgument("fit_decay_rate: depth, signal and stderr lists differ in length");
  }
  DecayEstimate out;
  out.depths = depths;
  out.signal = signal;
  out.stderrs = stderrs;
  out.reference = reference_lambda1;
  out.used.assign(depths.size(), false);

  bool any_zero = false;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    const double s = std::abs(signal[i]);
    if (depths[i] >= min_depth && s > 0.0 && s > snr * stderrs[i]) {
      out.used[i] = true;
      ++out.used_count;
      any_zero = any_zero || stderrs[i] <= 0.0;
    }
  }
  if (out.used_count < 4) {
    throw InsufficientSignal("fit_decay_rate: only " + std::to_string(out.used_count) +
                             " depths exceed the signal threshold (need 4)");
  }

  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (!out.used[i]) continue;
    const double s = std::abs(signal[i]);
    const double w = any_zero ? 1.0 : (s / stderrs[i]) * (s / stderrs[i]);
    const double x = depths[i];
    const double y = std::log(s);
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
  }
  const double det = sw * sxx - sx * sx;
  if (!(det > 0.0)) throw InsufficientSignal("fit_decay_rate: usable depths are degenerate");
  const double slope = (sw * sxy - sx * sy) / det;
  const double intercept = (sxx * sy - sx * sxy) / det;

  double var_slope = sw / det;
  if (any_zero) {
    double rss = 0.0;
    for (std::size_t i = 0; i < depths.size(); ++i) {
      if (!out.used[i]) continue;
      const double resid = std::log(std::abs(signal[i])) - intercept - slope * depths[i];
      rss += resid * resid;
    }
    var_slope = out.used_count > 2 ? rss / (out.used_count - 2) / det * sw : 0.0;
  }

  out.rate = std::exp(slope);
  out.amplitude = std::exp(intercept);
  out.rate_stderr = out.rate * std::sqrt(std::max(var_slope, 0.0));
  out.ci_low = out.rate - 3.0 * out.rate_stderr;
  out.ci_high = out.rate + 3.0 * out.rate_stderr;
  if (std::isfinite(reference_lambda1)) {
    out.tolerance = std::max(3.0 * out.rate_stderr, 0.1 * std::abs(reference_lambda1));
    out.consistent = std::abs(out.rate - reference_lambda1) <= out.tolerance;
  } else {
    out.tolerance = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

McValidation validate_decay_rate(const GateDistribution& dist, const McValidationConfig& config,
                                 const SpectralOptions& options) {
  if (config.depths.empty()) throw InvalidArgument("validate_decay_rate: empty depth grid");
  check_qubits(config.n);
  const LocalBasis basis = dist.locally_invariant() ? u2_invariant_basis(config.t) : pauli_basis(config.t);
  const LocalMomentOperator m = build_local_moment_operator(dist, config.t, basis);

  McValidation out;
  out.exact = sector_spectral_gap(m, config.n, options);
  const TestOperator op = config.collective ? collective_pauli(config.n, config.t, config.pauli)
                                            : single_site_pauli(config.n, config.t, config.site, config.pauli);
  out.fixed_value = fixed_point_value(op, op);

  std::vector<double> signal, errs;
  for (int k : config.depths) {
    out.estimates.push_back(moment_correlator(op, op, k, config.replicas, dist, config.seed));
    signal.push_back(out.estimates.back().mean.real() - out.fixed_value.real());
    errs.push_back(out.estimates.back().stderr_real);
  }
  out.fit = fit_decay_rate(config.depths, signal, errs, out.exact.lambda1, config.snr, config.min_fit_depth);
  return out;
}

}  // namespace rqcm
