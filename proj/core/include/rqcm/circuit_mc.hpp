#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rqcm/gate_averaging.hpp"
#include "rqcm/symmetric_sector.hpp"

namespace rqcm {

/// Haar-random two-qubit unitary: QR of a complex Gaussian, phases of R
/// moved into Q.
Gate random_u4(std::mt19937_64& rng);

std::uint64_t splitmix64(std::uint64_t x);
/// Independent substream seed for (depth, replica) under a master seed.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t depth, std::uint64_t replica);

struct CircuitStep {
  int i = 0;  ///< first qubit of the gate, i < j unless the orientation was flipped
  int j = 1;
  Gate gate;
};

struct CircuitSample {
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<CircuitStep> steps;
};

/// k steps; each picks a pair uniformly among the n(n-1)/2 pairs and a gate
/// from `dist`. Finite-set gates act with a random orientation (probability
/// 1/2 each), matching the ordered-pair average of the sector model.
CircuitSample sample_circuit(int n, int k, const GateDistribution& dist, std::uint64_t seed);

/// Dense 2^n x 2^n unitary of a circuit (qubit 0 is the most significant bit).
Eigen::MatrixXcd circuit_unitary(const CircuitSample& c);

/// X <- G X G^dagger with G acting on qubits (i, j).
void conjugate_by_gate(Eigen::MatrixXcd& x, int n, int i, int j, const Gate& g);

inline constexpr int kMaxMonteCarloQubits = 6;

/// A test operator on t copies of the n-qubit space, A_1 (x) ... (x) A_t.
/// `factors[c][site]` is kept when every copy is itself a tensor product over
/// sites (needed for the exact depth-one value).
struct TestOperator {
  int n = 0;
  std::vector<Eigen::MatrixXcd> copies;
  std::vector<std::vector<Eigen::Matrix2cd>> factors;

  int copy_count() const { return static_cast<int>(copies.size()); }
  bool site_product() const { return !factors.empty(); }

  static TestOperator from_factors(int n, std::vector<std::vector<Eigen::Matrix2cd>> factors);
};

/// P / 2^{n/2} on `site` for every copy, identity elsewhere.
TestOperator single_site_pauli(int n, int t, int site, int pauli);
/// sum_i P_i / sqrt(n 2^n) for every copy; lies in the permutation-symmetric
/// sector of the n sites.
TestOperator collective_pauli(int n, int t, int pauli);

/// <<B|P_V|A>>: projection onto span{(|sigma>>)^{(x)n}} with the exact global
/// Gram matrix (2^n)^{cycles}; overlaps are cycle traces. Requires 2^n >= t.
cplx fixed_point_value(const TestOperator& a, const TestOperator& b);

/// Exact <<B|M|A>> for one step (depth 1), from the two-site average.
/// Requires site-product operators.
cplx exact_depth_one(const TestOperator& a, const TestOperator& b, const GateDistribution& dist);

/// prod_c tr(B_c^dagger U A_c U^dagger) for one circuit.
cplx circuit_correlator(const TestOperator& a, const TestOperator& b, const CircuitSample& circuit);

struct CorrelatorEstimate {
  int depth = 0;
  int replicas = 0;
  cplx mean;
  double stderr_real = 0.0;
  double stderr_imag = 0.0;
};

/// Mean over `replicas` independent circuits of depth k; replica r uses
/// substream_seed(seed, k, r). Deterministic for fixed inputs.
CorrelatorEstimate moment_correlator(const TestOperator& a, const TestOperator& b, int k, int replicas,
                                     const GateDistribution& dist, std::uint64_t seed);

/// Sum with pairwise (tree) reduction, independent of thread count.
double pairwise_sum(const double* values, std::size_t count);

struct DecayEstimate {
  std::vector<int> depths;
  std::vector<double> signal;  ///< correlator minus its fixed-point value
  std::vector<double> stderrs;
  std::vector<bool> used;
  int used_count = 0;
  double rate = 0.0;  ///< fitted rho
  double rate_stderr = 0.0;
  double ci_low = 0.0;  ///< rate -/+ 3 standard errors
  double ci_high = 0.0;
  double amplitude = 0.0;
  double reference = 0.0;  ///< lambda1 from diagonalization
  double tolerance = 0.0;  ///< max(3 sigma, 10% of reference)
  bool consistent = false;
};

/// Weighted least squares of log|signal| against depth over the points with
/// |signal| > snr * stderr and depth >= min_depth. Ordinary least squares if
/// any used stderr is zero. Throws InsufficientSignal below 4 usable depths.
DecayEstimate fit_decay_rate(const std::vector<int>& depths, const std::vector<double>& signal,
                             const std::vector<double>& stderrs, double reference_lambda1, double snr = 5.0,
                             int min_depth = 0);

struct McValidationConfig {
  int n = 4;
  int t = 2;
  std::vector<int> depths;
  int replicas = 20000;
  std::uint64_t seed = 7;
  /// single-site Pauli on `site`, or the collective sum over sites
  bool collective = false;
  int site = 0;
  int pauli = 3;
  int min_fit_depth = 0;
  double snr = 5.0;
};

struct McValidation {
  SpectralResult exact;
  cplx fixed_value;
  std::vector<CorrelatorEstimate> estimates;
  DecayEstimate fit;
};

/// Exact lambda1 of the sector matrix at (n, t), Monte Carlo correlators of a
/// Pauli test operator over the depth grid, and the decay fit.
McValidation validate_decay_rate(const GateDistribution& dist, const McValidationConfig& config,
                                 const SpectralOptions& options = {});

}  // namespace rqcm
