#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rqcm/gate_averaging.hpp"
#include "rqcm/symmetric_sector.hpp"

namespace rqcm {

enum class Band { symmetric, antisymmetric };
const char* to_string(Band b);

/// Excitation matrix over the complement of |sigma>> inside the local basis.
/// symmetric:     E  = 2 - (D + D' + X + X')
/// antisymmetric: E~ = 2 - (D + D')
/// with D = <sigma a|m|sigma b>, D' = <a sigma|m|b sigma>, X = <sigma a|m|b sigma>,
/// X' = <a sigma|m|sigma b>. For swap-symmetric m these reduce to 2(delta - D - X)
/// and 2(delta - D).
struct ExcitationMatrix {
  Band band = Band::symmetric;
  Permutation sigma;
  Eigen::MatrixXcd matrix;
  /// Complement basis as one-site Pauli coordinates (4^t x (d - 1)).
  Eigen::MatrixXcd complement;
  double asymmetry = 0.0;
};

/// Throws InvalidArgument if the basis does not contain |sigma>> or if sigma
/// is not a fixed point of m.
ExcitationMatrix excitation_matrix(const LocalMomentOperator& m, const Permutation& sigma, Band band);

struct BandMinimum {
  Band band = Band::symmetric;
  Permutation sigma;
  double value = 0.0;
  int multiplicity = 1;
  /// Normalized, phase-fixed eigenvector in one-site Pauli coordinates.
  Eigen::VectorXcd witness;
};

struct GapPrediction {
  int t = 0;
  double a1 = 0.0;
  BandMinimum minimum;
  /// Every (band, sigma) minimum that was computed.
  std::vector<BandMinimum> scanned;
  bool antisymmetric_included = false;
  std::string basis_descriptor;
  /// a1 <= 1e-9: the distribution may be non-universal.
  bool nonuniversal_warning = false;

  double predicted_gap(int n) const { return a1 / n; }
};

/// a1 = min over sigma in S_t (and over bands) of the lowest excitation
/// eigenvalue. The antisymmetric band is excluded for left-swap-invariant m
/// unless `include_antisymmetric`.
GapPrediction leading_coefficient(const LocalMomentOperator& m, bool include_antisymmetric = false);

/// Local basis used for the scan: all Pauli strings when `full` (t <= 3),
/// otherwise the U(2)-invariant basis.
LocalBasis mean_field_basis(int t, bool full);

/// Nonzero Pauli-string components of one-site coordinates, largest first.
std::vector<std::pair<PauliString, cplx>> pauli_terms(const Eigen::VectorXcd& coords, double drop = 1e-9);
/// e.g. "0.57735*XX + 0.57735*YY + 0.57735*ZZ".
std::string format_pauli_terms(const std::vector<std::pair<PauliString, cplx>>& terms);

struct PolynomialCheck {
  double lhs = 0.0;
  double bound = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double lhs_imag = 0.0;
};

/// lhs = <<I w|U(q,r,s)^{(x)t,t}|I w>>, bound = (x^2 + y^2 + z^2) / 3 with
/// x = cos2r cos2s, y = cos2s cos2q, z = cos2q cos2r. `omega` is given in
/// one-site Pauli coordinates and must be normalized, U(2)-invariant and
/// orthogonal to the identity.
PolynomialCheck invariant_polynomial_check(const Eigen::VectorXcd& omega, double q, double r, double s, int t);

struct GapTableRow {
  int n = 0;
  Eigen::Index dim = 0;
  int unit_multiplicity = 0;
  double lambda1 = 0.0;
  double gap = 0.0;
  double prediction = 0.0;
  /// |gap * n / a1 - 1|
  double rel_dev = 0.0;
  SolverMethod method = SolverMethod::dense;
  double residual = 0.0;
  int lambda1_multiplicity = 1;
};

struct GapTable {
  int t = 0;
  std::string distribution;
  std::string sector_basis;
  GapPrediction prediction;
  std::vector<GapTableRow> rows;
  /// Smallest n after which rel_dev decreases strictly to the end; -1 if the
  /// last step increases.
  int crossover_n = -1;
};

/// Exact sector gaps against a1 / n. Locally invariant distributions use the
/// U(2)-invariant sector basis and the full scan for a1 when t <= 3.
GapTable gap_prediction_vs_exact(const GateDistribution& dist, int t, const std::vector<int>& n_list,
                                 const SpectralOptions& options = {});

int monotone_crossover(const std::vector<GapTableRow>& rows);

}  // namespace rqcm
