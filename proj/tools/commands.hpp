#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rqcm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerdict = 2;

struct GapScanOptions {
  int t = 2;
  std::string n_list = "4..30";
  std::string dist = "haar-u4";
  std::string out = "gaps.csv";
  std::string json;  ///< default: <out>.json
  long dense_limit = 1500;
  std::uint64_t seed = 20240607;
};

struct MeanFieldOptions {
  int t = 2;
  std::string dist = "haar-u4";
  std::string basis = "auto";  ///< auto | full | invariant
  bool include_antisymmetric = false;
  std::string json;  ///< default: stdout
};

struct McValidateOptions {
  int t = 2;
  int n = 4;
  std::string dist = "haar-u4";
  std::string depths = "1..60";
  int replicas = 20000;
  std::uint64_t seed = 7;
  std::string op = "single-site";  ///< single-site | collective
  int site = 0;
  int pauli = 3;
  int min_fit_depth = 10;
  std::string out = "mc.csv";
  std::string json;  ///< default: <out>.json
};

struct BoundOptions {
  double gap = 0.0;
  double lambda1 = 0.0;
  double a1 = 0.0;
  int n = 0;
  int t = 2;
  double epsilon = 1e-3;
  std::string json;
};

struct SelftestOptions {
  int t_max = 3;
  int grid = 10;  ///< points per angle in the (q, r, s) grid
  std::vector<std::string> gate_sets;  ///< extra distributions whose a1 must be positive
  std::string json;
};

int run_gap_scan(const GapScanOptions& o);
int run_meanfield(const MeanFieldOptions& o);
int run_mc_validate(const McValidateOptions& o);
int run_bound(const BoundOptions& o);
int run_invariants_selftest(const SelftestOptions& o);

}  // namespace rqcm::cli
