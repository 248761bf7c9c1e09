#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

#include "output.hpp"
#include "rqcm/circuit_mc.hpp"
#include "rqcm/convergence.hpp"
#include "rqcm/errors.hpp"
#include "rqcm/gate_set_io.hpp"
#include "rqcm/mean_field.hpp"

namespace rqcm::cli {

namespace {

using nlohmann::ordered_json;

std::string sidecar(const std::string& json, const std::string& out) {
  if (!json.empty()) return json;
  const auto dot = out.rfind('.');
  return (dot == std::string::npos ? out : out.substr(0, dot)) + ".json";
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw FormatError("cannot write '" + path + "'");
  return f;
}

ordered_json witness_json(const BandMinimum& m) {
  ordered_json terms = ordered_json::array();
  for (const auto& [p, c] : pauli_terms(m.witness)) {
    terms.push_back({{"pauli", p.to_string()}, {"re", c.real()}, {"im", c.imag()}});
  }
  return terms;
}

ordered_json prediction_json(const GapPrediction& p) {
  ordered_json j;
  j["a1"] = p.a1;
  j["band"] = to_string(p.minimum.band);
  j["sigma"] = to_cycle_string(p.minimum.sigma);
  j["multiplicity"] = p.minimum.multiplicity;
  j["witness"] = format_pauli_terms(pauli_terms(p.minimum.witness));
  j["witness_terms"] = witness_json(p.minimum);
  j["antisymmetric_included"] = p.antisymmetric_included;
  j["basis"] = p.basis_descriptor;
  j["nonuniversal_warning"] = p.nonuniversal_warning;
  ordered_json scanned = ordered_json::array();
  for (const auto& s : p.scanned) {
    scanned.push_back({{"band", to_string(s.band)}, {"sigma", to_cycle_string(s.sigma)}, {"min_eigenvalue", s.value},
                       {"multiplicity", s.multiplicity}});
  }
  j["scanned"] = scanned;
  return j;
}

}  // namespace

int run_gap_scan(const GapScanOptions& o) {
  const GateDistribution dist = resolve_distribution(o.dist);
  const std::vector<int> ns = parse_int_list(o.n_list);
  SpectralOptions so;
  so.dense_limit = o.dense_limit;
  so.lanczos.seed = o.seed;
  const GapTable table = gap_prediction_vs_exact(dist, o.t, ns, so);

  auto f = open_csv(o.out);
  CsvWriter csv(f, {"n", "dim", "unit_multiplicity", "lambda1", "gap", "meanfield_prediction", "rel_dev"});
  ordered_json rows = ordered_json::array();
  for (const auto& r : table.rows) {
    csv.row({std::to_string(r.n), std::to_string(r.dim), std::to_string(r.unit_multiplicity), fmt17(r.lambda1),
             fmt17(r.gap), fmt17(r.prediction), fmt17(r.rel_dev)});
    rows.push_back({{"n", r.n}, {"method", to_string(r.method)}, {"residual", r.residual},
                    {"lambda1_multiplicity", r.lambda1_multiplicity}});
  }

  ordered_json params{{"t", o.t}, {"n", o.n_list}, {"dist", o.dist}, {"out", o.out}, {"dense_limit", o.dense_limit}};
  ordered_json doc = provenance("gap-scan", params, o.seed);
  doc["sector"] = "totally symmetric";
  doc["sector_basis"] = table.sector_basis;
  doc["meanfield"] = prediction_json(table.prediction);
  doc["crossover_n"] = table.crossover_n;
  doc["largest_n_rel_dev"] = table.rows.back().rel_dev;
  doc["diagnostics"] = rows;
  emit_json(doc, sidecar(o.json, o.out));
  std::cerr << "gap-scan: " << table.rows.size() << " rows -> " << o.out << "\n";
  return kExitOk;
}

int run_meanfield(const MeanFieldOptions& o) {
  const GateDistribution dist = resolve_distribution(o.dist);
  bool full = o.t <= 3;
  if (o.basis == "full") full = true;
  if (o.basis == "invariant") full = false;
  if (o.basis != "auto" && o.basis != "full" && o.basis != "invariant") {
    throw InvalidArgument("--basis must be auto, full or invariant");
  }
  if (!full && !dist.locally_invariant()) {
    throw InvalidArgument("the invariant-restricted scan is only valid for locally invariant distributions");
  }
  const LocalMomentOperator m = build_local_moment_operator(dist, o.t, mean_field_basis(o.t, full));
  const GapPrediction p = leading_coefficient(m, o.include_antisymmetric);

  ordered_json params{{"t", o.t}, {"dist", o.dist}, {"basis", o.basis}, {"include_antisymmetric", o.include_antisymmetric}};
  ordered_json doc = provenance("meanfield", params, 0);
  ordered_json body = prediction_json(p);
  for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
  emit_json(doc, o.json);
  if (p.nonuniversal_warning) std::cerr << "warning: a1 <= 1e-9; the distribution may be non-universal\n";
  return kExitOk;
}

int run_mc_validate(const McValidateOptions& o) {
  const GateDistribution dist = resolve_distribution(o.dist);
  if (o.op != "single-site" && o.op != "collective") throw InvalidArgument("--operator must be single-site or collective");
  McValidationConfig cfg;
  cfg.n = o.n;
  cfg.t = o.t;
  cfg.depths = parse_int_list(o.depths);
  cfg.replicas = o.replicas;
  cfg.seed = o.seed;
  cfg.collective = o.op == "collective";
  cfg.site = o.site;
  cfg.pauli = o.pauli;
  cfg.min_fit_depth = o.min_fit_depth;
  const McValidation v = validate_decay_rate(dist, cfg);

  auto f = open_csv(o.out);
  CsvWriter csv(f, {"depth", "replicas", "mean", "stderr", "signal", "used_in_fit"});
  for (std::size_t i = 0; i < v.estimates.size(); ++i) {
    const auto& e = v.estimates[i];
    csv.row({std::to_string(e.depth), std::to_string(e.replicas), fmt17(e.mean.real()), fmt17(e.stderr_real),
             fmt17(v.fit.signal[i]), v.fit.used[i] ? "1" : "0"});
  }

  ordered_json params{{"t", o.t}, {"n", o.n}, {"dist", o.dist}, {"depths", o.depths}, {"replicas", o.replicas},
                      {"operator", o.op}, {"site", o.site}, {"pauli", o.pauli}, {"min_fit_depth", o.min_fit_depth},
                      {"out", o.out}};
  ordered_json doc = provenance("mc-validate", params, o.seed);
  doc["lambda1"] = v.exact.lambda1;
  doc["gap"] = v.exact.gap;
  doc["fixed_point_value"] = v.fixed_value.real();
  doc["fitted_rate"] = v.fit.rate;
  doc["rate_stderr"] = v.fit.rate_stderr;
  doc["ci_3sigma"] = {v.fit.ci_low, v.fit.ci_high};
  doc["depths_used"] = v.fit.used_count;
  doc["tolerance"] = v.fit.tolerance;
  doc["verdict"] = v.fit.consistent ? "consistent" : "inconsistent";
  emit_json(doc, sidecar(o.json, o.out));
  std::cout << "fitted rate " << fmt17(v.fit.rate) << " +- " << fmt17(v.fit.rate_stderr) << ", lambda1 "
            << fmt17(v.exact.lambda1) << ": " << (v.fit.consistent ? "consistent" : "inconsistent") << "\n";
  return v.fit.consistent ? kExitOk : kExitVerdict;
}

int run_bound(const BoundOptions& o) {
  const int given = (o.gap > 0) + (o.lambda1 > 0) + (o.a1 > 0);
  if (given != 1) throw InvalidArgument("give exactly one of --gap, --lambda1, --a1");
  ConvergenceBound b;
  std::string mode;
  if (o.a1 > 0) {
    b = asymptotic_convergence_time(o.a1, o.n, o.t, o.epsilon);
    mode = "asymptotic";
  } else {
    b = convergence_time_bound(o.gap > 0 ? o.gap : 1.0 - o.lambda1, o.n, o.t, o.epsilon);
    mode = "exact-gap";
  }
  ordered_json params{{"gap", o.gap}, {"lambda1", o.lambda1}, {"a1", o.a1}, {"n", o.n}, {"t", o.t}, {"epsilon", o.epsilon}};
  ordered_json doc = provenance("bound", params, 0);
  doc["mode"] = mode;
  doc["gap"] = b.gap;
  doc["k_c"] = b.headline;
  doc["k_c_sharper"] = b.sharper;
  doc["epsilon_term"] = b.epsilon_term;
  doc["size_term"] = b.size_term;
  emit_json(doc, o.json);
  return kExitOk;
}

int run_invariants_selftest(const SelftestOptions& o) {
  ordered_json checks = ordered_json::array();
  bool all = true;
  auto record = [&](const std::string& name, bool ok, double value) {
    checks.push_back({{"check", name}, {"pass", ok}, {"value", value}});
    all = all && ok;
  };

  for (int t = 1; t <= o.t_max; ++t) {
    const Eigen::MatrixXd g2 = gram_matrix(t, 2);
    const auto rank2 = Eigen::FullPivLU<Eigen::MatrixXd>(g2).setThreshold(1e-9).rank();
    record("gram_rank_qubit_t" + std::to_string(t), rank2 == static_cast<Eigen::Index>(catalan(t)), static_cast<double>(rank2));
    if (t <= kMaxCopiesPair) {
      const auto rank4 = Eigen::FullPivLU<Eigen::MatrixXd>(gram_matrix(t, 4)).setThreshold(1e-9).rank();
      record("gram_rank_pair_t" + std::to_string(t), rank4 == static_cast<Eigen::Index>(factorial(t)), static_cast<double>(rank4));
    }
    const LocalBasis b = u2_invariant_basis(t);
    double worst = 0.0;
    for (int k = 0; k < b.size(); ++k) worst = std::max(worst, twirl_defect(b.kets.col(k), t, 20, 99 + static_cast<unsigned>(k)));
    record("invariant_twirl_t" + std::to_string(t), worst < 1e-10, worst);
  }

  // exp(i pi/4 ZZ): XI -> -YZ, YI -> XZ, IX -> -ZY, IY -> ZX, Z's fixed.
  const auto r = pauli_transfer_matrix(canonical_gate(0, 0, M_PI / 4)).entries;
  Eigen::Matrix<double, 16, 16> expect = Eigen::Matrix<double, 16, 16>::Zero();
  // {input, image, sign}; index 4p + q.
  const double table[16][3] = {
      {0, 0, 1},   {1, 14, -1}, {2, 13, 1},  {3, 3, 1},    {4, 11, -1}, {5, 5, 1},  {6, 6, 1},   {7, 8, -1},
      {8, 7, 1},   {9, 9, 1},   {10, 10, 1}, {11, 4, 1},   {12, 12, 1}, {13, 2, -1}, {14, 1, 1}, {15, 15, 1}};
  for (const auto& row : table) expect(static_cast<int>(row[1]), static_cast<int>(row[0])) = row[2];
  const double ptm_err = (r - expect).cwiseAbs().maxCoeff();
  record("pauli_transfer_zz_table", ptm_err < 1e-12, ptm_err);

  double worst_excess = -1e300, worst_eq = 0.0;
  for (int t = 2; t <= std::min(o.t_max, 3); ++t) {
    const LocalBasis b = u2_invariant_basis(t);
    for (int k = 1; k < b.size(); ++k) {
      const bool degree_two = pauli_terms(b.kets.col(k)).front().first.degree() == 2;
      for (int i = 0; i < o.grid; ++i)
        for (int j = 0; j < o.grid; ++j)
          for (int l = 0; l < o.grid; ++l) {
            const double step = M_PI / o.grid;
            const PolynomialCheck c = invariant_polynomial_check(b.kets.col(k), i * step, j * step, l * step, t);
            worst_excess = std::max(worst_excess, c.lhs - c.bound);
            if (degree_two) worst_eq = std::max(worst_eq, std::abs(c.lhs - c.bound));
          }
    }
  }
  record("polynomial_bound", worst_excess <= 1e-9, worst_excess);
  record("polynomial_equality_degree2", worst_eq <= 1e-10, worst_eq);

  const GateDistribution haar = GateDistribution::haar_u4();
  for (int t = 2; t <= std::min(o.t_max, 3); ++t) {
    const GapPrediction p = leading_coefficient(build_local_moment_operator(haar, t, pauli_basis(t)));
    record("a1_haar_t" + std::to_string(t), std::abs(p.a1 - 1.2) < 1e-8, p.a1);
  }

  for (const auto& path : o.gate_sets) {
    const GateDistribution dist = resolve_distribution(path);
    const GapPrediction p = leading_coefficient(build_local_moment_operator(dist, 2, pauli_basis(2)));
    record("a1_positive_" + dist.name(), p.a1 > 1e-9, p.a1);
  }

  ordered_json doc =
      provenance("invariants-selftest", {{"t_max", o.t_max}, {"grid", o.grid}, {"gate_sets", o.gate_sets}}, 0);
  doc["checks"] = checks;
  doc["verdict"] = all ? "pass" : "fail";
  emit_json(doc, o.json);
  return all ? kExitOk : kExitVerdict;
}

}  // namespace rqcm::cli
