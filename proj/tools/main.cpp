#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "rqcm/errors.hpp"

using namespace rqcm::cli;

int main(int argc, char** argv) {
  CLI::App app{"Spectral gaps of random-circuit moment operators"};
  app.set_config("--config", "", "TOML/INI file overlaying command-line options");
  app.require_subcommand(1);

  GapScanOptions gap;
  auto* g = app.add_subcommand("gap-scan", "exact symmetric-sector gaps against the mean-field prediction");
  g->add_option("--t", gap.t, "number of copies")->check(CLI::Range(1, 4));
  g->add_option("--n", gap.n_list, "qubit counts, e.g. 4..30 or 4..30:2 or 4,6,8");
  g->add_option("--dist", gap.dist, "haar-u4 or a gate-set JSON path");
  g->add_option("--out", gap.out, "CSV output path");
  g->add_option("--json", gap.json, "summary JSON path (default: CSV path with .json)");
  g->add_option("--dense-limit", gap.dense_limit, "largest sector dimension solved densely");
  g->add_option("--seed", gap.seed, "Lanczos start-vector seed");

  MeanFieldOptions mf;
  auto* m = app.add_subcommand("meanfield", "leading gap coefficient a1 and its witness operator");
  m->add_option("--t", mf.t)->check(CLI::Range(1, 4));
  m->add_option("--dist", mf.dist);
  m->add_option("--basis", mf.basis, "auto | full | invariant")->check(CLI::IsMember({"auto", "full", "invariant"}));
  m->add_flag("--include-antisymmetric", mf.include_antisymmetric, "scan the antisymmetric band as well");
  m->add_option("--json", mf.json, "output path (default: stdout)");

  McValidateOptions mc;
  auto* v = app.add_subcommand("mc-validate", "Monte Carlo decay rate against the exact subleading eigenvalue");
  v->add_option("--t", mc.t)->check(CLI::Range(1, 4));
  v->add_option("--n", mc.n)->check(CLI::Range(2, 6));
  v->add_option("--dist", mc.dist);
  v->add_option("--depths", mc.depths);
  v->add_option("--replicas", mc.replicas)->check(CLI::PositiveNumber);
  v->add_option("--seed", mc.seed);
  v->add_option("--operator", mc.op, "single-site | collective")->check(CLI::IsMember({"single-site", "collective"}));
  v->add_option("--site", mc.site);
  v->add_option("--pauli", mc.pauli, "1 = X, 2 = Y, 3 = Z")->check(CLI::Range(1, 3));
  v->add_option("--min-fit-depth", mc.min_fit_depth, "ignore shallower depths in the fit");
  v->add_option("--out", mc.out);
  v->add_option("--json", mc.json);

  BoundOptions bd;
  auto* b = app.add_subcommand("bound", "design-length estimate k_c");
  b->add_option("--gap", bd.gap, "spectral gap");
  b->add_option("--lambda1", bd.lambda1, "subleading eigenvalue (gap = 1 - lambda1)");
  b->add_option("--a1", bd.a1, "asymptotic mode: gap = a1 / n");
  b->add_option("--n", bd.n)->required();
  b->add_option("--t", bd.t);
  b->add_option("--epsilon", bd.epsilon);
  b->add_option("--json", bd.json);

  SelftestOptions st;
  auto* s = app.add_subcommand("invariants-selftest", "Gram ranks, twirl invariance, transfer table, polynomial bound");
  s->add_option("--t-max", st.t_max)->check(CLI::Range(1, 3));
  s->add_option("--grid", st.grid)->check(CLI::PositiveNumber);
  s->add_option("--gate-set", st.gate_sets, "gate-set JSON whose a1 must be positive (repeatable)");
  s->add_option("--json", st.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*g) return run_gap_scan(gap);
    if (*m) return run_meanfield(mf);
    if (*v) return run_mc_validate(mc);
    if (*b) return run_bound(bd);
    if (*s) return run_invariants_selftest(st);
  } catch (const rqcm::DimensionError& e) {
    std::cerr << "error: size cap exceeded: " << e.what() << "\n";
  } catch (const rqcm::FormatError& e) {
    std::cerr << "error: gate set: " << e.what() << "\n";
  } catch (const rqcm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitError;
}
