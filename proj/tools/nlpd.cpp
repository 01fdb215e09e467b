// Command-line front end: verify | solve | design | consistency | localize.
//
// Exit codes: 0 ok, 2 configuration error, 3 convergence failure,
// 4 failed check, 5 output error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nlpd/config.hpp"
#include "nlpd/design.hpp"
#include "nlpd/errors.hpp"
#include "nlpd/experiments.hpp"
#include "nlpd/format.hpp"
#include "nlpd/operators.hpp"
#include "nlpd/state_solver.hpp"

namespace {

using namespace nlpd;

constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kConvergence = 3;
constexpr int kCheck = 4;
constexpr int kIo = 5;

struct Overrides {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<double> p, delta, h_ratio, alpha;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> deltas;
};

RunConfig resolve(const Overrides& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (o.out) cfg.out_dir = *o.out;
  if (o.p) cfg.p = *o.p;
  if (o.delta) cfg.delta = *o.delta;
  if (o.h_ratio) cfg.h_ratio = *o.h_ratio;
  if (o.alpha) cfg.alpha = *o.alpha;
  if (o.seed) cfg.seed = *o.seed;
  if (o.deltas) cfg.deltas = parse_delta_list(*o.deltas);
  validate(cfg);
  return cfg;
}

std::string path_in(const RunConfig& cfg, const std::string& name) { return cfg.out_dir + "/" + name; }

nlohmann::json problem_json(const RunConfig& cfg, const std::string& command) {
  nlohmann::json j = to_json(cfg)["problem"];
  j["command"] = command;
  return j;
}

int finish(const RunConfig& cfg, const std::string& command, const std::vector<CheckResult>& checks) {
  Report rep{config_hash(cfg), problem_json(cfg, command), checks};
  write_file(path_in(cfg, command + "_report.json"), rep.to_json().dump(2) + "\n");
  write_file(path_in(cfg, "config.json"), canonical_json(cfg) + "\n");
  for (const auto& c : checks)
    std::printf("%s %s value=%s reference=%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                format_number(c.value).c_str(), format_number(c.reference).c_str());
  return rep.all_pass() ? kOk : kCheck;
}

int cmd_verify(const RunConfig& cfg) { return finish(cfg, "verify", verify_checks(cfg)); }

int cmd_solve(const RunConfig& cfg) {
  const Setup s = build_setup(cfg, cfg.delta);
  const double q = s.spec.q;
  const TwoPointField k2 = make_kappa2pt(s.kappa, q, s.pairs);
  const StateReport st = solve_primal(k2, s.f, s.grid, s.pairs, cfg.solver);
  for (const auto& w : s.grid.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& w : st.warnings) std::cerr << "warning: " << w << "\n";

  const double f_norm = cell_norm_q(s.grid, s.f.values, q);
  const double scale = std::max(1.0, std::abs(st.primal_energy));
  const double loc = energy_dual_local(s.kappa, recover_flux(st.sigma2pt, s.grid, s.pairs), q, s.grid);
  const double dual = energy_dual(s.kappa, st.sigma2pt, q, s.pairs);
  std::vector<CheckResult> checks{
      {"primal_energy", st.primal_energy, -st.dual_energy, 10 * cfg.solver.tol * scale,
       st.duality_gap <= 10 * cfg.solver.tol * scale},
      {"dual_energy", st.dual_energy, 0.0, 0.0, true},
      check_at_most("relative_duality_gap", st.duality_gap / scale, 0.0, 10 * cfg.solver.tol),
      check_at_most("kkt_feasibility_relative", f_norm > 0 ? st.kkt_feasibility / f_norm : st.kkt_feasibility,
                    0.0, cfg.solver.tol),
      check_at_most("kkt_stationarity", st.kkt_stationarity, 0.0,
                    1e-10 * std::max(1.0, pair_norm_q(s.pairs, nl_gradient(st.u, s.pairs), cfg.p))),
      check_at_most("recovery_bound", dual > 0 ? loc / dual : 0.0, 1.0, 1e-10),
      {"newton_iterations", double(st.iterations), 0.0, 0.0, true},
  };
  write_file(path_in(cfg, "u.csv"), field_csv(s.grid, st.u.values));
  write_file(path_in(cfg, "f.csv"), field_csv(s.grid, s.f.values));
  write_file(path_in(cfg, "kappa.csv"), field_csv(s.grid, s.kappa.values));
  write_file(path_in(cfg, "sigma2pt.csv"), pair_csv(s.pairs, st.sigma2pt));
  return finish(cfg, "solve", checks);
}

int cmd_design(const RunConfig& cfg) {
  const Setup s = build_setup(cfg, cfg.delta);
  const DesignReport d = design_alternate(s.f, cfg.admissible, s.grid, s.pairs, cfg.solver, cfg.design);
  for (const auto& w : d.warnings) std::cerr << "warning: " << w << "\n";
  bool monotone = true;
  for (std::size_t k = 1; k < d.objective_history.size(); ++k)
    monotone = monotone && d.objective_history[k] <=
                               d.objective_history[k - 1] * (1.0 + 1e-12);
  bool in_bounds = true;
  for (int c : s.grid.interior_cells)
    in_bounds = in_bounds && d.kappa.values(c) >= cfg.admissible.kappa_lo &&
                d.kappa.values(c) <= cfg.admissible.kappa_hi;
  std::vector<CheckResult> checks{
      {"objective", d.objective, 0.0, 0.0, true},
      check_at_most("volume_used", d.volume_used, cfg.admissible.V, 1e-8 * cfg.admissible.V),
      check_true("objective_history_nonincreasing", monotone),
      check_true("kappa_within_bounds", in_bounds),
      {"outer_iterations", double(d.outer_iterations), 0.0, 0.0, true},
  };
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < d.objective_history.size(); ++k)
    rows.push_back({config_hash(cfg), std::to_string(k), format_number(d.objective_history[k]),
                    format_number(d.gaps[k]), std::to_string(d.inner_iterations[k])});
  write_file(path_in(cfg, "history.csv"),
             csv_table({"config_hash", "iteration", "objective", "gap", "inner_iterations"}, rows));
  write_file(path_in(cfg, "kappa.csv"), field_csv(s.grid, d.kappa.values));
  return finish(cfg, "design", checks);
}

int cmd_consistency(const RunConfig& cfg) {
  const std::string hash = config_hash(cfg);
  const SweepResult cons = consistency_sweep(cfg);
  const SweepResult norm = norm_stability_sweep(cfg);
  write_file(path_in(cfg, "consistency.csv"), sweep_csv(hash, cons));
  write_file(path_in(cfg, "norm_stability.csv"), sweep_csv(hash, norm));
  write_file(path_in(cfg, "timing_consistency.csv"), timing_csv(cons));
  std::vector<CheckResult> checks = cons.checks;
  checks.insert(checks.end(), norm.checks.begin(), norm.checks.end());
  return finish(cfg, "consistency", checks);
}

int cmd_localize(const RunConfig& cfg) {
  const std::string hash = config_hash(cfg);
  const SweepResult state = state_localization_sweep(cfg);
  const SweepResult design = design_localization_sweep(cfg);
  write_file(path_in(cfg, "localize_state.csv"), sweep_csv(hash, state));
  write_file(path_in(cfg, "localize_design.csv"), sweep_csv(hash, design));
  write_file(path_in(cfg, "timing_localize.csv"), timing_csv(state) + timing_csv(design));
  std::vector<CheckResult> checks = state.checks;
  checks.insert(checks.end(), design.checks.begin(), design.checks.end());
  return finish(cfg, "localize", checks);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal p-Laplacian duality, conductivity design and localization suite"};
  app.require_subcommand(1);
  Overrides o;
  std::string out, deltas;
  double p = 0, delta = 0, h_ratio = 0, alpha = 0;
  std::uint64_t seed = 0;

  std::vector<std::pair<std::string, int (*)(const RunConfig&)>> commands{
      {"verify", cmd_verify},         {"solve", cmd_solve},       {"design", cmd_design},
      {"consistency", cmd_consistency}, {"localize", cmd_localize}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " command");
    sub->add_option("--config", o.config_path, "JSON configuration file");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--p", p, "primal exponent");
    sub->add_option("--delta", delta, "horizon");
    sub->add_option("--h-ratio", h_ratio, "delta / h");
    sub->add_option("--alpha", alpha, "kernel exponent");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--deltas", deltas, "comma-separated horizon sweep");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  for (std::size_t k = 0; k < subs.size(); ++k) {
    CLI::App* sub = subs[k];
    if (!sub->parsed()) continue;
    if (sub->count("--out")) o.out = out;
    if (sub->count("--p")) o.p = p;
    if (sub->count("--delta")) o.delta = delta;
    if (sub->count("--h-ratio")) o.h_ratio = h_ratio;
    if (sub->count("--alpha")) o.alpha = alpha;
    if (sub->count("--seed")) o.seed = seed;
    if (sub->count("--deltas")) o.deltas = deltas;
    try {
      const RunConfig cfg = resolve(o);
      return commands[k].second(cfg);
    } catch (const ConvergenceError& e) {
      std::cerr << "convergence failure: " << e.what() << " (residual " << e.last_residual()
                << " after " << e.iterations() << " iterations)\n";
      return kConvergence;
    } catch (const IoError& e) {
      std::cerr << "output error: " << e.what() << "\n";
      return kIo;
    } catch (const std::invalid_argument& e) {
      std::cerr << "configuration error: " << e.what() << "\n";
      return kConfig;
    } catch (const std::domain_error& e) {
      std::cerr << "configuration error: " << e.what() << "\n";
      return kConfig;
    }
  }
  return kConfig;
}
