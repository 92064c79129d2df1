#include "handsoff/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "handsoff/analysis.hpp"
#include "handsoff/config.hpp"
#include "handsoff/errors.hpp"
#include "handsoff/report.hpp"

namespace handsoff {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Options {
  std::string config;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int segments = 0;
  int delta = 0;
  int samples = -1;
  int count = 0;
  std::vector<int> counts;
  std::string theta_file;

  bool seed_set = false;
  bool segments_set = false;
  bool delta_set = false;
  bool count_set = false;
  bool counts_set = false;
};

ProblemConfig load(const Options& opt, bool builtin) {
  ProblemConfig cfg = builtin ? builtin_config(opt.config) : load_config(opt.config);
  if (opt.segments_set) {
    if (opt.segments < 1) throw ConfigError("--segments", "must be positive");
    cfg.segments = opt.segments;
  }
  if (opt.delta_set) {
    if (opt.delta < 1 || opt.delta > kMaxDelta) throw ConfigError("--delta", "out of range");
    cfg.delta = opt.delta;
  }
  if (opt.samples >= 0) cfg.verification.samples = opt.samples;
  (void)cfg.build();
  return cfg;
}

std::vector<ParameterPoint> plot_alphas(const ProblemConfig& cfg, const RobustProblem& problem) {
  return sample_box(problem.box(), cfg.output.trajectory_samples, cfg.verification.seed + 1);
}

void write_artifacts(const fs::path& dir, const ProblemConfig& cfg, const RobustProblem& problem,
                     const ControlParams& theta) {
  const auto alphas = plot_alphas(cfg, problem);
  const int sps = cfg.output.samples_per_segment;
  write_atomic(dir / "theta.json", theta_json(theta).dump() + "\n");
  write_atomic(dir / "trajectories.csv", trajectories_csv(problem, theta, alphas, sps));
  write_atomic(dir / "control.svg", control_svg(theta));
  write_atomic(dir / "states.svg", states_svg(problem, theta, alphas, sps));
}

ordered_json report_head(const ProblemConfig& cfg, const std::string& method) {
  ordered_json j;
  j["config_hash"] = config_hash(cfg);
  j["method"] = method;
  j["horizon"] = cfg.horizon;
  j["segments"] = cfg.segments;
  return j;
}

void add_control_sections(ordered_json& j, const ProblemConfig& cfg, const RobustProblem& problem,
                          const ControlParams& theta) {
  j["value"] = {{"weighted", l1_cost(theta)}, {"unweighted", l1_sum(theta)}};
  j["theta"] = theta_json(theta);
  j["sparsity"] = to_json(sparsity_report(theta));
  j["verification"] = to_json(verify_robust(problem, theta, cfg.verification.samples,
                                            cfg.verification.seed,
                                            cfg.verification.include_vertices));
  j["verification"]["seed"] = cfg.verification.seed;
}

void finish_report(ordered_json& j, const fs::path& dir, Clock::time_point start) {
  j["wall_time_s"] = std::chrono::duration<double>(Clock::now() - start).count();
  write_atomic(dir / "report.json", j.dump(2) + "\n");
}

int cmd_solve(const Options& opt, bool builtin, std::ostream& out) {
  const auto start = Clock::now();
  ProblemConfig cfg = load(opt, builtin);
  if (opt.seed_set) cfg.annealer.seed = opt.seed;
  const RobustProblem problem = cfg.build();
  const fs::path dir = opt.out_dir;
  fs::create_directories(dir);

  const SipResult r = sip_solve(problem, cfg.annealer, cfg.delta);
  ordered_json j = report_head(cfg, "sip");
  j["status"] = to_string(r.status);
  j["delta"] = r.worst_tuple.size();
  j["exactness_guaranteed"] = r.exactness_guaranteed;
  j["annealer_seed"] = cfg.annealer.seed;
  if (r.status == SipStatus::Infeasible) {
    j["infeasible_tuple"] = to_json(r.worst_tuple);
    j["trace"] = trace_json(r);
    finish_report(j, dir, start);
    out << "infeasible: no control meets the terminal set at the reported tuple\n";
    return kExitInfeasible;
  }
  const ControlParams& theta = *r.theta_star;
  add_control_sections(j, cfg, problem, theta);
  j["worst_tuple"] = to_json(r.worst_tuple);
  j["trace"] = trace_json(r);
  write_artifacts(dir, cfg, problem, theta);
  finish_report(j, dir, start);

  out << "status " << to_string(r.status) << "  value " << l1_cost(theta) << " (unweighted "
      << l1_sum(theta) << ")  violations " << j["verification"]["violations"].get<int>() << "/"
      << j["verification"]["samples"].get<int>() << "\n";
  return kExitOk;
}

int cmd_scenario(const Options& opt, std::ostream& out) {
  const auto start = Clock::now();
  ProblemConfig cfg = load(opt, false);
  if (opt.count_set) {
    if (opt.count < 1) throw ConfigError("--count", "must be a positive integer");
    cfg.scenario.count = opt.count;
  }
  if (opt.seed_set) cfg.scenario.seed = opt.seed;
  const RobustProblem problem = cfg.build();
  const fs::path dir = opt.out_dir;
  fs::create_directories(dir);

  const ScenarioRun r = scenario_solve(problem, cfg.scenario.count, cfg.scenario.seed);
  ordered_json j = report_head(cfg, "scenario");
  j["status"] = r.solution.optimal() ? "optimal" : "infeasible";
  j["scenarios"] = cfg.scenario.count;
  j["scenario_seed"] = cfg.scenario.seed;
  if (!r.solution.optimal()) {
    finish_report(j, dir, start);
    out << "infeasible: the sampled scenarios admit no control\n";
    return kExitInfeasible;
  }
  const ControlParams& theta = *r.solution.theta;
  add_control_sections(j, cfg, problem, theta);
  write_artifacts(dir, cfg, problem, theta);
  finish_report(j, dir, start);
  out << "scenarios " << cfg.scenario.count << "  value " << l1_cost(theta) << " (unweighted "
      << l1_sum(theta) << ")  violations " << j["verification"]["violations"].get<int>() << "/"
      << j["verification"]["samples"].get<int>() << "\n";
  return kExitOk;
}

int cmd_compare(const Options& opt, std::ostream& out) {
  ProblemConfig cfg = load(opt, false);
  if (opt.seed_set) cfg.annealer.seed = opt.seed;
  if (opt.counts_set) {
    for (int c : opt.counts) {
      if (c < 1) throw ConfigError("--counts", "scenario counts must be positive");
    }
    cfg.scenario.compare_counts = opt.counts;
  }
  const RobustProblem problem = cfg.build();
  const fs::path dir = opt.out_dir;
  fs::create_directories(dir);

  CompareOptions copt;
  copt.scenario_counts = cfg.scenario.compare_counts;
  copt.scenario_seed = cfg.scenario.seed;
  copt.verify_samples = cfg.verification.samples;
  copt.verify_seed = cfg.verification.seed;
  copt.include_vertices = cfg.verification.include_vertices;
  copt.delta = cfg.delta;
  const auto rows = compare_report(problem, cfg.annealer, copt);
  const std::string table = compare_table(rows);
  write_atomic(dir / "compare.csv", compare_csv(rows));
  write_atomic(dir / "compare.txt", table);
  out << table;
  for (const auto& r : rows) {
    if (r.status == "error") return kExitSolver;
  }
  return kExitOk;
}

ControlParams read_theta(const std::string& path, const PWCGrid& grid) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--theta-file", "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("--theta-file", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_array()) throw ConfigError("--theta-file", "expected a JSON array of numbers");
  if (static_cast<int>(j.size()) != grid.segments()) {
    throw ConfigError("--theta-file", "expected " + std::to_string(grid.segments()) +
                                          " coefficients, got " + std::to_string(j.size()));
  }
  Eigen::VectorXd theta(grid.segments());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError("--theta-file[" + std::to_string(i) + "]", "expected a number");
    theta[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  ControlParams control(theta, grid);
  const Admissibility adm = admissibility(control);
  if (!adm.admissible) {
    throw ConfigError("--theta-file", "control is not admissible: max |theta| exceeds 1 by " +
                                          std::to_string(adm.violation));
  }
  return control;
}

int cmd_verify(const Options& opt, std::ostream& out) {
  const auto start = Clock::now();
  ProblemConfig cfg = load(opt, false);
  if (opt.seed_set) cfg.verification.seed = opt.seed;
  if (opt.theta_file.empty()) throw ConfigError("--theta-file", "required");
  const RobustProblem problem = cfg.build();
  const ControlParams theta = read_theta(opt.theta_file, problem.grid());
  const fs::path dir = opt.out_dir;
  fs::create_directories(dir);

  const VerificationReport v = verify_robust(problem, theta, cfg.verification.samples,
                                             cfg.verification.seed, cfg.verification.include_vertices);
  ordered_json j = report_head(cfg, "verify");
  j["value"] = {{"weighted", l1_cost(theta)}, {"unweighted", l1_sum(theta)}};
  j["verification"] = to_json(v);
  j["verification"]["seed"] = cfg.verification.seed;
  finish_report(j, dir, start);
  out << "violations " << v.violations << "/" << v.samples << "  worst margin " << v.worst_margin
      << "\n";
  return v.violations > 0 ? kExitViolations : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust maximum hands-off control for uncertain LTI systems", "handsoff"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&opt](CLI::App* sub, const char* what) {
    sub->add_option("config", opt.config, what)->required();
    sub->add_option("--out", opt.out_dir, "Output directory");
    sub->add_option("--segments", opt.segments, "Override the number of control segments")
        ->each([&opt](const std::string&) { opt.segments_set = true; });
    sub->add_option("--samples", opt.samples, "Verification sample count");
    sub->add_option("--seed", opt.seed, "Seed override")
        ->each([&opt](const std::string&) { opt.seed_set = true; });
  };
  auto delta_flag = [&opt](CLI::App* sub) {
    sub->add_option("--delta", opt.delta, "Tuple length (defaults to the segment count)")
        ->each([&opt](const std::string&) { opt.delta_set = true; });
  };

  CLI::App* solve = app.add_subcommand("solve", "Solve the robust program with the SIP scheme");
  common(solve, "Problem config (JSON)");
  delta_flag(solve);

  CLI::App* bench = app.add_subcommand("bench", "Solve a built-in benchmark (smd)");
  common(bench, "Built-in problem name");
  delta_flag(bench);

  CLI::App* scenario = app.add_subcommand("scenario", "Scenario-approach baseline");
  common(scenario, "Problem config (JSON)");
  scenario->add_option("--count", opt.count, "Number of sampled scenarios")
      ->each([&opt](const std::string&) { opt.count_set = true; });

  CLI::App* compare = app.add_subcommand("compare", "SIP vs scenario comparison table");
  common(compare, "Problem config (JSON)");
  delta_flag(compare);
  compare->add_option("--counts", opt.counts, "Scenario counts, comma separated")
      ->delimiter(',')
      ->each([&opt](const std::string&) { opt.counts_set = true; });

  CLI::App* verify = app.add_subcommand("verify", "Monte Carlo verification of a control");
  common(verify, "Problem config (JSON)");
  verify->add_option("--theta-file", opt.theta_file, "Control coefficients (JSON array)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (solve->parsed()) return cmd_solve(opt, false, out);
    if (bench->parsed()) return cmd_solve(opt, true, out);
    if (scenario->parsed()) return cmd_scenario(opt, out);
    if (compare->parsed()) return cmd_compare(opt, out);
    if (verify->parsed()) return cmd_verify(opt, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitConfig;
}

}  // namespace handsoff
