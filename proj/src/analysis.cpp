#include "handsoff/analysis.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "handsoff/errors.hpp"
#include "handsoff/parallel.hpp"

namespace handsoff {

std::vector<ParameterPoint> sample_box(const ParameterBox& box, int count, std::uint64_t seed) {
  if (count < 0) throw InputError("sample count must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::VectorXd width = box.width();
  std::vector<ParameterPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    Eigen::VectorXd v(box.dim());
    for (int i = 0; i < box.dim(); ++i) v[i] = box.lower()[i] + width[i] * unit(rng);
    out.push_back({std::move(v)});
  }
  return out;
}

std::vector<ParameterPoint> alpha_grid(const ParameterBox& box, int points_per_dim) {
  if (points_per_dim < 1) throw InputError("alpha grid needs at least one point per axis");
  const int nu = box.dim();
  std::size_t total = 1;
  for (int i = 0; i < nu; ++i) total *= static_cast<std::size_t>(points_per_dim);
  std::vector<ParameterPoint> out;
  out.reserve(total);
  std::vector<int> index(nu, 0);
  for (std::size_t n = 0; n < total; ++n) {
    Eigen::VectorXd v(nu);
    for (int i = 0; i < nu; ++i) {
      v[i] = points_per_dim == 1 ? 0.5 * (box.lower()[i] + box.upper()[i])
                                 : box.lower()[i] + (box.upper()[i] - box.lower()[i]) * index[i] /
                                                        (points_per_dim - 1);
    }
    out.push_back({std::move(v)});
    for (int i = 0; i < nu; ++i) {
      if (++index[i] < points_per_dim) break;
      index[i] = 0;
    }
  }
  return out;
}

ScenarioRun scenario_solve(const RobustProblem& problem, int num_scenarios, std::uint64_t seed) {
  if (num_scenarios < 1) throw InputError("num_scenarios must be positive");
  ScenarioRun run;
  run.tuple.points = sample_box(problem.box(), num_scenarios, seed);
  run.solution = solve_inner(problem, run.tuple);
  return run;
}

VerificationReport verify_robust(const RobustProblem& problem, const ControlParams& control,
                                 int num_samples, std::uint64_t seed, bool include_vertices,
                                 double tolerance) {
  if (num_samples < 0) throw InputError("num_samples must be non-negative");
  if (!(control.grid == problem.grid())) throw InputError("control grid differs from problem grid");
  const Admissibility adm = admissibility(control);
  if (!adm.admissible) throw InputError("control is not admissible (|theta| > 1)");

  std::vector<ParameterPoint> alphas = sample_box(problem.box(), num_samples, seed);
  if (include_vertices) {
    for (auto& v : problem.box().vertices()) alphas.push_back(std::move(v));
  }
  std::vector<double> margins(alphas.size());
  parallel_for(alphas.size(),
               [&](std::size_t i) { margins[i] = terminal_margin(problem, alphas[i], control); });

  VerificationReport report;
  report.samples = static_cast<int>(alphas.size());
  report.tolerance = tolerance;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (margins[i] > report.worst_margin) {
      report.worst_margin = margins[i];
      report.worst_alpha = alphas[i];
    }
    if (margins[i] > tolerance) {
      ++report.violations;
      if (report.violating_alphas.size() < kMaxReportedViolations) {
        report.violating_alphas.push_back(alphas[i]);
      }
    }
  }
  return report;
}

SparsityReport sparsity_report(const ControlParams& control, double eps_zero, double eps_bob) {
  SparsityReport r;
  r.l1 = l1_cost(control);
  r.l0 = l0_measure(control, eps_zero);
  const int n = control.grid.segments();
  int bang_off_bang = 0;
  for (int k = 0; k < n; ++k) {
    const double mag = std::abs(control.theta[k]);
    if (mag > eps_zero) r.support_segments.push_back(k);
    if (std::min(mag, std::abs(1.0 - mag)) <= eps_bob) ++bang_off_bang;
  }
  r.bang_off_bang_score = static_cast<double>(bang_off_bang) / n;
  return r;
}

L0Result brute_force_l0(const RobustProblem& problem,
                        const std::vector<ParameterPoint>& alpha_grid) {
  const PWCGrid& grid = problem.grid();
  const int n = grid.segments();
  if (n > kMaxBruteForceSegments) {
    throw BudgetError("brute-force L0 enumeration refused: " + std::to_string(n) +
                      " segments exceed the limit of " + std::to_string(kMaxBruteForceSegments));
  }
  if (alpha_grid.empty()) throw InputError("alpha grid is empty");

  std::vector<ScenarioRows> per_alpha;
  per_alpha.reserve(alpha_grid.size());
  Eigen::Index total_rows = 0;
  for (const auto& a : alpha_grid) {
    per_alpha.push_back(scenario_rows(problem, a));
    total_rows += per_alpha.back().rhs.size();
  }
  Eigen::MatrixXd rows(total_rows, n);
  Eigen::VectorXd rhs(total_rows);
  Eigen::Index r = 0;
  for (const auto& s : per_alpha) {
    rows.middleRows(r, s.rhs.size()) = s.rows;
    rhs.segment(r, s.rhs.size()) = s.rhs;
    r += s.rhs.size();
  }

  constexpr double kFeasTol = 1e-9;
  // Odometer over {-1, 0, 1}^N, most significant digit first, with the
  // product rows * theta maintained incrementally.
  std::vector<int> digit(n, -1);
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(n, -1.0);
  Eigen::VectorXd lhs = rows * theta;
  int support = n;
  int best_support = n + 1;
  Eigen::VectorXd best_theta;
  for (;;) {
    if (support < best_support && (lhs.array() <= rhs.array() + kFeasTol).all()) {
      best_support = support;
      best_theta = theta;
    }
    int k = n - 1;
    while (k >= 0 && digit[k] == 1) {
      lhs -= 2.0 * rows.col(k);
      digit[k] = -1;
      theta[k] = -1.0;
      --k;
    }
    if (k < 0) break;
    lhs += rows.col(k);
    support += digit[k] == -1 ? -1 : 1;
    ++digit[k];
    theta[k] = digit[k];
  }

  L0Result out;
  if (best_support <= n) {
    out.min_l0 = grid.step() * best_support;
    out.witness = ControlParams(best_theta, grid);
  }
  return out;
}

std::vector<CompareRow> compare_report(const RobustProblem& problem, const AnnealerConfig& config,
                                       const CompareOptions& options) {
  using Clock = std::chrono::steady_clock;
  std::vector<CompareRow> rows;

  auto finish = [&](CompareRow& row, const std::optional<ControlParams>& theta) {
    if (!theta) return;
    row.value = l1_cost(*theta);
    row.value_unweighted = l1_sum(*theta);
    const VerificationReport v = verify_robust(problem, *theta, options.verify_samples,
                                               options.verify_seed, options.include_vertices);
    row.violations = v.violations;
    row.worst_margin = v.worst_margin;
  };

  {
    CompareRow row;
    row.method = "sip";
    const auto start = Clock::now();
    try {
      const SipResult r = sip_solve(problem, config, options.delta);
      row.status = to_string(r.status);
      row.runtime_s = std::chrono::duration<double>(Clock::now() - start).count();
      finish(row, r.theta_star);
    } catch (const std::exception& e) {
      row.status = "error";
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  for (const int count : options.scenario_counts) {
    CompareRow row;
    row.method = "scenario";
    row.scenarios = count;
    const auto start = Clock::now();
    try {
      const ScenarioRun r = scenario_solve(problem, count, options.scenario_seed);
      row.status = r.solution.optimal() ? "optimal" : "infeasible";
      row.runtime_s = std::chrono::duration<double>(Clock::now() - start).count();
      finish(row, r.solution.theta);
    } catch (const std::exception& e) {
      row.status = "error";
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace handsoff
