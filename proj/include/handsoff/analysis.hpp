#pragma once

// Baselines and diagnostics around the robust solver: the scenario
// approach, Monte Carlo verification of terminal constraints, sparsity
// measures, and a brute-force L0 oracle for small grids.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "handsoff/inner.hpp"
#include "handsoff/sip.hpp"

namespace handsoff {

/// `count` i.i.d. uniform draws from the box.
std::vector<ParameterPoint> sample_box(const ParameterBox& box, int count, std::uint64_t seed);

/// Tensor grid with `points_per_dim` equally spaced values per axis
/// (the box midpoint when points_per_dim is 1).
std::vector<ParameterPoint> alpha_grid(const ParameterBox& box, int points_per_dim);

struct ScenarioRun {
  InnerSolution solution;
  ScenarioTuple tuple;
};

ScenarioRun scenario_solve(const RobustProblem& problem, int num_scenarios, std::uint64_t seed);

inline constexpr double kViolationTolerance = 1e-6;
inline constexpr std::size_t kMaxReportedViolations = 20;

struct VerificationReport {
  int samples = 0;
  int violations = 0;
  double worst_margin = -std::numeric_limits<double>::infinity();
  ParameterPoint worst_alpha;
  std::vector<ParameterPoint> violating_alphas;  // first kMaxReportedViolations
  double tolerance = kViolationTolerance;
};

/// Terminal margin psi(x(T; alpha)) over uniform samples, plus every box
/// vertex when `include_vertices`. Margins above `tolerance` count as
/// violations. The control must be admissible.
VerificationReport verify_robust(const RobustProblem& problem, const ControlParams& control,
                                 int num_samples, std::uint64_t seed, bool include_vertices,
                                 double tolerance = kViolationTolerance);

struct SparsityReport {
  double l1 = 0.0;
  double l0 = 0.0;
  double bang_off_bang_score = 0.0;
  std::vector<int> support_segments;
};

SparsityReport sparsity_report(const ControlParams& control, double eps_zero = 1e-6,
                               double eps_bob = 1e-3);

inline constexpr int kMaxBruteForceSegments = 12;

struct L0Result {
  double min_l0 = std::numeric_limits<double>::infinity();
  std::optional<ControlParams> witness;
};

/// Minimal support over ternary controls {-1, 0, 1}^N that satisfy the
/// terminal rows at every point of `alpha_grid`. Ties go to the
/// lexicographically smallest control (-1 < 0 < 1). Throws BudgetError when
/// N exceeds kMaxBruteForceSegments.
L0Result brute_force_l0(const RobustProblem& problem,
                        const std::vector<ParameterPoint>& alpha_grid);

struct CompareOptions {
  std::vector<int> scenario_counts;
  std::uint64_t scenario_seed = 0;
  int verify_samples = 10000;
  std::uint64_t verify_seed = 1;
  bool include_vertices = true;
  std::optional<int> delta;
};

struct CompareRow {
  std::string method;  // "sip" or "scenario"
  int scenarios = 0;
  std::string status;
  double value = std::numeric_limits<double>::quiet_NaN();
  double value_unweighted = std::numeric_limits<double>::quiet_NaN();
  int violations = -1;
  double worst_margin = std::numeric_limits<double>::quiet_NaN();
  double runtime_s = 0.0;
  std::string error;
};

/// One SIP row followed by one scenario row per count. Failures are
/// recorded in the row instead of thrown.
std::vector<CompareRow> compare_report(const RobustProblem& problem, const AnnealerConfig& config,
                                       const CompareOptions& options);

}  // namespace handsoff
