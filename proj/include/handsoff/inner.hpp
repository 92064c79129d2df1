#pragma once

// The relaxed inner program g(x0; p): minimize the L1 cost of the control
// subject to the terminal constraint at finitely many parameter points.

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "handsoff/lp.hpp"
#include "handsoff/problem.hpp"

namespace handsoff {

/// Ordered tuple p = (alpha^1, ..., alpha^delta). Repeated points are allowed.
struct ScenarioTuple {
  std::vector<ParameterPoint> points;

  int size() const { return static_cast<int>(points.size()); }
};

enum class InnerStatus { Optimal, Infeasible };

struct InnerSolution {
  InnerStatus status = InnerStatus::Infeasible;
  double value = std::numeric_limits<double>::infinity();
  std::optional<ControlParams> theta;
  double kkt_residual = 0.0;
  int lp_iterations = 0;

  bool optimal() const { return status == InnerStatus::Optimal; }
};

/// Epigraph form over (theta, s) in R^N x R^N:
///   min h * sum s   s.t.  theta - s <= 0,  -theta - s <= 0,
///                         theta <= 1,     -theta <= 1,
///                         scenario rows for every tuple point.
/// Rows come in exactly that order: 4N + delta * J in total.
FiniteProgram build_lp(const RobustProblem& problem, const ScenarioTuple& tuple);

/// Same program from precomputed scenario rows.
FiniteProgram assemble_lp(const PWCGrid& grid, std::span<const ScenarioRows> scenarios);

/// Solves an assembled inner program. Throws SolverError on numerical
/// failure; infeasibility is reported through the status.
InnerSolution solve_program(const PWCGrid& grid, const FiniteProgram& program);

InnerSolution solve_inner(const RobustProblem& problem, const ScenarioTuple& tuple);

}  // namespace handsoff
