#include "handsoff/inner.hpp"

#include <cmath>
#include <sstream>

#include "handsoff/errors.hpp"

namespace handsoff {

namespace {
constexpr double kKktTolerance = 1e-8;
}

FiniteProgram assemble_lp(const PWCGrid& grid, std::span<const ScenarioRows> scenarios) {
  const int n = grid.segments();
  int scenario_rows_total = 0;
  for (const auto& s : scenarios) {
    if (s.rows.cols() != n) throw InputError("scenario rows do not match the grid");
    scenario_rows_total += static_cast<int>(s.rhs.size());
  }

  FiniteProgram lp;
  lp.objective = Eigen::VectorXd::Zero(2 * n);
  lp.objective.tail(n).setConstant(grid.step());
  lp.constraints = Eigen::MatrixXd::Zero(4 * n + scenario_rows_total, 2 * n);
  lp.rhs = Eigen::VectorXd::Zero(4 * n + scenario_rows_total);

  const auto ident = Eigen::MatrixXd::Identity(n, n);
  lp.constraints.block(0, 0, n, n) = ident;
  lp.constraints.block(0, n, n, n) = -ident;
  lp.constraints.block(n, 0, n, n) = -ident;
  lp.constraints.block(n, n, n, n) = -ident;
  lp.constraints.block(2 * n, 0, n, n) = ident;
  lp.constraints.block(3 * n, 0, n, n) = -ident;
  lp.rhs.segment(2 * n, 2 * n).setConstant(RobustProblem::control_bound());

  int row = 4 * n;
  for (const auto& s : scenarios) {
    const auto j = s.rows.rows();
    lp.constraints.block(row, 0, j, n) = s.rows;
    lp.rhs.segment(row, j) = s.rhs;
    row += static_cast<int>(j);
  }
  return lp;
}

FiniteProgram build_lp(const RobustProblem& problem, const ScenarioTuple& tuple) {
  if (tuple.points.empty()) throw InputError("scenario tuple is empty");
  std::vector<ScenarioRows> rows;
  rows.reserve(tuple.points.size());
  for (const auto& alpha : tuple.points) rows.push_back(scenario_rows(problem, alpha));
  return assemble_lp(problem.grid(), rows);
}

InnerSolution solve_program(const PWCGrid& grid, const FiniteProgram& program) {
  const LpSolution lp = solve_lp(program);
  InnerSolution out;
  out.lp_iterations = lp.iterations;
  switch (lp.status) {
    case LpStatus::Infeasible:
      return out;
    case LpStatus::DualInfeasible:
      // The epigraph cost is bounded below by zero, so this is numerical.
      throw SolverError("inner program reported as unbounded");
    case LpStatus::Optimal:
      break;
  }
  if (!(lp.kkt_residual <= kKktTolerance)) {
    std::ostringstream msg;
    msg << "inner program KKT residual " << lp.kkt_residual << " exceeds tolerance";
    throw SolverError(msg.str());
  }
  out.status = InnerStatus::Optimal;
  out.value = lp.value;
  out.theta = ControlParams(lp.x.head(grid.segments()), grid);
  out.kkt_residual = lp.kkt_residual;
  return out;
}

InnerSolution solve_inner(const RobustProblem& problem, const ScenarioTuple& tuple) {
  return solve_program(problem.grid(), build_lp(problem, tuple));
}

}  // namespace handsoff
