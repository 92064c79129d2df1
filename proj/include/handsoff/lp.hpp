#pragma once

// Dense linear programming for small to mid-sized inner problems.
//
//   minimize  c' x   subject to  A x <= b,   x free.
//
// The solver runs a two-phase tableau simplex on the standard-form dual
//
//   minimize  b' y   subject to  A' y = -c,  y >= 0,
//
// whose n x m tableau is smaller than the primal one whenever the program
// has more rows than variables (the case for epigraph reformulations). The
// primal point is the vector of simplex multipliers of the final basis.

#include <Eigen/Dense>

namespace handsoff {

struct FiniteProgram {
  Eigen::VectorXd objective;    // c, length n
  Eigen::MatrixXd constraints;  // A, m x n
  Eigen::VectorXd rhs;          // b, length m

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rhs.size()); }
};

enum class LpStatus {
  Optimal,
  Infeasible,      // no x with A x <= b
  DualInfeasible,  // c' x unbounded below, or both primal and dual infeasible
};

struct LpOptions {
  double pivot_tol = 1e-9;
  double optimality_tol = 1e-10;
  int max_iterations = 0;  // 0 picks a cap from the problem size
  int degenerate_switch = 50;  // consecutive stalled pivots before Bland's rule
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;          // c' x when Optimal
  Eigen::VectorXd x;           // primal point when Optimal
  Eigen::VectorXd multipliers; // y >= 0 with A' y = -c when Optimal
  double kkt_residual = 0.0;
  int iterations = 0;
};

/// Throws SolverError when the iteration cap is reached or the final basis
/// is numerically singular.
LpSolution solve_lp(const FiniteProgram& program, const LpOptions& options = {});

/// Largest scaled violation among primal feasibility, dual feasibility,
/// complementary slackness and the duality gap.
double kkt_residual(const FiniteProgram& program, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y);

}  // namespace handsoff
