#pragma once

// Problem assembly for robust L1 (maximum hands-off) control with a
// piecewise-constant control in the indicator dictionary and an affine
// terminal set.

#include <vector>

#include <Eigen/Dense>

#include "handsoff/control.hpp"
#include "handsoff/dynamics.hpp"

namespace handsoff {

/// C = { xi : c_j' xi <= d_j for all j }, stored as normals (J x d) and
/// offsets (J).
class TerminalSet {
 public:
  TerminalSet(Eigen::MatrixXd normals, Eigen::VectorXd offsets);

  const Eigen::MatrixXd& normals() const { return normals_; }
  const Eigen::VectorXd& offsets() const { return offsets_; }
  int rows() const { return static_cast<int>(offsets_.size()); }
  int dim() const { return static_cast<int>(normals_.cols()); }

  /// psi(xi) = max_j (c_j' xi - d_j); xi is in C iff psi(xi) <= 0.
  double margin(const Eigen::VectorXd& xi) const;

 private:
  Eigen::MatrixXd normals_;
  Eigen::VectorXd offsets_;
};

/// The full instance. Controls are bounded by |u| <= 1.
class RobustProblem {
 public:
  RobustProblem(UncertainLTI system, ParameterBox box, PWCGrid grid, TerminalSet terminal,
                Eigen::VectorXd x0);

  const UncertainLTI& system() const { return system_; }
  const ParameterBox& box() const { return box_; }
  const PWCGrid& grid() const { return grid_; }
  const TerminalSet& terminal() const { return terminal_; }
  const Eigen::VectorXd& x0() const { return x0_; }
  static constexpr double control_bound() { return 1.0; }

  EndpointMap endpoint(const ParameterPoint& alpha) const {
    return endpoint_operator(system_, alpha, grid_, x0_);
  }

 private:
  UncertainLTI system_;
  ParameterBox box_;
  PWCGrid grid_;
  TerminalSet terminal_;
  Eigen::VectorXd x0_;
};

/// h * sum_k |theta_k|.
double l1_cost(const ControlParams& control);

/// sum_k |theta_k| without the segment-length weight.
double l1_sum(const ControlParams& control);

/// Measure of the support: h * #{k : |theta_k| > zero_tol}.
double l0_measure(const ControlParams& control, double zero_tol = 1e-6);

struct Admissibility {
  bool admissible;
  double violation;  // max_k |theta_k| - 1
};

/// |theta_k| <= 1 + 1e-9 for every k.
Admissibility admissibility(const ControlParams& control);

/// Terminal constraint at one alpha, reduced to rows * theta <= rhs.
struct ScenarioRows {
  Eigen::MatrixXd rows;  // J x N, row j is c_j' G(alpha)
  Eigen::VectorXd rhs;   // d_j - c_j' m(alpha)
};

ScenarioRows scenario_rows(const RobustProblem& problem, const ParameterPoint& alpha);

/// psi(x_theta(T; alpha)); positive means the terminal constraint is violated.
double terminal_margin(const RobustProblem& problem, const ParameterPoint& alpha,
                       const ControlParams& control);

}  // namespace handsoff
