#include "handsoff/problem.hpp"

#include <cmath>

#include "handsoff/errors.hpp"

namespace handsoff {

TerminalSet::TerminalSet(Eigen::MatrixXd normals, Eigen::VectorXd offsets)
    : normals_(std::move(normals)), offsets_(std::move(offsets)) {
  if (offsets_.size() < 1) throw InputError("terminal set needs at least one row");
  if (normals_.rows() != offsets_.size()) {
    throw InputError("terminal set: normals and offsets differ in row count");
  }
  if (!normals_.allFinite() || !offsets_.allFinite()) {
    throw InputError("terminal set entries must be finite");
  }
}

double TerminalSet::margin(const Eigen::VectorXd& xi) const {
  return (normals_ * xi - offsets_).maxCoeff();
}

RobustProblem::RobustProblem(UncertainLTI system, ParameterBox box, PWCGrid grid,
                             TerminalSet terminal, Eigen::VectorXd x0)
    : system_(std::move(system)),
      box_(std::move(box)),
      grid_(grid),
      terminal_(std::move(terminal)),
      x0_(std::move(x0)) {
  if (box_.dim() != system_.dim_param()) {
    throw InputError("parameter box dimension differs from the number of parameter terms");
  }
  if (terminal_.dim() != system_.dim_state()) {
    throw InputError("terminal rows must have the state dimension");
  }
  if (x0_.size() != system_.dim_state()) throw InputError("x0 has the wrong length");
  if (!x0_.allFinite()) throw InputError("x0 must be finite");
}

double l1_sum(const ControlParams& control) { return control.theta.cwiseAbs().sum(); }

double l1_cost(const ControlParams& control) { return control.grid.step() * l1_sum(control); }

double l0_measure(const ControlParams& control, double zero_tol) {
  if (!(zero_tol >= 0.0)) throw InputError("zero_tol must be >= 0");
  const auto active = (control.theta.array().abs() > zero_tol).count();
  return control.grid.step() * static_cast<double>(active);
}

Admissibility admissibility(const ControlParams& control) {
  const double peak = control.theta.size() ? control.theta.cwiseAbs().maxCoeff() : 0.0;
  return {peak <= RobustProblem::control_bound() + 1e-9, peak - RobustProblem::control_bound()};
}

ScenarioRows scenario_rows(const RobustProblem& problem, const ParameterPoint& alpha) {
  if (!problem.box().contains(alpha, 1e-12)) {
    throw InputError("scenario point lies outside the parameter box");
  }
  const EndpointMap map = problem.endpoint(alpha);
  const TerminalSet& c = problem.terminal();
  return {c.normals() * map.gain, c.offsets() - c.normals() * map.free};
}

double terminal_margin(const RobustProblem& problem, const ParameterPoint& alpha,
                       const ControlParams& control) {
  return problem.terminal().margin(problem.endpoint(alpha).apply(control.theta));
}

}  // namespace handsoff
