#include "handsoff/control.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "handsoff/errors.hpp"

namespace handsoff {

PWCGrid::PWCGrid(double horizon, int segments) : horizon_(horizon), segments_(segments) {
  if (!(std::isfinite(horizon) && horizon > 0.0)) {
    throw InputError("grid horizon must be finite and positive");
  }
  if (segments < 1) throw InputError("grid needs at least one segment");
}

ControlParams::ControlParams(Eigen::VectorXd theta_in, PWCGrid grid_in)
    : theta(std::move(theta_in)), grid(grid_in) {
  if (theta.size() != grid.segments()) {
    std::ostringstream msg;
    msg << "control has " << theta.size() << " coefficients but the grid has "
        << grid.segments() << " segments";
    throw InputError(msg.str());
  }
  if (!theta.allFinite()) throw InputError("control coefficients must be finite");
}

ControlParams ControlParams::zero(const PWCGrid& grid) {
  return ControlParams(Eigen::VectorXd::Zero(grid.segments()), grid);
}

double ControlParams::at(double t) const {
  int k = static_cast<int>(std::floor(t / grid.step()));
  k = std::clamp(k, 0, grid.segments() - 1);
  return theta[k];
}

}  // namespace handsoff
