#pragma once

#include <Eigen/Dense>

namespace handsoff {

/// Uniform partition of [0, T] into N segments, t_k = k * T / N.
class PWCGrid {
 public:
  PWCGrid(double horizon, int segments);

  double horizon() const { return horizon_; }
  int segments() const { return segments_; }
  double step() const { return horizon_ / segments_; }
  double boundary(int k) const { return k * step(); }

  bool operator==(const PWCGrid&) const = default;

 private:
  double horizon_;
  int segments_;
};

/// Coefficients of a piecewise-constant control in the indicator
/// dictionary: u(t) = theta[k] on segment k.
struct ControlParams {
  ControlParams(Eigen::VectorXd theta, PWCGrid grid);

  /// All-zero control on `grid`.
  static ControlParams zero(const PWCGrid& grid);

  double at(double t) const;

  Eigen::VectorXd theta;
  PWCGrid grid;
};

}  // namespace handsoff
