#pragma once

// Exact propagation of uncertain LTI systems
//
//   x'(t) = A(alpha) x(t) + b(alpha) u(t),   alpha in a parameter box,
//
// with A(alpha) = A0 + sum_i alpha_i A_i and b(alpha) = b0 + sum_i alpha_i b_i.
// Segment maps are evaluated in closed form through matrix exponentials, so
// the endpoint of a piecewise-constant control is an exact affine function
// of its coefficients.

#include <vector>

#include <Eigen/Dense>

#include "handsoff/control.hpp"

namespace handsoff {

struct ParameterPoint {
  Eigen::VectorXd values;

  int size() const { return static_cast<int>(values.size()); }
};

/// Axis-aligned box P = prod_i [lower_i, upper_i].
class ParameterBox {
 public:
  ParameterBox(Eigen::VectorXd lower, Eigen::VectorXd upper);

  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  int dim() const { return static_cast<int>(lower_.size()); }
  Eigen::VectorXd width() const { return upper_ - lower_; }
  ParameterPoint center() const;

  bool contains(const ParameterPoint& alpha, double tol = 0.0) const;
  /// Componentwise projection onto the box.
  ParameterPoint clip(const ParameterPoint& alpha) const;
  /// All 2^nu corners, in binary-counting order (bit i set = upper_i).
  std::vector<ParameterPoint> vertices() const;

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

class UncertainLTI {
 public:
  UncertainLTI(Eigen::MatrixXd a_nominal, std::vector<Eigen::MatrixXd> a_terms,
               Eigen::VectorXd b_nominal, std::vector<Eigen::VectorXd> b_terms);

  int dim_state() const { return static_cast<int>(a_nominal_.rows()); }
  int dim_param() const { return static_cast<int>(a_terms_.size()); }

  const Eigen::MatrixXd& a_nominal() const { return a_nominal_; }
  const std::vector<Eigen::MatrixXd>& a_terms() const { return a_terms_; }
  const Eigen::VectorXd& b_nominal() const { return b_nominal_; }
  const std::vector<Eigen::VectorXd>& b_terms() const { return b_terms_; }

 private:
  Eigen::MatrixXd a_nominal_;
  std::vector<Eigen::MatrixXd> a_terms_;
  Eigen::VectorXd b_nominal_;
  std::vector<Eigen::VectorXd> b_terms_;
};

struct SystemMatrices {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

/// A(alpha), b(alpha). Throws InputError when alpha has the wrong length.
SystemMatrices eval_system(const UncertainLTI& sys, const ParameterPoint& alpha);

/// e^{A h} by scaling and squaring with a diagonal Pade approximant
/// (degree 3 to 13, picked from the 1-norm of A h).
Eigen::MatrixXd transition(const Eigen::MatrixXd& a, double h);

/// Integral of e^{A s} b over s in [0, h], read off the upper-right block
/// of exp([[A, b], [0, 0]] h).
Eigen::VectorXd input_integral(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                               double h);

/// Both segment maps from a single augmented exponential.
struct SegmentMaps {
  Eigen::MatrixXd transition;  // e^{A h}
  Eigen::VectorXd input;       // int_0^h e^{A s} b ds
};
SegmentMaps segment_maps(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double h);

/// x(T; alpha) = free + gain * theta for every coefficient vector theta.
struct EndpointMap {
  Eigen::VectorXd free;  // e^{A T} x0
  Eigen::MatrixXd gain;  // d x N, column k is the response to a unit pulse on segment k

  Eigen::VectorXd apply(const Eigen::VectorXd& theta) const { return free + gain * theta; }
};

EndpointMap endpoint_operator(const UncertainLTI& sys, const ParameterPoint& alpha,
                              const PWCGrid& grid, const Eigen::VectorXd& x0);

struct TrajectorySample {
  double t;
  Eigen::VectorXd x;
};

/// Dense exact readout: `samples_per_segment` equal sub-steps per segment,
/// N * samples_per_segment + 1 samples from t = 0 to t = T inclusive.
std::vector<TrajectorySample> simulate_trajectory(const UncertainLTI& sys,
                                                  const ParameterPoint& alpha,
                                                  const Eigen::VectorXd& x0,
                                                  const ControlParams& control,
                                                  int samples_per_segment);

}  // namespace handsoff
