#include "handsoff/dynamics.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "handsoff/errors.hpp"

namespace handsoff {

ParameterBox::ParameterBox(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw InputError("parameter box bounds differ in length");
  }
  if (!lower_.allFinite() || !upper_.allFinite()) {
    throw InputError("parameter box bounds must be finite");
  }
  if ((lower_.array() > upper_.array()).any()) {
    throw InputError("parameter box has lower > upper");
  }
}

ParameterPoint ParameterBox::center() const { return {0.5 * (lower_ + upper_)}; }

bool ParameterBox::contains(const ParameterPoint& alpha, double tol) const {
  if (alpha.size() != dim()) return false;
  return (alpha.values.array() >= lower_.array() - tol).all() &&
         (alpha.values.array() <= upper_.array() + tol).all();
}

ParameterPoint ParameterBox::clip(const ParameterPoint& alpha) const {
  return {alpha.values.cwiseMax(lower_).cwiseMin(upper_)};
}

std::vector<ParameterPoint> ParameterBox::vertices() const {
  const int nu = dim();
  std::vector<ParameterPoint> out;
  out.reserve(std::size_t{1} << nu);
  for (std::size_t mask = 0; mask < (std::size_t{1} << nu); ++mask) {
    Eigen::VectorXd v(nu);
    for (int i = 0; i < nu; ++i) v[i] = (mask >> i) & 1 ? upper_[i] : lower_[i];
    out.push_back({std::move(v)});
  }
  return out;
}

UncertainLTI::UncertainLTI(Eigen::MatrixXd a_nominal, std::vector<Eigen::MatrixXd> a_terms,
                           Eigen::VectorXd b_nominal, std::vector<Eigen::VectorXd> b_terms)
    : a_nominal_(std::move(a_nominal)),
      a_terms_(std::move(a_terms)),
      b_nominal_(std::move(b_nominal)),
      b_terms_(std::move(b_terms)) {
  const auto d = a_nominal_.rows();
  if (d < 1 || a_nominal_.cols() != d) throw InputError("a_nominal must be square and non-empty");
  if (b_nominal_.size() != d) throw InputError("b_nominal length differs from state dimension");
  if (a_terms_.size() != b_terms_.size()) {
    throw InputError("a_terms and b_terms must have one entry per parameter");
  }
  if (!a_nominal_.allFinite() || !b_nominal_.allFinite()) {
    throw InputError("system matrices must be finite");
  }
  for (std::size_t i = 0; i < a_terms_.size(); ++i) {
    if (a_terms_[i].rows() != d || a_terms_[i].cols() != d) {
      throw InputError("a_terms[" + std::to_string(i) + "] has the wrong shape");
    }
    if (b_terms_[i].size() != d) {
      throw InputError("b_terms[" + std::to_string(i) + "] has the wrong length");
    }
    if (!a_terms_[i].allFinite() || !b_terms_[i].allFinite()) {
      throw InputError("system matrices must be finite");
    }
  }
}

SystemMatrices eval_system(const UncertainLTI& sys, const ParameterPoint& alpha) {
  if (alpha.size() != sys.dim_param()) {
    std::ostringstream msg;
    msg << "parameter point has length " << alpha.size() << ", system expects "
        << sys.dim_param();
    throw InputError(msg.str());
  }
  SystemMatrices out{sys.a_nominal(), sys.b_nominal()};
  for (int i = 0; i < sys.dim_param(); ++i) {
    out.a += alpha.values[i] * sys.a_terms()[i];
    out.b += alpha.values[i] * sys.b_terms()[i];
  }
  return out;
}

namespace {

using Eigen::MatrixXd;

// Pade coefficients and 1-norm thresholds for degrees 3, 5, 7, 9, 13
// (Higham 2005, "The scaling and squaring method for the matrix exponential
// revisited").
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr std::array<double, 4> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                          9.504178996162932e-1, 2.097847961257068e0};
constexpr double kTheta13 = 5.371920351148152e0;

// Low-degree approximants: U = A * sum_{odd} c_j A^{j-1}, V = sum_{even} c_j A^j.
template <std::size_t M>
void pade_low(const MatrixXd& a, const std::array<double, M>& c, MatrixXd& u, MatrixXd& v) {
  const auto n = a.rows();
  const MatrixXd ident = MatrixXd::Identity(n, n);
  const MatrixXd a2 = a * a;
  MatrixXd power = ident;
  MatrixXd odd = MatrixXd::Zero(n, n);
  v = MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j + 1 < M; j += 2) {
    v += c[j] * power;
    odd += c[j + 1] * power;
    power = power * a2;
  }
  u = a * odd;
}

void pade13(const MatrixXd& a, MatrixXd& u, MatrixXd& v) {
  const auto& b = kPade13;
  const auto n = a.rows();
  const MatrixXd ident = MatrixXd::Identity(n, n);
  const MatrixXd a2 = a * a;
  const MatrixXd a4 = a2 * a2;
  const MatrixXd a6 = a4 * a2;
  const MatrixXd inner_u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                           b[5] * a4 + b[3] * a2 + b[1] * ident;
  u = a * inner_u;
  v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
      b[0] * ident;
}

MatrixXd expm(const MatrixXd& a) {
  if (!a.allFinite()) throw InputError("matrix exponential of non-finite matrix");
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  MatrixXd u, v;
  int squarings = 0;
  if (norm1 <= kTheta[0]) {
    pade_low(a, kPade3, u, v);
  } else if (norm1 <= kTheta[1]) {
    pade_low(a, kPade5, u, v);
  } else if (norm1 <= kTheta[2]) {
    pade_low(a, kPade7, u, v);
  } else if (norm1 <= kTheta[3]) {
    pade_low(a, kPade9, u, v);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / kTheta13))));
    pade13(a / std::ldexp(1.0, squarings), u, v);
  }
  MatrixXd result = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

void check_duration(double h) {
  if (!(std::isfinite(h) && h >= 0.0)) throw InputError("duration must be finite and >= 0");
}

MatrixXd augmented(const MatrixXd& a, const Eigen::VectorXd& b) {
  const auto d = a.rows();
  if (a.cols() != d || b.size() != d) throw InputError("augmented block: dimension mismatch");
  MatrixXd m = MatrixXd::Zero(d + 1, d + 1);
  m.topLeftCorner(d, d) = a;
  m.topRightCorner(d, 1) = b;
  return m;
}

}  // namespace

MatrixXd transition(const MatrixXd& a, double h) {
  check_duration(h);
  if (a.rows() != a.cols()) throw InputError("transition: matrix must be square");
  return expm(a * h);
}

Eigen::VectorXd input_integral(const MatrixXd& a, const Eigen::VectorXd& b, double h) {
  return segment_maps(a, b, h).input;
}

SegmentMaps segment_maps(const MatrixXd& a, const Eigen::VectorXd& b, double h) {
  check_duration(h);
  if (!b.allFinite()) throw InputError("input vector must be finite");
  const auto d = a.rows();
  const MatrixXd e = expm(augmented(a, b) * h);
  return {e.topLeftCorner(d, d), e.topRightCorner(d, 1)};
}

EndpointMap endpoint_operator(const UncertainLTI& sys, const ParameterPoint& alpha,
                              const PWCGrid& grid, const Eigen::VectorXd& x0) {
  if (x0.size() != sys.dim_state()) throw InputError("initial state has the wrong length");
  const auto [a, b] = eval_system(sys, alpha);
  const int n = grid.segments();
  // The grid is uniform, so every segment shares the same pair of maps and
  // column k is e^{A (T - t_{k+1})} w: accumulate from the last segment back.
  const SegmentMaps maps = segment_maps(a, b, grid.step());
  EndpointMap out{transition(a, grid.horizon()) * x0, MatrixXd(sys.dim_state(), n)};
  Eigen::VectorXd col = maps.input;
  for (int k = n - 1; k >= 0; --k) {
    out.gain.col(k) = col;
    if (k > 0) col = maps.transition * col;
  }
  return out;
}

std::vector<TrajectorySample> simulate_trajectory(const UncertainLTI& sys,
                                                  const ParameterPoint& alpha,
                                                  const Eigen::VectorXd& x0,
                                                  const ControlParams& control,
                                                  int samples_per_segment) {
  if (samples_per_segment < 1) throw InputError("samples_per_segment must be positive");
  if (x0.size() != sys.dim_state()) throw InputError("initial state has the wrong length");
  const auto [a, b] = eval_system(sys, alpha);
  const PWCGrid& grid = control.grid;
  const double sub = grid.step() / samples_per_segment;
  const SegmentMaps maps = segment_maps(a, b, sub);

  std::vector<TrajectorySample> out;
  out.reserve(static_cast<std::size_t>(grid.segments()) * samples_per_segment + 1);
  Eigen::VectorXd x = x0;
  out.push_back({0.0, x});
  for (int k = 0; k < grid.segments(); ++k) {
    for (int j = 1; j <= samples_per_segment; ++j) {
      x = maps.transition * x + maps.input * control.theta[k];
      out.push_back({grid.boundary(k) + j * sub, x});
    }
  }
  out.back().t = grid.horizon();
  return out;
}

}  // namespace handsoff
