#include "handsoff/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "handsoff/errors.hpp"

namespace handsoff {

namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class PhaseResult { Optimal, Unbounded };

// Standard-form tableau for  min cost' y  s.t.  E y = f, y >= 0  with
// f >= 0 and one artificial column per row. Row `rows_` holds reduced
// costs; the last column holds the basic values (objective row: -value).
class DualTableau {
 public:
  DualTableau(const FiniteProgram& p, const LpOptions& opt) : opt_(opt) {
    rows_ = p.num_vars();
    real_ = p.num_rows();
    cols_ = real_ + rows_;
    t_ = Tableau::Zero(rows_ + 1, cols_ + 1);
    for (int i = 0; i < rows_; ++i) {
      const double sign = -p.objective[i] >= 0.0 ? 1.0 : -1.0;
      t_.row(i).head(real_) = sign * p.constraints.col(i).transpose();
      t_(i, real_ + i) = 1.0;
      t_(i, cols_) = -sign * p.objective[i];
    }
    basis_.resize(rows_);
    for (int i = 0; i < rows_; ++i) basis_[i] = real_ + i;
    cap_ = opt.max_iterations > 0 ? opt.max_iterations : 50 * (rows_ + real_) + 1000;
  }

  // Phase 1: minimize the sum of artificials.
  double phase_one() {
    t_.row(rows_).setZero();
    for (int i = 0; i < rows_; ++i) {
      t_.row(rows_).head(real_) -= t_.row(i).head(real_);
      t_(rows_, cols_) -= t_(i, cols_);
    }
    run();
    return -t_(rows_, cols_);
  }

  // Pivots basic artificials out where a real column allows it; the rest
  // sit on redundant rows at level zero.
  void purge_artificials() {
    for (int r = 0; r < rows_; ++r) {
      if (basis_[r] < real_) continue;
      for (int j = 0; j < real_; ++j) {
        if (std::abs(t_(r, j)) > opt_.pivot_tol) {
          pivot(r, j);
          break;
        }
      }
    }
  }

  PhaseResult phase_two(const Eigen::VectorXd& cost) {
    t_.row(rows_).setZero();
    t_.row(rows_).head(real_) = cost.transpose();
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] >= real_) continue;
      const double cb = cost[basis_[i]];
      if (cb != 0.0) t_.row(rows_) -= cb * t_.row(i);
    }
    return run();
  }

  const std::vector<int>& basis() const { return basis_; }
  int real_columns() const { return real_; }
  int iterations() const { return iterations_; }

 private:
  PhaseResult run() {
    bool bland = false;
    int stalled = 0;
    for (;;) {
      const int q = entering(bland);
      if (q < 0) return PhaseResult::Optimal;
      const int p = leaving(q, bland);
      if (p < 0) return PhaseResult::Unbounded;
      const bool degenerate = t_(p, cols_) <= opt_.pivot_tol;
      pivot(p, q);
      if (++iterations_ > cap_) throw SolverError("simplex iteration cap reached");
      stalled = degenerate ? stalled + 1 : 0;
      bland = stalled >= opt_.degenerate_switch;
    }
  }

  int entering(bool bland) const {
    int best = -1;
    double best_val = -opt_.optimality_tol;
    for (int j = 0; j < real_; ++j) {
      const double d = t_(rows_, j);
      if (d < best_val) {
        best = j;
        if (bland) break;
        best_val = d;
      }
    }
    return best;
  }

  int leaving(int q, bool bland) const {
    int best = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows_; ++i) {
      const double a = t_(i, q);
      if (a <= opt_.pivot_tol) continue;
      const double ratio = std::max(t_(i, cols_), 0.0) / a;
      if (best < 0 || ratio < best_ratio - 1e-12 * (1.0 + best_ratio)) {
        best = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + 1e-12 * (1.0 + best_ratio)) {
        const bool better = bland ? basis_[i] < basis_[best] : a > t_(best, q);
        if (better) best = i;
      }
    }
    return best;
  }

  void pivot(int p, int q) {
    t_.row(p) /= t_(p, q);
    for (int i = 0; i <= rows_; ++i) {
      if (i == p) continue;
      const double f = t_(i, q);
      if (f != 0.0) t_.row(i) -= f * t_.row(p);
    }
    basis_[p] = q;
  }

  const LpOptions& opt_;
  int rows_ = 0;
  int real_ = 0;
  int cols_ = 0;
  int cap_ = 0;
  int iterations_ = 0;
  Tableau t_;
  std::vector<int> basis_;
};

}  // namespace

double kkt_residual(const FiniteProgram& p, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double b_scale = 1.0 + p.rhs.cwiseAbs().maxCoeff();
  const double c_scale = 1.0 + (p.num_vars() ? p.objective.cwiseAbs().maxCoeff() : 0.0);
  const Eigen::VectorXd slack = p.rhs - p.constraints * x;
  const double primal = std::max(0.0, -slack.minCoeff()) / b_scale;
  const double stationarity =
      (p.constraints.transpose() * y + p.objective).cwiseAbs().maxCoeff() / c_scale;
  const double sign = std::max(0.0, -y.minCoeff()) / c_scale;
  const double complementarity = (y.array() * slack.array().abs()).maxCoeff() / (b_scale * c_scale);
  const double primal_value = p.objective.dot(x);
  const double gap = std::abs(primal_value + p.rhs.dot(y)) / (1.0 + std::abs(primal_value));
  return std::max({primal, stationarity, sign, complementarity, gap});
}

LpSolution solve_lp(const FiniteProgram& program, const LpOptions& options) {
  const int n = program.num_vars();
  const int m = program.num_rows();
  if (program.constraints.rows() != m || program.constraints.cols() != n) {
    throw InputError("linear program: constraint matrix shape mismatch");
  }
  if (!program.objective.allFinite() || !program.constraints.allFinite() ||
      !program.rhs.allFinite()) {
    throw InputError("linear program data must be finite");
  }
  if (m == 0) throw InputError("linear program needs at least one row");

  LpSolution out;
  DualTableau tableau(program, options);
  const double infeasibility = tableau.phase_one();
  const double c_scale = 1.0 + (n ? program.objective.cwiseAbs().maxCoeff() : 0.0);
  if (infeasibility > 1e-9 * c_scale) {
    out.status = LpStatus::DualInfeasible;
    out.iterations = tableau.iterations();
    return out;
  }
  tableau.purge_artificials();
  if (tableau.phase_two(program.rhs) == PhaseResult::Unbounded) {
    out.status = LpStatus::Infeasible;
    out.iterations = tableau.iterations();
    return out;
  }

  // Refactor the final basis from the original data rather than trusting the
  // accumulated tableau.
  const std::vector<int>& basis = tableau.basis();
  Eigen::MatrixXd b_mat = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd cost_b = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    const int j = basis[i];
    if (j < tableau.real_columns()) {
      b_mat.col(i) = program.constraints.row(j).transpose();
      cost_b[i] = program.rhs[j];
    } else {
      b_mat(j - tableau.real_columns(), i) = 1.0;
    }
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(b_mat);
  if (n > 0 && !lu.isInvertible()) throw SolverError("final simplex basis is singular");
  const Eigen::VectorXd y_basic = lu.solve(-program.objective);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < n; ++i) {
    if (basis[i] < tableau.real_columns()) y[basis[i]] = std::max(0.0, y_basic[i]);
  }
  out.x = b_mat.transpose().fullPivLu().solve(cost_b);
  out.multipliers = std::move(y);
  out.status = LpStatus::Optimal;
  out.value = program.objective.dot(out.x);
  out.kkt_residual = kkt_residual(program, out.x, out.multipliers);
  out.iterations = tableau.iterations();
  return out;
}

}  // namespace handsoff
