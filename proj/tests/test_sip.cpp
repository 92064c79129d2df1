#include <doctest.h>

#include <random>

#include "handsoff/analysis.hpp"
#include "handsoff/errors.hpp"
#include "oracles.hpp"

using namespace handsoff;

namespace {

// x' = alpha x + u, x(0) = 1, T = 1, N = 1, alpha in [0, 0.5], x(1) <= 0.5.
RobustProblem scalar_growth() {
  const UncertainLTI sys(Eigen::MatrixXd::Zero(1, 1), {Eigen::MatrixXd::Ones(1, 1)},
                         Eigen::VectorXd::Ones(1), {Eigen::VectorXd::Zero(1)});
  return RobustProblem(sys, ParameterBox(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 0.5)),
                       PWCGrid(1.0, 1),
                       TerminalSet(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Constant(1, 0.5)),
                       Eigen::VectorXd::Ones(1));
}

// Grid over (alpha, theta) with the closed-form endpoint
// x(1) = e^a + theta (e^a - 1) / a.
double scalar_growth_oracle(double step) {
  double worst = 0.0;
  for (double a = 0.0; a <= 0.5 + 1e-12; a += step) {
    const double gain = a == 0.0 ? 1.0 : (std::exp(a) - 1.0) / a;
    double best = std::numeric_limits<double>::infinity();
    for (double th = -1.0; th <= 1.0 + 1e-12; th += step) {
      if (std::exp(a) + th * gain <= 0.5) best = std::min(best, std::abs(th));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

class GridMaximizer final : public TupleMaximizer {
 public:
  explicit GridMaximizer(int points) : points_(points) {}

  SearchResult maximize(const TupleObjective& objective, const ParameterBox& box,
                        ScenarioTuple start) const override {
    SearchResult out;
    out.best = start;
    out.best_value = -std::numeric_limits<double>::infinity();
    for (const auto& a : alpha_grid(box, points_)) {
      ScenarioTuple t;
      t.points.assign(start.points.size(), a);
      const TupleEvaluation e = objective(t);
      ++out.evaluations;
      if (e.infeasible) {
        out.status = SearchStatus::Infeasible;
        out.best = t;
        return out;
      }
      if (e.value > out.best_value) {
        out.best_value = e.value;
        out.best = t;
        out.trace.push_back({out.evaluations, e.value});
      }
    }
    out.status = SearchStatus::Converged;
    return out;
  }

 private:
  int points_;
};

}  // namespace

TEST_CASE("annealer config validation") {
  AnnealerConfig c;
  CHECK_NOTHROW(c.validate());
  c.cooling = 1.0;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = {};
  c.patience = 0;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = {};
  c.proposal_scale = -0.1;
  CHECK_THROWS_AS(c.validate(), InputError);
}

TEST_CASE("initial tuple places vertices then the center") {
  const ParameterBox box(Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1));
  const ScenarioTuple t = initial_tuple(box, 6);
  REQUIRE(t.size() == 6);
  CHECK(t.points[0].values == Eigen::Vector2d(-1, -1));
  CHECK(t.points[3].values == Eigen::Vector2d(1, 1));
  CHECK(t.points[4].values == Eigen::Vector2d::Zero());
  CHECK(t.points[5].values == Eigen::Vector2d::Zero());
  const ScenarioTuple small = initial_tuple(box, 3);
  for (const auto& p : small.points) CHECK(p.values == Eigen::Vector2d::Zero());
}

TEST_CASE("degenerate box collapses to one inner solve") {
  const RobustProblem p = oracle::integrator(1.0, 1, -1.0, -1.0, 0.5);
  const SipResult r = sip_solve(p, AnnealerConfig{});
  REQUIRE(r.status == SipStatus::Solved);
  const InnerSolution direct = solve_inner(p, r.worst_tuple);
  CHECK(r.value == doctest::Approx(direct.value).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(0.5));
}

TEST_CASE("scalar growth example: worst parameter at the upper endpoint") {
  const double grid_value = scalar_growth_oracle(1e-3);
  const double exact = (std::exp(0.5) - 0.5) * 0.5 / (std::exp(0.5) - 1.0);
  CHECK(grid_value == doctest::Approx(exact).epsilon(2e-3));
  CHECK(exact == doctest::Approx(0.885).epsilon(1e-3));

  const SipResult r = sip_solve(scalar_growth(), AnnealerConfig{});
  REQUIRE(r.status == SipStatus::Solved);
  CHECK(r.exactness_guaranteed);
  CHECK(r.worst_tuple.points[0].values[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(r.value - exact) <= 1e-9);
  CHECK(std::abs(r.value - grid_value) <= 2e-3);
  CHECK(r.theta_star->theta[0] == doctest::Approx(-exact).epsilon(1e-9));
}

TEST_CASE("annealing matches exhaustive tuple maximization (step = width / 20)") {
  std::mt19937_64 rng(33);
  int checked = 0;
  for (int attempt = 0; checked < 6 && attempt < 400; ++attempt) {
    oracle::InstanceShape shape;
    shape.dim_state = 1 + attempt % 2;
    shape.segments = 1 + checked % 3;
    shape.terminal_rows = 1 + (attempt / 2) % 2;
    std::optional<RobustProblem> p;
    if (!oracle::random_instance(rng, shape, p)) continue;
    const int delta = shape.segments;
    const double grid_max = oracle::tuple_grid_max(*p, delta, 21);
    AnnealerConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(attempt);
    const SipResult r = sip_solve(*p, cfg);
    REQUIRE(r.status != SipStatus::Infeasible);
    CHECK(std::abs(r.value - grid_max) <= 1e-3);
    ++checked;
  }
  CHECK(checked == 6);
}

TEST_CASE("trace, determinism and relaxation bounds on the SMD benchmark") {
  const RobustProblem smd = oracle::smd_problem(10);
  AnnealerConfig cfg;
  cfg.seed = 42;
  cfg.max_iters = 1500;
  const SipResult a = sip_solve(smd, cfg);
  const SipResult b = sip_solve(smd, cfg);
  REQUIRE(a.status != SipStatus::Infeasible);
  CHECK(a.trace == b.trace);
  CHECK(a.value == b.value);
  CHECK(a.theta_star->theta == b.theta_star->theta);
  for (std::size_t i = 1; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].best_value >= a.trace[i - 1].best_value);
    CHECK(a.trace[i].iteration > a.trace[i - 1].iteration);
  }
  CHECK(a.value == doctest::Approx(solve_inner(smd, a.worst_tuple).value).epsilon(1e-12));

  // Any tuple is a relaxation of the robust program.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (int trial = 0; trial < 20; ++trial) {
    ScenarioTuple t;
    for (int i = 0; i < 10; ++i) t.points.push_back({Eigen::Vector3d(u(rng), u(rng), u(rng))});
    CHECK(solve_inner(smd, t).value <= a.value + 1e-9);
  }
  // A control robust on a dense alpha grid cannot be cheaper than the
  // robust value (up to grid resolution).
  const InnerSolution dense = solve_inner(smd, ScenarioTuple{alpha_grid(smd.box(), 5)});
  REQUIRE(dense.optimal());
  CHECK(l1_cost(*dense.theta) >= a.value - 1e-3);

  // Robust feasibility of the recovered control over many realizations.
  const VerificationReport v = verify_robust(smd, *a.theta_star, 10000, 3, true);
  if (v.violations > 0) {
    MESSAGE("robust control violated at " << v.violations << " samples, worst " << v.worst_margin);
  }
  CHECK(v.violations == 0);
}

TEST_CASE("infeasible relaxation short-circuits") {
  // x' = u from 0 must reach x(1) >= 2: impossible with |u| <= 1.
  const RobustProblem p = oracle::integrator(1.0, 1, 0.0, -1.0, -2.0);
  const SipResult r = sip_solve(p, AnnealerConfig{});
  CHECK(r.status == SipStatus::Infeasible);
  CHECK(std::isinf(r.value));
  CHECK_FALSE(r.theta_star.has_value());
  CHECK(r.iterations == 0);
}

TEST_CASE("short tuples are flagged as inexact") {
  const RobustProblem smd = oracle::smd_problem(6);
  AnnealerConfig cfg;
  cfg.max_iters = 200;
  const SipResult r = sip_solve(smd, cfg, 2);
  CHECK_FALSE(r.exactness_guaranteed);
  CHECK(r.worst_tuple.size() == 2);
  CHECK_THROWS_AS(sip_solve(smd, cfg, 0), InputError);
  CHECK_THROWS_AS(sip_solve(smd, cfg, kMaxDelta + 1), InputError);
}

TEST_CASE("alternative maximizers plug into sip_solve") {
  const RobustProblem p = scalar_growth();
  const SipResult r = sip_solve(p, GridMaximizer(11), 1);
  REQUIRE(r.status == SipStatus::Solved);
  CHECK(r.worst_tuple.points[0].values[0] == doctest::Approx(0.5));
  CHECK(r.value == doctest::Approx(sip_solve(p, AnnealerConfig{}).value).epsilon(1e-12));
}

TEST_CASE("value_function") {
  const RobustProblem smd = oracle::smd_problem(8);
  AnnealerConfig cfg;
  cfg.max_iters = 600;
  cfg.patience = 200;
  // From the origin the free response stays at zero, well inside C.
  const auto values =
      value_function(smd, cfg, {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(-1.0, -1.0),
                                Eigen::Vector2d(-1.0, -1.0)});
  REQUIRE(values.size() == 3);
  CHECK(values[0].value == 0.0);
  CHECK(values[1].value > 0.0);
  CHECK(values[1].value == values[2].value);

  // Shrinking the box can only relax the robust program.
  const RobustProblem shrunk(smd.system(),
                             ParameterBox(Eigen::Vector3d::Constant(-0.05),
                                          Eigen::Vector3d::Constant(0.05)),
                             smd.grid(), smd.terminal(), smd.x0());
  const double v_full = sip_solve(smd, cfg).value;
  const double v_shrunk = sip_solve(shrunk, cfg).value;
  CHECK(v_shrunk <= v_full + 1e-9);

  // Unreachable targets report +inf.
  const RobustProblem integ = oracle::integrator(1.0, 1, 0.0, -1.0, -2.0);
  const auto inf = value_function(integ, cfg, {Eigen::VectorXd::Zero(1)});
  CHECK(std::isinf(inf[0].value));
  CHECK(inf[0].status == SipStatus::Infeasible);
}
