#include <doctest.h>

#include <algorithm>
#include <random>

#include "handsoff/errors.hpp"
#include "oracles.hpp"

using namespace handsoff;

namespace {

ScenarioTuple single(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return ScenarioTuple{{ParameterPoint{v}}};
}

}  // namespace

TEST_CASE("solve_lp on small programs") {
  SUBCASE("two-variable program with a known vertex") {
    // min -x - y  s.t.  x + 2y <= 4, 3x + y <= 6, x >= 0, y >= 0  ->  (1.6, 1.2)
    FiniteProgram p;
    p.objective = Eigen::Vector2d(-1.0, -1.0);
    p.constraints.resize(4, 2);
    p.constraints << 1, 2, 3, 1, -1, 0, 0, -1;
    p.rhs = Eigen::Vector4d(4, 6, 0, 0);
    const LpSolution s = solve_lp(p);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.x[0] == doctest::Approx(1.6));
    CHECK(s.x[1] == doctest::Approx(1.2));
    CHECK(s.value == doctest::Approx(-2.8));
    CHECK(s.kkt_residual <= 1e-12);
    CHECK(kkt_residual(p, s.x, s.multipliers) == doctest::Approx(s.kkt_residual));
  }
  SUBCASE("infeasible program") {
    FiniteProgram p;
    p.objective = Eigen::VectorXd::Ones(1);
    p.constraints.resize(2, 1);
    p.constraints << 1, -1;
    p.rhs = Eigen::Vector2d(-1.0, -1.0);  // x <= -1 and x >= 1
    CHECK(solve_lp(p).status == LpStatus::Infeasible);
  }
  SUBCASE("unbounded program") {
    FiniteProgram p;
    p.objective = Eigen::VectorXd::Ones(1);
    p.constraints = Eigen::MatrixXd::Ones(1, 1);
    p.rhs = Eigen::VectorXd::Ones(1);
    CHECK(solve_lp(p).status == LpStatus::DualInfeasible);
  }
  SUBCASE("highly degenerate vertex") {
    // 40 distinct supporting planes through the optimum (0, 0) of min x + y
    // over the positive quadrant.
    FiniteProgram p;
    p.objective = Eigen::Vector2d(1.0, 1.0);
    p.constraints.resize(42, 2);
    p.rhs = Eigen::VectorXd::Zero(42);
    for (int i = 0; i < 40; ++i) {
      const double angle = 0.05 + 1.47 * i / 39.0;
      p.constraints.row(i) << -std::cos(angle), -std::sin(angle);
    }
    p.constraints.row(40) << -1, 0;
    p.constraints.row(41) << 0, -1;
    const LpSolution s = solve_lp(p);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(std::abs(s.value) < 1e-12);
    CHECK(s.kkt_residual <= 1e-10);
  }
  SUBCASE("malformed data is rejected") {
    FiniteProgram p;
    p.objective = Eigen::Vector2d(1.0, 1.0);
    p.constraints = Eigen::MatrixXd::Ones(2, 3);
    p.rhs = Eigen::Vector2d::Ones();
    CHECK_THROWS_AS(solve_lp(p), InputError);
  }
}

TEST_CASE("build_lp layout") {
  const RobustProblem smd = oracle::smd_problem(6);
  ScenarioTuple t;
  for (int i = 0; i < 3; ++i) t.points.push_back({Eigen::Vector3d::Constant(-0.1 + 0.1 * i)});
  const FiniteProgram lp = build_lp(smd, t);
  CHECK(lp.num_vars() == 12);
  CHECK(lp.num_rows() == 4 * 6 + 3 * 2);
  CHECK(lp.objective.head(6).isZero());
  CHECK((lp.objective.tail(6).array() == smd.grid().step()).all());
  const ScenarioRows r = scenario_rows(smd, t.points[1]);
  CHECK(lp.constraints.block(24 + 2, 0, 2, 6) == r.rows);
  CHECK(lp.constraints.block(24, 6, 6, 6).isZero());
  CHECK(lp.rhs.segment(24 + 2, 2) == r.rhs);
  CHECK_THROWS_AS(build_lp(smd, ScenarioTuple{}), InputError);
}

TEST_CASE("solve_inner on hand-checkable instances") {
  SUBCASE("slack rows leave the zero control optimal") {
    const RobustProblem p = oracle::integrator(1.0, 1, 0.0, 1.0, 5.0);
    const InnerSolution s = solve_inner(p, single(0.0));
    REQUIRE(s.optimal());
    CHECK(s.value == doctest::Approx(0.0));
    CHECK(std::abs(s.theta->theta[0]) < 1e-12);
  }
  SUBCASE("integrator needing theta >= 0.5") {
    const RobustProblem p = oracle::integrator(1.0, 1, -1.0, -1.0, 0.5);
    const ScenarioTuple t = single(0.0);
    const double grid = oracle::grid_search_l1(oracle::stack_rows(p, t), 1.0, 1e-4, false);
    CHECK(grid == doctest::Approx(0.5).epsilon(1e-9));
    const InnerSolution s = solve_inner(p, t);
    REQUIRE(s.optimal());
    CHECK(std::abs(s.value - grid) <= 1e-4);
    CHECK(s.theta->theta[0] == doctest::Approx(0.5));
    CHECK(s.kkt_residual <= 1e-8);
    CHECK(std::abs(s.value - l1_cost(*s.theta)) <= 1e-9);
  }
  SUBCASE("two-segment integrator reaching x(2) >= 1") {
    const RobustProblem p = oracle::integrator(2.0, 2, 0.0, -1.0, -1.0);
    const ScenarioTuple t = single(0.0);
    const double grid = oracle::grid_search_l1(oracle::stack_rows(p, t), 1.0, 1e-3, false);
    CHECK(grid == doctest::Approx(1.0).epsilon(1e-9));
    const InnerSolution s = solve_inner(p, t);
    REQUIRE(s.optimal());
    CHECK(s.value == doctest::Approx(1.0));
    CHECK(s.theta->theta.sum() == doctest::Approx(1.0));
    CHECK((s.theta->theta.array() >= -1e-12).all());
  }
  SUBCASE("unreachable target is infeasible") {
    const RobustProblem p = oracle::integrator(1.0, 1, 0.0, -1.0, -2.0);
    const InnerSolution s = solve_inner(p, single(0.0));
    CHECK(s.status == InnerStatus::Infeasible);
    CHECK(std::isinf(s.value));
    CHECK_FALSE(s.theta.has_value());
  }
  SUBCASE("duplicated tuple points change nothing") {
    const RobustProblem smd = oracle::smd_problem(8);
    const ParameterPoint a{Eigen::Vector3d(-0.1, -0.1, -0.1)};
    const ParameterPoint b{Eigen::Vector3d(0.1, 0.05, 0.0)};
    const InnerSolution once = solve_inner(smd, ScenarioTuple{{a, b}});
    const InnerSolution twice = solve_inner(smd, ScenarioTuple{{a, b, a, a, b}});
    REQUIRE(once.optimal());
    REQUIRE(twice.optimal());
    CHECK(twice.value == doctest::Approx(once.value).epsilon(1e-12));
  }
}

TEST_CASE("inner value is monotone in the scenario set and order-free") {
  const RobustProblem smd = oracle::smd_problem(10);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (int trial = 0; trial < 15; ++trial) {
    ScenarioTuple t;
    double prev = -1.0;
    for (int size = 1; size <= 8; ++size) {
      t.points.push_back({Eigen::Vector3d(u(rng), u(rng), u(rng))});
      const InnerSolution s = solve_inner(smd, t);
      REQUIRE(s.optimal());
      CHECK(s.value >= prev - 1e-12);
      CHECK(s.kkt_residual <= 1e-8);
      prev = s.value;
    }
    ScenarioTuple shuffled = t;
    std::shuffle(shuffled.points.begin(), shuffled.points.end(), rng);
    CHECK(solve_inner(smd, shuffled).value == doctest::Approx(prev).epsilon(1e-10));
  }
}

TEST_CASE("inner optimum matches grid search on random small instances") {
  std::mt19937_64 rng(101);
  int checked = 0;
  for (int attempt = 0; checked < 12 && attempt < 500; ++attempt) {
    oracle::InstanceShape shape;
    shape.dim_state = 1 + attempt % 2;
    shape.segments = 1 + attempt % 2;
    shape.terminal_rows = 1 + (attempt / 2) % 2;
    std::optional<RobustProblem> p;
    if (!oracle::random_instance(rng, shape, p)) continue;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ScenarioTuple t;
    for (int i = 0; i < 3; ++i) {
      Eigen::VectorXd v(1);
      v[0] = p->box().lower()[0] + u(rng) * p->box().width()[0];
      t.points.push_back({v});
    }
    const InnerSolution s = solve_inner(*p, t);
    REQUIRE(s.optimal());
    const double grid =
        oracle::grid_search_l1(oracle::stack_rows(*p, t), p->grid().step(), 1e-3, false);
    CHECK(std::abs(s.value - grid) <= 2e-3);
    CHECK(s.kkt_residual <= 1e-8);
    ++checked;
  }
  CHECK(checked == 12);
}
