#include <doctest.h>

#include "handsoff/analysis.hpp"
#include "handsoff/errors.hpp"
#include "oracles.hpp"

using namespace handsoff;

TEST_CASE("sampling helpers") {
  const ParameterBox box(Eigen::Vector2d(-1.0, 2.0), Eigen::Vector2d(1.0, 3.0));
  const auto a = sample_box(box, 500, 9);
  const auto b = sample_box(box, 500, 9);
  REQUIRE(a.size() == 500);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(box.contains(a[i]));
    CHECK(a[i].values == b[i].values);
  }
  const auto grid = alpha_grid(box, 5);
  CHECK(grid.size() == 25);
  CHECK(grid.front().values == box.lower());
  CHECK(grid.back().values == box.upper());
  CHECK(alpha_grid(box, 1)[0].values == box.center().values);
}

TEST_CASE("scenario_solve") {
  SUBCASE("single scenario in a degenerate box") {
    const RobustProblem p = oracle::integrator(1.0, 1, -1.0, -1.0, 0.5);
    const ScenarioRun run = scenario_solve(p, 1, 4);
    REQUIRE(run.solution.optimal());
    CHECK(run.solution.value == doctest::Approx(solve_inner(p, run.tuple).value));
    CHECK(run.solution.value == doctest::Approx(0.5));
  }
  SUBCASE("never above the robust value") {
    const RobustProblem smd = oracle::smd_problem(10);
    AnnealerConfig cfg;
    cfg.max_iters = 1000;
    const SipResult sip = sip_solve(smd, cfg);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      for (int count : {20, 200}) {
        const ScenarioRun run = scenario_solve(smd, count, seed);
        REQUIRE(run.solution.optimal());
        CHECK(run.solution.value <= sip.value + 1e-9);
      }
    }
  }
  SUBCASE("invalid count") {
    CHECK_THROWS_AS(scenario_solve(oracle::smd_problem(4), 0, 0), InputError);
  }
}

TEST_CASE("verify_robust") {
  const RobustProblem smd = oracle::smd_problem(10);
  SUBCASE("no effective constraint, no violations") {
    const RobustProblem loose(smd.system(), smd.box(), smd.grid(),
                              TerminalSet(Eigen::Matrix2d::Identity(), Eigen::Vector2d(1e9, 1e9)),
                              smd.x0());
    const VerificationReport r = verify_robust(loose, ControlParams::zero(loose.grid()), 2000, 1, true);
    CHECK(r.samples == 2008);
    CHECK(r.violations == 0);
    CHECK(r.worst_margin <= r.tolerance);
    CHECK(r.violating_alphas.empty());
  }
  SUBCASE("uncontrolled SMD violates, margins match simulation") {
    const ControlParams zero = ControlParams::zero(smd.grid());
    const VerificationReport r = verify_robust(smd, zero, 2000, 2, true);
    CHECK(r.violations > 0);
    CHECK(r.worst_margin > 0.0);
    CHECK(r.violating_alphas.size() == std::min<std::size_t>(r.violations, kMaxReportedViolations));
    const auto traj = simulate_trajectory(smd.system(), r.worst_alpha, smd.x0(), zero, 4);
    CHECK(std::abs(smd.terminal().margin(traj.back().x) - r.worst_margin) <= 1e-8);
    for (const auto& a : r.violating_alphas) {
      const auto t = simulate_trajectory(smd.system(), a, smd.x0(), zero, 4);
      CHECK(smd.terminal().margin(t.back().x) > r.tolerance);
    }
  }
  SUBCASE("inadmissible control is refused") {
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(10);
    theta[3] = 1.5;
    CHECK_THROWS_AS(verify_robust(smd, ControlParams(theta, smd.grid()), 10, 0, false), InputError);
  }
  SUBCASE("results do not depend on the worker count") {
    const ControlParams zero = ControlParams::zero(smd.grid());
    setenv("HANDSOFF_THREADS", "1", 1);
    const VerificationReport one = verify_robust(smd, zero, 3000, 7, false);
    setenv("HANDSOFF_THREADS", "4", 1);
    const VerificationReport four = verify_robust(smd, zero, 3000, 7, false);
    unsetenv("HANDSOFF_THREADS");
    CHECK(one.violations == four.violations);
    CHECK(one.worst_margin == four.worst_margin);
    CHECK(one.worst_alpha.values == four.worst_alpha.values);
  }
}

TEST_CASE("sparsity_report") {
  const PWCGrid grid(4.0, 8);
  Eigen::VectorXd ternary(8);
  ternary << 1, 0, -1, 0, 0, 1, 0, 0;
  const SparsityReport t = sparsity_report(ControlParams(ternary, grid));
  CHECK(t.bang_off_bang_score == 1.0);
  CHECK(t.l0 == doctest::Approx(t.l1));
  CHECK(t.support_segments == std::vector<int>{0, 2, 5});

  Eigen::VectorXd half = Eigen::VectorXd::Zero(8);
  half[0] = 0.5;
  const SparsityReport h = sparsity_report(ControlParams(half, grid));
  CHECK(h.bang_off_bang_score == doctest::Approx(7.0 / 8.0));
  CHECK(h.l1 == doctest::Approx(0.25));
  CHECK(h.l0 == doctest::Approx(0.5));
  CHECK(h.l1 < h.l0);
}

TEST_CASE("brute_force_l0") {
  SUBCASE("one segment needing theta >= 0.5") {
    const RobustProblem p = oracle::integrator(1.0, 1, -1.0, -1.0, 0.5);
    const auto grid = alpha_grid(p.box(), 1);
    const L0Result r = brute_force_l0(p, grid);
    CHECK(r.min_l0 == doctest::Approx(1.0));
    REQUIRE(r.witness);
    CHECK(r.witness->theta[0] == 1.0);
    const InnerSolution l1 = solve_inner(p, ScenarioTuple{grid});
    CHECK(l0_measure(*l1.theta) == doctest::Approx(r.min_l0));
  }
  SUBCASE("lexicographic tie-break") {
    const RobustProblem p = oracle::integrator(2.0, 2, 0.0, -1.0, -1.0);
    const L0Result r = brute_force_l0(p, alpha_grid(p.box(), 1));
    REQUIRE(r.witness);
    CHECK(r.witness->theta == Eigen::Vector2d(0.0, 1.0));
    CHECK(r.min_l0 == doctest::Approx(1.0));
  }
  SUBCASE("infeasible instance") {
    const RobustProblem p = oracle::integrator(1.0, 2, 0.0, -1.0, -2.0);
    const L0Result r = brute_force_l0(p, alpha_grid(p.box(), 1));
    CHECK(std::isinf(r.min_l0));
    CHECK_FALSE(r.witness);
  }
  SUBCASE("budget") {
    CHECK_THROWS_AS(brute_force_l0(oracle::smd_problem(13), alpha_grid(oracle::smd_problem(13).box(), 2)),
                    BudgetError);
  }
  SUBCASE("reduced SMD against the robust L1 control") {
    const RobustProblem smd = oracle::smd_problem(6);
    const auto grid = alpha_grid(smd.box(), 3);
    const L0Result r = brute_force_l0(smd, grid);
    REQUIRE(r.witness);
    for (const auto& a : grid) CHECK(terminal_margin(smd, a, *r.witness) <= 1e-9);
    const SipResult sip = sip_solve(smd, AnnealerConfig{});
    REQUIRE(sip.theta_star);
    CHECK(r.min_l0 >= l0_measure(*sip.theta_star) - smd.grid().step() - 1e-12);
  }
}

TEST_CASE("compare_report") {
  const RobustProblem smd = oracle::smd_problem(10);
  AnnealerConfig cfg;
  cfg.max_iters = 800;
  CompareOptions opt;
  opt.verify_samples = 500;
  SUBCASE("empty counts give the SIP row only") {
    const auto rows = compare_report(smd, cfg, opt);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].method == "sip");
    CHECK(rows[0].violations == 0);
  }
  SUBCASE("scenario rows stay below the SIP row and are reproducible") {
    opt.scenario_counts = {200, 1000};
    const auto rows = compare_report(smd, cfg, opt);
    const auto again = compare_report(smd, cfg, opt);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].method == "scenario");
      CHECK(rows[i].value <= rows[0].value + 1e-9);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].value == again[i].value);
      CHECK(rows[i].violations == again[i].violations);
    }
  }
}
