#include "handsoff/sip.hpp"

#include <cmath>
#include <random>

#include "handsoff/errors.hpp"

namespace handsoff {

void AnnealerConfig::validate() const {
  if (max_iters < 1) throw InputError("annealer.max_iters must be positive");
  if (patience < 1) throw InputError("annealer.patience must be positive");
  if (!(initial_temperature > 0.0 && std::isfinite(initial_temperature))) {
    throw InputError("annealer.initial_temperature must be positive");
  }
  if (!(cooling > 0.0 && cooling < 1.0)) throw InputError("annealer.cooling must lie in (0, 1)");
  if (!(proposal_scale > 0.0 && std::isfinite(proposal_scale))) {
    throw InputError("annealer.proposal_scale must be positive");
  }
}

std::string to_string(SipStatus status) {
  switch (status) {
    case SipStatus::Solved:
      return "solved";
    case SipStatus::Infeasible:
      return "infeasible";
    case SipStatus::BudgetExhausted:
      return "budget_exhausted";
  }
  return "unknown";
}

SimulatedAnnealing::SimulatedAnnealing(AnnealerConfig config) : config_(config) {
  config_.validate();
}

SearchResult SimulatedAnnealing::maximize(const TupleObjective& objective,
                                          const ParameterBox& box, ScenarioTuple start) const {
  SearchResult out;
  std::mt19937_64 rng(config_.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> slot_pick(0, std::max(0, start.size() - 1));

  const Eigen::VectorXd step = config_.proposal_scale * box.width();
  const double improve_tol = 1e-9;

  TupleEvaluation current_eval = objective(start);
  out.evaluations = 1;
  out.best = start;
  if (current_eval.infeasible) {
    out.status = SearchStatus::Infeasible;
    return out;
  }
  ScenarioTuple current = std::move(start);
  double current_value = current_eval.value;
  out.best_value = current_value;
  out.trace.push_back({0, current_value});

  double temperature = config_.initial_temperature;
  int since_improvement = 0;
  for (int it = 1; it <= config_.max_iters; ++it) {
    out.iterations = it;
    ScenarioTuple candidate = current;
    ParameterPoint& moved = candidate.points[slot_pick(rng)];
    for (int i = 0; i < moved.size(); ++i) moved.values[i] += step[i] * normal(rng);
    moved = box.clip(moved);

    const TupleEvaluation eval = objective(candidate);
    ++out.evaluations;
    if (eval.infeasible) {
      out.status = SearchStatus::Infeasible;
      out.best = std::move(candidate);
      return out;
    }
    const double delta = eval.value - current_value;
    if (delta >= 0.0 || unit(rng) < std::exp(delta / temperature)) {
      current = candidate;
      current_value = eval.value;
    }
    if (eval.value > out.best_value) {
      if (eval.value > out.best_value + improve_tol * (1.0 + std::abs(out.best_value))) {
        since_improvement = 0;
      } else {
        ++since_improvement;
      }
      out.best_value = eval.value;
      out.best = std::move(candidate);
      out.trace.push_back({it, out.best_value});
    } else {
      ++since_improvement;
    }
    if (since_improvement >= config_.patience) {
      out.status = SearchStatus::Converged;
      return out;
    }
    temperature *= config_.cooling;
  }
  out.status = SearchStatus::BudgetExhausted;
  return out;
}

ScenarioTuple initial_tuple(const ParameterBox& box, int delta) {
  if (delta < 1) throw InputError("tuple length must be positive");
  ScenarioTuple tuple;
  tuple.points.assign(static_cast<std::size_t>(delta), box.center());
  if (box.dim() < 30 && (std::size_t{1} << box.dim()) <= static_cast<std::size_t>(delta)) {
    const auto vertices = box.vertices();
    std::copy(vertices.begin(), vertices.end(), tuple.points.begin());
  }
  return tuple;
}

namespace {

// Inner objective with per-slot caching of scenario rows: annealing moves
// one slot at a time, so only that slot's endpoint map is recomputed.
class CachedInnerObjective {
 public:
  CachedInnerObjective(const RobustProblem& problem, int delta)
      : problem_(problem), points_(delta), rows_(delta), valid_(delta, false) {}

  TupleEvaluation operator()(const ScenarioTuple& tuple) {
    for (int i = 0; i < tuple.size(); ++i) {
      const auto& alpha = tuple.points[i];
      if (!valid_[i] || points_[i].values != alpha.values) {
        rows_[i] = scenario_rows(problem_, alpha);
        points_[i] = alpha;
        valid_[i] = true;
      }
    }
    const InnerSolution sol = solve_program(problem_.grid(), assemble_lp(problem_.grid(), rows_));
    return {sol.value, !sol.optimal()};
  }

 private:
  const RobustProblem& problem_;
  std::vector<ParameterPoint> points_;
  std::vector<ScenarioRows> rows_;
  std::vector<bool> valid_;
};

}  // namespace

SipResult sip_solve(const RobustProblem& problem, const TupleMaximizer& optimizer, int delta) {
  if (delta < 1 || delta > kMaxDelta) {
    throw InputError("delta must lie in [1, " + std::to_string(kMaxDelta) + "]");
  }
  CachedInnerObjective cached(problem, delta);
  const TupleObjective objective = [&cached](const ScenarioTuple& t) { return cached(t); };
  SearchResult search = optimizer.maximize(objective, problem.box(), initial_tuple(problem.box(), delta));

  SipResult out;
  out.worst_tuple = std::move(search.best);
  out.trace = std::move(search.trace);
  out.iterations = search.iterations;
  out.evaluations = search.evaluations;
  out.exactness_guaranteed = delta >= problem.grid().segments();
  if (search.status == SearchStatus::Infeasible) {
    out.status = SipStatus::Infeasible;
    return out;
  }
  const InnerSolution recovered = solve_inner(problem, out.worst_tuple);
  if (!recovered.optimal()) throw SolverError("inner program infeasible at the recovered tuple");
  out.value = recovered.value;
  out.theta_star = recovered.theta;
  out.status =
      search.status == SearchStatus::Converged ? SipStatus::Solved : SipStatus::BudgetExhausted;
  return out;
}

SipResult sip_solve(const RobustProblem& problem, const AnnealerConfig& config,
                    std::optional<int> delta) {
  const SimulatedAnnealing annealer(config);
  return sip_solve(problem, annealer, delta.value_or(problem.grid().segments()));
}

std::vector<ValuePoint> value_function(const RobustProblem& problem, const AnnealerConfig& config,
                                       const std::vector<Eigen::VectorXd>& x0_list) {
  std::vector<ValuePoint> out;
  out.reserve(x0_list.size());
  for (const auto& x0 : x0_list) {
    ValuePoint entry{x0, std::numeric_limits<double>::quiet_NaN(), SipStatus::BudgetExhausted, {}};
    try {
      const RobustProblem shifted(problem.system(), problem.box(), problem.grid(),
                                  problem.terminal(), x0);
      const SipResult r = sip_solve(shifted, config);
      entry.status = r.status;
      entry.value = r.status == SipStatus::Infeasible
                        ? std::numeric_limits<double>::infinity()
                        : r.value;
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace handsoff
