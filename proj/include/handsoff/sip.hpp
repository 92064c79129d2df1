#pragma once

// Outer problem: maximize p -> g(x0; p) over P^delta. With delta equal to
// the number of control coefficients the maximum equals the value of the
// full semi-infinite program, and the inner minimizer at the maximizing
// tuple is a robust control.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "handsoff/inner.hpp"

namespace handsoff {

struct AnnealerConfig {
  int max_iters = 5000;
  int patience = 500;
  double initial_temperature = 1.0;
  double cooling = 0.995;
  double proposal_scale = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const AnnealerConfig&) const = default;
};

struct TracePoint {
  int iteration;
  double best_value;

  bool operator==(const TracePoint&) const = default;
};

struct TupleEvaluation {
  double value;
  bool infeasible;
};

using TupleObjective = std::function<TupleEvaluation(const ScenarioTuple&)>;

enum class SearchStatus { Converged, BudgetExhausted, Infeasible };

struct SearchResult {
  SearchStatus status = SearchStatus::BudgetExhausted;
  ScenarioTuple best;
  double best_value = 0.0;
  std::vector<TracePoint> trace;  // (0, start value) then one entry per improvement
  int iterations = 0;
  int evaluations = 0;
};

/// Global maximizer over P^delta. Implementations must stop as soon as the
/// objective reports an infeasible tuple and return that tuple as `best`.
class TupleMaximizer {
 public:
  virtual ~TupleMaximizer() = default;
  virtual SearchResult maximize(const TupleObjective& objective, const ParameterBox& box,
                                ScenarioTuple start) const = 0;
};

/// Metropolis chain with geometric cooling. Each step moves one tuple slot
/// by a Gaussian step of standard deviation proposal_scale * box width,
/// projected back onto the box. Stops after `patience` steps without an
/// improvement of the incumbent, or after max_iters.
class SimulatedAnnealing final : public TupleMaximizer {
 public:
  explicit SimulatedAnnealing(AnnealerConfig config);

  SearchResult maximize(const TupleObjective& objective, const ParameterBox& box,
                        ScenarioTuple start) const override;

 private:
  AnnealerConfig config_;
};

enum class SipStatus { Solved, Infeasible, BudgetExhausted };

std::string to_string(SipStatus status);

struct SipResult {
  SipStatus status = SipStatus::BudgetExhausted;
  double value = std::numeric_limits<double>::infinity();
  std::optional<ControlParams> theta_star;
  ScenarioTuple worst_tuple;
  std::vector<TracePoint> trace;
  int iterations = 0;
  int evaluations = 0;
  /// delta >= N. Below that the value is only a lower bound.
  bool exactness_guaranteed = false;
};

/// Largest tuple length accepted by sip_solve.
inline constexpr int kMaxDelta = 2048;

/// Vertices first when all 2^nu fit, remaining slots at the box center.
ScenarioTuple initial_tuple(const ParameterBox& box, int delta);

/// delta defaults to N.
SipResult sip_solve(const RobustProblem& problem, const AnnealerConfig& config,
                    std::optional<int> delta = std::nullopt);

SipResult sip_solve(const RobustProblem& problem, const TupleMaximizer& optimizer, int delta);

struct ValuePoint {
  Eigen::VectorXd x0;
  double value;  // +inf when infeasible, NaN on solver failure
  SipStatus status;
  std::string error;
};

std::vector<ValuePoint> value_function(const RobustProblem& problem, const AnnealerConfig& config,
                                       const std::vector<Eigen::VectorXd>& x0_list);

}  // namespace handsoff
