#pragma once

// Report assembly and artifact emission: JSON reports, trajectory CSV,
// comparison tables, and standalone SVG plots.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "handsoff/analysis.hpp"
#include "handsoff/config.hpp"

namespace handsoff {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const VerificationReport& report);
ordered_json to_json(const SparsityReport& report);
ordered_json to_json(const ScenarioTuple& tuple);
ordered_json theta_json(const ControlParams& control);
ordered_json trace_json(const SipResult& result);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Header "alpha_index,t,x1,...,xd"; one row per sample per alpha.
std::string trajectories_csv(const RobustProblem& problem, const ControlParams& control,
                             const std::vector<ParameterPoint>& alphas, int samples_per_segment);

std::string compare_csv(const std::vector<CompareRow>& rows);
std::string compare_table(const std::vector<CompareRow>& rows);

/// Stem plot of the coefficients with the +-1 bounds marked.
std::string control_svg(const ControlParams& control);

/// One panel per state component, one polyline per sampled alpha, with
/// terminal bounds on single-coordinate rows drawn at t = T.
std::string states_svg(const RobustProblem& problem, const ControlParams& control,
                       const std::vector<ParameterPoint>& alphas, int samples_per_segment);

}  // namespace handsoff
