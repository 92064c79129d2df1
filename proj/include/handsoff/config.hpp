#pragma once

// JSON problem configuration. Matrices are row-major nested arrays; see
// docs/config.schema.json for the full schema.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "handsoff/errors.hpp"
#include "handsoff/problem.hpp"
#include "handsoff/sip.hpp"

namespace handsoff {

/// Config problem tagged with the offending field path (e.g.
/// "system.a_terms[1]") or the parser position.
class ConfigError : public InputError {
 public:
  ConfigError(std::string field, const std::string& what)
      : InputError(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct VerificationSettings {
  int samples = 10000;
  std::uint64_t seed = 1;
  bool include_vertices = true;

  bool operator==(const VerificationSettings&) const = default;
};

struct ScenarioSettings {
  int count = 200;
  std::uint64_t seed = 0;
  std::vector<int> compare_counts = {200, 500, 1000};

  bool operator==(const ScenarioSettings&) const = default;
};

struct OutputSettings {
  int trajectory_samples = 100;
  int samples_per_segment = 10;

  bool operator==(const OutputSettings&) const = default;
};

struct ProblemConfig {
  std::string name;
  Eigen::MatrixXd a_nominal;
  std::vector<Eigen::MatrixXd> a_terms;
  Eigen::VectorXd b_nominal;
  std::vector<Eigen::VectorXd> b_terms;
  Eigen::VectorXd box_lower;
  Eigen::VectorXd box_upper;
  double horizon = 1.0;
  int segments = 1;
  Eigen::VectorXd x0;
  Eigen::MatrixXd terminal_normals;
  Eigen::VectorXd terminal_offsets;
  AnnealerConfig annealer;
  std::optional<int> delta;
  VerificationSettings verification;
  ScenarioSettings scenario;
  OutputSettings output;

  RobustProblem build() const;
};

bool operator==(const ProblemConfig& a, const ProblemConfig& b);

ProblemConfig parse_config(const nlohmann::json& j);
ProblemConfig parse_config_text(std::string_view text);
ProblemConfig load_config(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const ProblemConfig& config);

/// Named built-in instances: "smd" is the uncertain spring-mass-damper
/// benchmark (T = 5, x0 = (-1, -1), alpha in [-0.1, 0.1]^3, x1, x2 <= 0.1 at T).
ProblemConfig builtin_config(std::string_view name, int segments = 50);

/// FNV-1a 64 of the canonical JSON serialization, as 16 hex digits.
std::string config_hash(const ProblemConfig& config);

}  // namespace handsoff
