#include "handsoff/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace handsoff {

using nlohmann::json;

namespace {

std::string at_index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

std::string at_key(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

const json& require(const json& obj, std::string_view key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(at_key(path, key), "missing required field");
  return *it;
}

const json* optional_field(const json& obj, std::string_view key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

int read_int(const json& j, const std::string& path, int min_value) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < min_value || v > 1'000'000'000) {
    throw ConfigError(path, "expected an integer >= " + std::to_string(min_value));
  }
  return static_cast<int>(v);
}

std::uint64_t read_seed(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) throw ConfigError(path, "expected a non-negative integer seed");
  return j.get<std::uint64_t>();
}

Eigen::VectorXd read_vector(const json& j, const std::string& path, Eigen::Index expected = -1) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  if (expected >= 0 && static_cast<Eigen::Index>(j.size()) != expected) {
    throw ConfigError(path, "expected length " + std::to_string(expected) + ", got " +
                                std::to_string(j.size()));
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = read_number(j[i], at_index(path, i));
  return v;
}

Eigen::MatrixXd read_matrix(const json& j, const std::string& path, Eigen::Index rows = -1,
                            Eigen::Index cols = -1) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of rows");
  const auto r = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw ConfigError(at_index(path, 0), "expected an array of numbers");
  const auto c = static_cast<Eigen::Index>(j[0].size());
  if ((rows >= 0 && r != rows) || (cols >= 0 && c != cols)) {
    std::ostringstream msg;
    msg << "expected " << rows << "x" << cols << " matrix, got " << r << "x" << c;
    throw ConfigError(path, msg.str());
  }
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const std::string row_path = at_index(path, static_cast<std::size_t>(i));
    const Eigen::VectorXd row = read_vector(j[static_cast<std::size_t>(i)], row_path, c);
    m.row(i) = row.transpose();
  }
  return m;
}

nlohmann::ordered_json vector_json(const Eigen::VectorXd& v) {
  auto out = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

nlohmann::ordered_json matrix_json(const Eigen::MatrixXd& m) {
  auto out = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i).transpose()));
  return out;
}

}  // namespace

RobustProblem ProblemConfig::build() const {
  return RobustProblem(UncertainLTI(a_nominal, a_terms, b_nominal, b_terms),
                       ParameterBox(box_lower, box_upper), PWCGrid(horizon, segments),
                       TerminalSet(terminal_normals, terminal_offsets), x0);
}

bool operator==(const ProblemConfig& a, const ProblemConfig& b) {
  return to_json(a) == to_json(b);
}

ProblemConfig parse_config(const json& root) {
  if (!root.is_object()) throw ConfigError("", "config root must be an object");
  ProblemConfig cfg;
  if (const json* name = optional_field(root, "name")) {
    if (!name->is_string()) throw ConfigError("name", "expected a string");
    cfg.name = name->get<std::string>();
  }

  const json& sys = require(root, "system", "");
  cfg.a_nominal = read_matrix(require(sys, "a_nominal", "system"), "system.a_nominal");
  const Eigen::Index d = cfg.a_nominal.rows();
  if (cfg.a_nominal.cols() != d) {
    throw ConfigError("system.a_nominal", "expected a square matrix");
  }
  cfg.b_nominal = read_vector(require(sys, "b_nominal", "system"), "system.b_nominal", d);
  const json& a_terms = require(sys, "a_terms", "system");
  const json& b_terms = require(sys, "b_terms", "system");
  if (!a_terms.is_array()) throw ConfigError("system.a_terms", "expected an array of matrices");
  if (!b_terms.is_array()) throw ConfigError("system.b_terms", "expected an array of vectors");
  if (a_terms.size() != b_terms.size()) {
    throw ConfigError("system.b_terms", "expected one entry per a_terms entry (" +
                                            std::to_string(a_terms.size()) + ")");
  }
  for (std::size_t i = 0; i < a_terms.size(); ++i) {
    cfg.a_terms.push_back(read_matrix(a_terms[i], at_index("system.a_terms", i), d, d));
    cfg.b_terms.push_back(read_vector(b_terms[i], at_index("system.b_terms", i), d));
  }
  const auto nu = static_cast<Eigen::Index>(cfg.a_terms.size());

  const json& box = require(root, "box", "");
  cfg.box_lower = read_vector(require(box, "lower", "box"), "box.lower", nu);
  cfg.box_upper = read_vector(require(box, "upper", "box"), "box.upper", nu);
  for (Eigen::Index i = 0; i < nu; ++i) {
    if (cfg.box_lower[i] > cfg.box_upper[i]) {
      throw ConfigError(at_index("box.upper", static_cast<std::size_t>(i)), "below box.lower");
    }
  }

  cfg.horizon = read_number(require(root, "horizon", ""), "horizon");
  if (cfg.horizon <= 0.0) throw ConfigError("horizon", "must be positive");
  cfg.segments = read_int(require(root, "segments", ""), "segments", 1);
  cfg.x0 = read_vector(require(root, "x0", ""), "x0", d);

  const json& terminal = require(root, "terminal", "");
  if (!terminal.is_array() || terminal.empty()) {
    throw ConfigError("terminal", "expected a non-empty array of {c, d} rows");
  }
  cfg.terminal_normals.resize(static_cast<Eigen::Index>(terminal.size()), d);
  cfg.terminal_offsets.resize(static_cast<Eigen::Index>(terminal.size()));
  for (std::size_t j = 0; j < terminal.size(); ++j) {
    const std::string path = at_index("terminal", j);
    cfg.terminal_normals.row(static_cast<Eigen::Index>(j)) =
        read_vector(require(terminal[j], "c", path), path + ".c", d).transpose();
    cfg.terminal_offsets[static_cast<Eigen::Index>(j)] =
        read_number(require(terminal[j], "d", path), path + ".d");
  }

  if (const json* ann = optional_field(root, "annealer")) {
    if (!ann->is_object()) throw ConfigError("annealer", "expected an object");
    AnnealerConfig& a = cfg.annealer;
    if (const json* v = optional_field(*ann, "max_iters")) a.max_iters = read_int(*v, "annealer.max_iters", 1);
    if (const json* v = optional_field(*ann, "patience")) a.patience = read_int(*v, "annealer.patience", 1);
    if (const json* v = optional_field(*ann, "initial_temperature")) {
      a.initial_temperature = read_number(*v, "annealer.initial_temperature");
    }
    if (const json* v = optional_field(*ann, "cooling")) a.cooling = read_number(*v, "annealer.cooling");
    if (const json* v = optional_field(*ann, "proposal_scale")) {
      a.proposal_scale = read_number(*v, "annealer.proposal_scale");
    }
    if (const json* v = optional_field(*ann, "seed")) a.seed = read_seed(*v, "annealer.seed");
    try {
      a.validate();
    } catch (const InputError& e) {
      throw ConfigError("annealer", e.what());
    }
  }
  if (const json* v = optional_field(root, "delta"); v && !v->is_null()) {
    cfg.delta = read_int(*v, "delta", 1);
    if (*cfg.delta > kMaxDelta) throw ConfigError("delta", "exceeds " + std::to_string(kMaxDelta));
  }

  if (const json* ver = optional_field(root, "verification")) {
    if (const json* v = optional_field(*ver, "samples")) {
      cfg.verification.samples = read_int(*v, "verification.samples", 0);
    }
    if (const json* v = optional_field(*ver, "seed")) cfg.verification.seed = read_seed(*v, "verification.seed");
    if (const json* v = optional_field(*ver, "include_vertices")) {
      if (!v->is_boolean()) throw ConfigError("verification.include_vertices", "expected a boolean");
      cfg.verification.include_vertices = v->get<bool>();
    }
  }
  if (const json* sc = optional_field(root, "scenario")) {
    if (const json* v = optional_field(*sc, "count")) cfg.scenario.count = read_int(*v, "scenario.count", 1);
    if (const json* v = optional_field(*sc, "seed")) cfg.scenario.seed = read_seed(*v, "scenario.seed");
    if (const json* v = optional_field(*sc, "compare_counts")) {
      if (!v->is_array()) throw ConfigError("scenario.compare_counts", "expected an array of integers");
      cfg.scenario.compare_counts.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        cfg.scenario.compare_counts.push_back(
            read_int((*v)[i], at_index("scenario.compare_counts", i), 1));
      }
    }
  }
  if (const json* out = optional_field(root, "output")) {
    if (const json* v = optional_field(*out, "trajectory_samples")) {
      cfg.output.trajectory_samples = read_int(*v, "output.trajectory_samples", 0);
    }
    if (const json* v = optional_field(*out, "samples_per_segment")) {
      cfg.output.samples_per_segment = read_int(*v, "output.samples_per_segment", 1);
    }
  }

  try {
    (void)cfg.build();
  } catch (const InputError& e) {
    throw ConfigError("", e.what());
  }
  return cfg;
}

ProblemConfig parse_config_text(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(root);
}

ProblemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

nlohmann::ordered_json to_json(const ProblemConfig& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["system"] = {{"a_nominal", matrix_json(c.a_nominal)},
                 {"a_terms", nlohmann::ordered_json::array()},
                 {"b_nominal", vector_json(c.b_nominal)},
                 {"b_terms", nlohmann::ordered_json::array()}};
  for (const auto& a : c.a_terms) j["system"]["a_terms"].push_back(matrix_json(a));
  for (const auto& b : c.b_terms) j["system"]["b_terms"].push_back(vector_json(b));
  j["box"] = {{"lower", vector_json(c.box_lower)}, {"upper", vector_json(c.box_upper)}};
  j["horizon"] = c.horizon;
  j["segments"] = c.segments;
  j["x0"] = vector_json(c.x0);
  j["terminal"] = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < c.terminal_offsets.size(); ++r) {
    j["terminal"].push_back(
        {{"c", vector_json(c.terminal_normals.row(r).transpose())}, {"d", c.terminal_offsets[r]}});
  }
  j["annealer"] = {{"max_iters", c.annealer.max_iters},
                   {"patience", c.annealer.patience},
                   {"initial_temperature", c.annealer.initial_temperature},
                   {"cooling", c.annealer.cooling},
                   {"proposal_scale", c.annealer.proposal_scale},
                   {"seed", c.annealer.seed}};
  j["delta"] = c.delta ? nlohmann::ordered_json(*c.delta) : nlohmann::ordered_json(nullptr);
  j["verification"] = {{"samples", c.verification.samples},
                       {"seed", c.verification.seed},
                       {"include_vertices", c.verification.include_vertices}};
  j["scenario"] = {{"count", c.scenario.count},
                   {"seed", c.scenario.seed},
                   {"compare_counts", c.scenario.compare_counts}};
  j["output"] = {{"trajectory_samples", c.output.trajectory_samples},
                 {"samples_per_segment", c.output.samples_per_segment}};
  return j;
}

ProblemConfig builtin_config(std::string_view name, int segments) {
  if (name != "smd") throw ConfigError("", "unknown built-in problem '" + std::string(name) + "'");
  if (segments < 1) throw ConfigError("segments", "must be positive");
  ProblemConfig c;
  c.name = "smd";
  c.a_nominal.resize(2, 2);
  c.a_nominal << 0.0, 1.0, -2.0, 0.6;
  Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(2, 2);
  a1(1, 0) = 1.0;
  Eigen::MatrixXd a2 = Eigen::MatrixXd::Zero(2, 2);
  a2(1, 1) = 1.0;
  c.a_terms = {a1, a2, Eigen::MatrixXd::Zero(2, 2)};
  c.b_nominal = Eigen::Vector2d(0.0, 1.0);
  c.b_terms = {Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(), Eigen::Vector2d(0.0, 1.0)};
  c.box_lower = Eigen::Vector3d::Constant(-0.1);
  c.box_upper = Eigen::Vector3d::Constant(0.1);
  c.horizon = 5.0;
  c.segments = segments;
  c.x0 = Eigen::Vector2d(-1.0, -1.0);
  c.terminal_normals = Eigen::Matrix2d::Identity();
  c.terminal_offsets = Eigen::Vector2d(0.1, 0.1);
  return c;
}

std::string config_hash(const ProblemConfig& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace handsoff
