#include "handsoff/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "handsoff/errors.hpp"

namespace handsoff {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Short fixed format for SVG coordinates.
std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

ordered_json vector_json(const Eigen::VectorXd& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

struct Frame {
  double left, top, width, height;
  double x_min, x_max, y_min, y_max;

  double x(double v) const { return left + (v - x_min) / (x_max - x_min) * width; }
  double y(double v) const { return top + (y_max - v) / (y_max - y_min) * height; }
};

void axes(std::ostringstream& svg, const Frame& f, const std::string& label) {
  svg << "<rect x=\"" << px(f.left) << "\" y=\"" << px(f.top) << "\" width=\"" << px(f.width)
      << "\" height=\"" << px(f.height) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  svg << "<text x=\"" << px(f.left + 4) << "\" y=\"" << px(f.top + 14)
      << "\" font-size=\"12\" font-family=\"sans-serif\">" << label << "</text>\n";
  auto tick = [&](double v, bool vertical) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    if (vertical) {
      svg << "<text x=\"" << px(f.left - 4) << "\" y=\"" << px(f.y(v) + 4)
          << "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\">" << buf
          << "</text>\n";
    } else {
      svg << "<text x=\"" << px(f.x(v)) << "\" y=\"" << px(f.top + f.height + 14)
          << "\" font-size=\"10\" text-anchor=\"middle\" font-family=\"sans-serif\">" << buf
          << "</text>\n";
    }
  };
  tick(f.y_min, true);
  tick(f.y_max, true);
  tick(f.x_min, false);
  tick(f.x_max, false);
}

void hline(std::ostringstream& svg, const Frame& f, double v, const char* color) {
  svg << "<line x1=\"" << px(f.left) << "\" y1=\"" << px(f.y(v)) << "\" x2=\""
      << px(f.left + f.width) << "\" y2=\"" << px(f.y(v)) << "\" stroke=\"" << color
      << "\" stroke-dasharray=\"4 3\"/>\n";
}

}  // namespace

ordered_json to_json(const VerificationReport& r) {
  ordered_json j;
  j["samples"] = r.samples;
  j["violations"] = r.violations;
  j["tolerance"] = r.tolerance;
  j["worst_margin"] = r.samples > 0 ? ordered_json(r.worst_margin) : ordered_json(nullptr);
  j["worst_alpha"] = vector_json(r.worst_alpha.values);
  j["violating_alphas"] = ordered_json::array();
  for (const auto& a : r.violating_alphas) j["violating_alphas"].push_back(vector_json(a.values));
  return j;
}

ordered_json to_json(const SparsityReport& r) {
  ordered_json j;
  j["l1"] = r.l1;
  j["l0"] = r.l0;
  j["bang_off_bang_score"] = r.bang_off_bang_score;
  j["support_segments"] = r.support_segments;
  return j;
}

ordered_json to_json(const ScenarioTuple& tuple) {
  ordered_json j = ordered_json::array();
  for (const auto& p : tuple.points) j.push_back(vector_json(p.values));
  return j;
}

ordered_json theta_json(const ControlParams& control) { return vector_json(control.theta); }

ordered_json trace_json(const SipResult& result) {
  ordered_json j;
  j["iterations"] = result.iterations;
  j["evaluations"] = result.evaluations;
  j["improvements"] = result.trace.empty() ? 0 : static_cast<int>(result.trace.size()) - 1;
  j["initial_value"] = result.trace.empty() ? ordered_json(nullptr)
                                            : ordered_json(result.trace.front().best_value);
  j["best_value"] = result.trace.empty() ? ordered_json(nullptr)
                                         : ordered_json(result.trace.back().best_value);
  j["points"] = ordered_json::array();
  for (const auto& p : result.trace) j["points"].push_back({p.iteration, p.best_value});
  return j;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw InputError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string trajectories_csv(const RobustProblem& problem, const ControlParams& control,
                             const std::vector<ParameterPoint>& alphas, int samples_per_segment) {
  std::ostringstream csv;
  csv << "alpha_index,t";
  for (int i = 1; i <= problem.system().dim_state(); ++i) csv << ",x" << i;
  csv << "\n";
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    const auto traj =
        simulate_trajectory(problem.system(), alphas[a], problem.x0(), control, samples_per_segment);
    for (const auto& s : traj) {
      csv << a << "," << num(s.t);
      for (Eigen::Index i = 0; i < s.x.size(); ++i) csv << "," << num(s.x[i]);
      csv << "\n";
    }
  }
  return csv.str();
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream csv;
  csv << "method,scenarios,status,value,value_unweighted,violations,worst_margin,runtime_s\n";
  for (const auto& r : rows) {
    csv << r.method << "," << r.scenarios << "," << r.status << "," << num(r.value) << ","
        << num(r.value_unweighted) << "," << r.violations << "," << num(r.worst_margin) << ","
        << num(r.runtime_s) << "\n";
  }
  return csv.str();
}

std::string compare_table(const std::vector<CompareRow>& rows) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %9s %-17s %12s %12s %10s %9s\n", "method", "scenarios",
                "status", "value", "unweighted", "violations", "time[s]");
  out << line;
  for (const auto& r : rows) {
    const std::string count = r.method == "sip" ? "-" : std::to_string(r.scenarios);
    std::snprintf(line, sizeof line, "%-10s %9s %-17s %12.6f %12.6f %10d %9.3f\n",
                  r.method.c_str(), count.c_str(), r.status.c_str(), r.value, r.value_unweighted,
                  r.violations, r.runtime_s);
    out << line;
    if (!r.error.empty()) out << "  error: " << r.error << "\n";
  }
  return out.str();
}

std::string control_svg(const ControlParams& control) {
  const int n = control.grid.segments();
  const Frame f{60, 20, 640, 240, 0.0, control.grid.horizon(), -1.1, 1.1};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"300\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  axes(svg, f, "u(t)");
  hline(svg, f, 1.0, "#c33");
  hline(svg, f, -1.0, "#c33");
  hline(svg, f, 0.0, "#888");
  for (int k = 0; k < n; ++k) {
    const double t = control.grid.boundary(k) + 0.5 * control.grid.step();
    const double v = std::clamp(control.theta[k], -1.1, 1.1);
    svg << "<line x1=\"" << px(f.x(t)) << "\" y1=\"" << px(f.y(0.0)) << "\" x2=\"" << px(f.x(t))
        << "\" y2=\"" << px(f.y(v)) << "\" stroke=\"#1f5fa8\"/>\n";
    svg << "<circle cx=\"" << px(f.x(t)) << "\" cy=\"" << px(f.y(v))
        << "\" r=\"2.5\" fill=\"#1f5fa8\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string states_svg(const RobustProblem& problem, const ControlParams& control,
                       const std::vector<ParameterPoint>& alphas, int samples_per_segment) {
  const int d = problem.system().dim_state();
  std::vector<std::vector<TrajectorySample>> paths;
  paths.reserve(alphas.size());
  for (const auto& a : alphas) {
    paths.push_back(simulate_trajectory(problem.system(), a, problem.x0(), control, samples_per_segment));
  }

  const double panel_h = 200.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\""
      << px(40 + d * (panel_h + 40)) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const TerminalSet& c = problem.terminal();
  for (int i = 0; i < d; ++i) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& path : paths) {
      for (const auto& s : path) {
        lo = std::min(lo, s.x[i]);
        hi = std::max(hi, s.x[i]);
      }
    }
    // Terminal bounds on x_i alone: rows with a single nonzero coefficient.
    std::vector<double> bounds;
    for (int r = 0; r < c.rows(); ++r) {
      const Eigen::VectorXd normal = c.normals().row(r).transpose();
      if (normal[i] != 0.0 && (normal.array() != 0.0).count() == 1) {
        bounds.push_back(c.offsets()[r] / normal[i]);
      }
    }
    for (double b : bounds) {
      lo = std::min(lo, b);
      hi = std::max(hi, b);
    }
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    const Frame f{60, 20 + i * (panel_h + 40), 640, panel_h, 0.0, problem.grid().horizon(),
                  lo - pad, hi + pad};
    axes(svg, f, "x" + std::to_string(i + 1));
    for (double b : bounds) hline(svg, f, b, "#c33");
    for (const auto& path : paths) {
      svg << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-opacity=\"0.25\" points=\"";
      for (const auto& s : path) svg << px(f.x(s.t)) << "," << px(f.y(s.x[i])) << " ";
      svg << "\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace handsoff
