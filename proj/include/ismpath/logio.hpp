#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ismpath/controller.hpp"
#include "ismpath/core.hpp"
#include "ismpath/invariant.hpp"
#include "ismpath/plant.hpp"
#include "ismpath/sim.hpp"

namespace ismpath {

inline constexpr const char* kCsvHeader =
    "t,x,y,theta,s_hat,y_err,theta_err,sigma,omega,d1,d2,in_S";

namespace detail {

/// Shortest decimal representation that round-trips a double exactly.
inline std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Serializes the per-step log; every numeric column round-trips exactly.
inline void write_csv(std::ostream& out, const SimLog& log) {
  out << kCsvHeader << '\n';
  for (const SimStep& s : log.steps) {
    out << detail::full_precision(s.t) << ',' << detail::full_precision(s.pose.x)
        << ',' << detail::full_precision(s.pose.y) << ','
        << detail::full_precision(s.pose.theta) << ','
        << detail::full_precision(s.s_hat) << ','
        << detail::full_precision(s.y_err) << ','
        << detail::full_precision(s.theta_err) << ','
        << detail::full_precision(s.sigma) << ','
        << detail::full_precision(s.omega) << ','
        << detail::full_precision(s.d1) << ',' << detail::full_precision(s.d2)
        << ',' << (s.in_set ? 1 : 0) << '\n';
  }
}

inline void write_csv_file(const std::string& file, const SimLog& log) {
  std::ofstream out(file);
  if (!out) raise(Errc::io, "cannot write " + file);
  write_csv(out, log);
  if (!out.good()) raise(Errc::io, "write failed for " + file);
}

/// Parses a log CSV back into steps (metrics are not stored in the CSV).
inline std::vector<SimStep> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) raise(Errc::io, "empty CSV stream");
  if (line != kCsvHeader) raise(Errc::config, "unexpected CSV header: " + line);
  std::vector<SimStep> steps;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        vals.push_back(v);
      } catch (const std::exception&) {
        raise(Errc::config, "CSV cell is not numeric: '" + cell + "'");
      }
    }
    if (vals.size() != 12) raise(Errc::config, "CSV row with wrong arity");
    SimStep s;
    s.t = vals[0];
    s.pose = {vals[1], vals[2], vals[3]};
    s.s_hat = vals[4];
    s.y_err = vals[5];
    s.theta_err = vals[6];
    s.sigma = vals[7];
    s.omega = vals[8];
    s.d1 = vals[9];
    s.d2 = vals[10];
    s.in_set = vals[11] != 0.0;
    steps.push_back(s);
  }
  return steps;
}

inline std::vector<SimStep> read_csv_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) raise(Errc::io, "cannot open " + file);
  return read_csv(in);
}

inline nlohmann::json to_json(const SimMetrics& m) {
  return {{"converged", m.converged},
          {"convergence_time", m.convergence_time},
          {"max_abs_y_after_convergence", m.max_abs_y_after_convergence},
          {"max_abs_theta_after_convergence", m.max_abs_theta_after_convergence},
          {"invariance_violations", m.invariance_violations},
          {"omega_sign_switches", m.omega_sign_switches},
          {"final_s", m.final_s},
          {"end_time", m.end_time},
          {"completed", m.completed},
          {"aborted", m.aborted},
          {"abort_reason", m.abort_reason},
          {"eps_y", m.eps_y},
          {"eps_theta", m.eps_theta}};
}

inline nlohmann::json to_json(const ControllerParams& prm) {
  return {{"turn_radius", prm.turn_radius},
          {"speed", prm.speed},
          {"p", prm.p},
          {"q", prm.q},
          {"y_intercept", prm.y_intercept},
          {"phi", prm.phi},
          {"law", prm.law == ControlLaw::sign ? "sign" : "saturated"},
          {"min_path_radius", min_path_radius(prm)}};
}

inline nlohmann::json to_json(const DisturbanceBounds& b) {
  return {{"d1_bar", b.d1_bar}, {"d2_bar", b.d2_bar}};
}

inline nlohmann::json to_json(const CertificateCheck& c) {
  return {{"name", c.name},
          {"pass", c.pass},
          {"worst", c.worst},
          {"worst_y_err", c.worst_y_err},
          {"worst_theta_err", c.worst_theta_err},
          {"worst_d1", c.worst_d1},
          {"worst_d2", c.worst_d2},
          {"worst_drift", c.worst_drift},
          {"samples", c.samples}};
}

inline nlohmann::json to_json(const CertificateReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"pass", r.pass}, {"tolerance", r.tolerance}, {"checks", checks}};
}

inline nlohmann::json to_json(const PathValidationReport& r) {
  return {{"pass", r.pass()},
          {"joins_ok", r.joins_ok},
          {"max_join_position_gap", r.max_join_position_gap},
          {"max_join_heading_gap", r.max_join_heading_gap},
          {"curvature_ok", r.curvature_ok},
          {"max_abs_curvature", r.max_abs_curvature},
          {"min_osculating_radius", r.min_osculating_radius},
          {"uniqueness_ok", r.uniqueness_ok},
          {"uniqueness_violations", r.uniqueness_violations},
          {"uniqueness_points", r.uniqueness_points},
          {"curvature_sign_changes", r.curvature_sign_changes}};
}

inline void write_json_file(const std::string& file, const nlohmann::json& j) {
  std::ofstream out(file);
  if (!out) raise(Errc::io, "cannot write " + file);
  out << j.dump(2) << '\n';
  if (!out.good()) raise(Errc::io, "write failed for " + file);
}

}  // namespace ismpath
