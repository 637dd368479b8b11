#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "ismpath/controller.hpp"
#include "ismpath/core.hpp"
#include "ismpath/invariant.hpp"
#include "ismpath/plant.hpp"

namespace ismpath {

/// Everything a simulation or certification run needs, with the defaults the
/// CLI assumes. Flag parsing fills this after the (optional) config file.
struct RunConfig {
  // [path]
  std::string path_spec = "paper-benchmark";
  // [controller]
  double turn_radius = 0.8;
  double speed = 0.8;
  std::optional<double> p;  // default: smallest robust margin for the bounds
  std::optional<double> q;  // default: midpoint of the admissible window
  double y_intercept = 1.0;
  double phi = 0.05;
  std::string law = "sign";  // sign | saturated
  // [disturbance]
  double d1_bar = 0.1;
  double d2_bar = 0.1;
  std::string signal_kind = "random";  // zero|constant|sinusoid|random|adversarial
  std::uint64_t seed = 1;
  double const_d1 = 0.0;
  double const_d2 = 0.0;
  double amp1 = 0.0, freq1 = 1.0, amp2 = 0.0, freq2 = 1.0;
  std::string adversarial_target = "gamma2";  // l1|l2|gamma1|gamma2
  // [sim]
  double dt = 1e-3;
  std::optional<double> t_max;
  std::optional<double> start_y;
  std::optional<double> start_theta_deg;
  bool all_starts = false;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    raise(Errc::config, "config key '" + key + "' has non-numeric value '" + v + "'");
  }
}

inline std::uint64_t to_u64(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const auto x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    raise(Errc::config, "config key '" + key + "' has non-integer value '" + v + "'");
  }
}

}  // namespace detail

/// Applies one "[section] key = value" setting. Unknown keys are errors so
/// typos do not silently fall back to defaults.
inline void apply_config_entry(RunConfig& cfg, const std::string& section,
                               const std::string& key, const std::string& value) {
  using detail::to_double;
  using detail::to_u64;
  const std::string full = section + "." + key;
  if (section == "path") {
    if (key == "spec") {
      cfg.path_spec = value;
      return;
    }
  } else if (section == "controller") {
    if (key == "radius") { cfg.turn_radius = to_double(value, full); return; }
    if (key == "speed") { cfg.speed = to_double(value, full); return; }
    if (key == "p") { cfg.p = to_double(value, full); return; }
    if (key == "q") { cfg.q = to_double(value, full); return; }
    if (key == "y_intercept") { cfg.y_intercept = to_double(value, full); return; }
    if (key == "phi") { cfg.phi = to_double(value, full); return; }
    if (key == "law") { cfg.law = value; return; }
  } else if (section == "disturbance") {
    if (key == "d1_bar") { cfg.d1_bar = to_double(value, full); return; }
    if (key == "d2_bar") { cfg.d2_bar = to_double(value, full); return; }
    if (key == "kind") { cfg.signal_kind = value; return; }
    if (key == "seed") { cfg.seed = to_u64(value, full); return; }
    if (key == "d1") { cfg.const_d1 = to_double(value, full); return; }
    if (key == "d2") { cfg.const_d2 = to_double(value, full); return; }
    if (key == "amp1") { cfg.amp1 = to_double(value, full); return; }
    if (key == "freq1") { cfg.freq1 = to_double(value, full); return; }
    if (key == "amp2") { cfg.amp2 = to_double(value, full); return; }
    if (key == "freq2") { cfg.freq2 = to_double(value, full); return; }
    if (key == "target") { cfg.adversarial_target = value; return; }
  } else if (section == "sim") {
    if (key == "dt") { cfg.dt = to_double(value, full); return; }
    if (key == "t_max") { cfg.t_max = to_double(value, full); return; }
    if (key == "start_y") { cfg.start_y = to_double(value, full); return; }
    if (key == "start_theta_deg") {
      cfg.start_theta_deg = to_double(value, full);
      return;
    }
    if (key == "all_starts") {
      if (value == "true" || value == "1") cfg.all_starts = true;
      else if (value == "false" || value == "0") cfg.all_starts = false;
      else raise(Errc::config, "config key '" + full + "' must be true/false");
      return;
    }
  }
  raise(Errc::config, "unknown config key '" + full + "'");
}

/// Text format: [section] headers, key = value lines, '#' or ';' comments.
inline RunConfig parse_config(std::istream& in, RunConfig cfg = {}) {
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cpos = line.find_first_of("#;");
    if (cpos != std::string::npos) line.erase(cpos);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        raise(Errc::config, "config line " + std::to_string(lineno) +
                                ": unterminated section header");
      }
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      raise(Errc::config,
            "config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (section.empty()) {
      raise(Errc::config, "config line " + std::to_string(lineno) +
                              ": key outside any [section]");
    }
    apply_config_entry(cfg, section, key, value);
  }
  return cfg;
}

inline RunConfig load_config_file(const std::string& file, RunConfig cfg = {}) {
  std::ifstream in(file);
  if (!in) raise(Errc::io, "cannot open config file: " + file);
  return parse_config(in, std::move(cfg));
}

inline DisturbanceBounds make_bounds(const RunConfig& cfg) {
  const DisturbanceBounds bounds{cfg.d1_bar, cfg.d2_bar};
  if (!bounds.valid()) {
    raise(Errc::invalid_params, "disturbance bounds must lie in [0, 1)");
  }
  return bounds;
}

inline ControllerParams make_params(const RunConfig& cfg) {
  SynthesisOptions opts;
  opts.turn_radius = cfg.turn_radius;
  opts.speed = cfg.speed;
  opts.p = cfg.p;
  opts.q = cfg.q;
  opts.y_intercept = cfg.y_intercept;
  opts.phi = cfg.phi;
  if (cfg.law == "sign") {
    opts.law = ControlLaw::sign;
  } else if (cfg.law == "saturated") {
    opts.law = ControlLaw::saturated;
  } else {
    raise(Errc::config, "law must be 'sign' or 'saturated', got '" + cfg.law + "'");
  }
  return synthesize_params(make_bounds(cfg), opts);
}

inline DisturbanceSignal make_signal(const RunConfig& cfg) {
  const DisturbanceBounds bounds = make_bounds(cfg);
  if (cfg.signal_kind == "zero") return DisturbanceSignal::zero();
  if (cfg.signal_kind == "constant") {
    return DisturbanceSignal::constant(cfg.const_d1, cfg.const_d2, bounds);
  }
  if (cfg.signal_kind == "sinusoid") {
    return DisturbanceSignal::sinusoid(cfg.amp1, cfg.freq1, cfg.amp2, cfg.freq2,
                                       bounds);
  }
  if (cfg.signal_kind == "random") {
    return DisturbanceSignal::uniform_random(cfg.seed, bounds);
  }
  if (cfg.signal_kind == "adversarial") {
    BoundaryTarget target;
    if (cfg.adversarial_target == "l1") target = BoundaryTarget::l1;
    else if (cfg.adversarial_target == "l2") target = BoundaryTarget::l2;
    else if (cfg.adversarial_target == "gamma1") target = BoundaryTarget::gamma1;
    else if (cfg.adversarial_target == "gamma2") target = BoundaryTarget::gamma2;
    else raise(Errc::config, "unknown adversarial target '" + cfg.adversarial_target + "'");
    return DisturbanceSignal::adversarial(adversarial_vertex(target, bounds),
                                          bounds);
  }
  raise(Errc::config, "unknown disturbance kind '" + cfg.signal_kind + "'");
}

}  // namespace ismpath
