#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ismpath/config.hpp"
#include "ismpath/controller.hpp"
#include "ismpath/core.hpp"
#include "ismpath/invariant.hpp"
#include "ismpath/logio.hpp"
#include "ismpath/pathfile.hpp"
#include "ismpath/sim.hpp"

namespace ismpath {

/// Process exit codes: 0 success, 1 usage/config problems, 2 validation or
/// infeasibility, 3 certification/invariance failure, 4 aborted run.
inline int exit_code_for(Errc code) {
  switch (code) {
    case Errc::config:
    case Errc::io:
    case Errc::domain:
    case Errc::degenerate_curve:
      return 1;
    case Errc::validation:
    case Errc::infeasible_bounds:
    case Errc::invalid_params:
    case Errc::precondition:
    case Errc::frame_singularity:
    case Errc::projection_ambiguous:
    case Errc::nonunique_projection:
      return 2;
  }
  return 1;
}

namespace detail {

/// Controller parameters straight from the config without the robustness
/// audit: certification commands must be able to evaluate out-of-window
/// tunings and report the failure instead of refusing to run.
inline ControllerParams unaudited_params(const RunConfig& cfg) {
  const DisturbanceBounds bounds = make_bounds(cfg);
  ControllerParams prm;
  prm.turn_radius = cfg.turn_radius;
  prm.speed = cfg.speed;
  prm.p = cfg.p.value_or(feasible(bounds) ? min_p(bounds) : 0.0);
  if (cfg.q) {
    prm.q = *cfg.q;
  } else {
    const auto [qlo, qhi] = q_window(bounds);
    prm.q = 0.5 * (qlo + qhi);
  }
  prm.y_intercept = cfg.y_intercept;
  prm.phi = cfg.phi;
  prm.law = cfg.law == "saturated" ? ControlLaw::saturated : ControlLaw::sign;
  return prm;
}

inline std::string default_out_dir() {
  if (const char* env = std::getenv("ISMPATH_OUT_DIR")) return env;
  return ".";
}

inline void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) raise(Errc::io, "cannot create output directory: " + dir);
}

inline void print_certificate(std::ostream& out, const std::string& title,
                              const CertificateReport& report) {
  out << title << ": " << (report.pass ? "PASS" : "FAIL") << "\n";
  for (const auto& c : report.checks) {
    out << "  " << c.name << ": " << (c.pass ? "PASS" : "FAIL") << " (worst "
        << c.worst << " at y_err=" << c.worst_y_err
        << ", theta_err=" << c.worst_theta_err << ", d=(" << c.worst_d1 << ","
        << c.worst_d2 << "), samples " << c.samples << ")\n";
  }
}

struct StartSpec {
  double y = -0.5;
  double theta = 30.0 * kPi / 180.0;
};

inline StartSpec parse_start(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    raise(Errc::config, "--start expects 'y,theta_deg'");
  }
  try {
    StartSpec s;
    s.y = std::stod(text.substr(0, comma));
    s.theta = std::stod(text.substr(comma + 1)) * kPi / 180.0;
    return s;
  } catch (const std::exception&) {
    raise(Errc::config, "--start expects two numbers 'y,theta_deg'");
  }
}

inline int cmd_params(const RunConfig& cfg, bool as_json) {
  const DisturbanceBounds bounds = make_bounds(cfg);
  if (!feasible(bounds)) {
    if (as_json) {
      std::cout << nlohmann::json{{"feasible", false},
                                  {"d1_bar", bounds.d1_bar},
                                  {"d2_bar", bounds.d2_bar}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << "feasible: no\n";
    }
    std::cerr << "infeasible disturbance bounds: need 1 - d2_bar >= (1 + d1_bar)/2"
              << " (got 1 - " << bounds.d2_bar << " < (1 + " << bounds.d1_bar
              << ")/2)\n";
    return 2;
  }
  const double p_min = min_p(bounds);
  const auto [qlo, qhi] = q_window(bounds);
  SynthesisOptions opts;
  opts.turn_radius = cfg.turn_radius;
  opts.speed = cfg.speed;
  opts.p = cfg.p;
  opts.q = cfg.q;
  opts.y_intercept = cfg.y_intercept;
  const ControllerParams prm = synthesize_params(bounds, opts);
  if (as_json) {
    nlohmann::json j = {{"feasible", true},
                        {"d1_bar", bounds.d1_bar},
                        {"d2_bar", bounds.d2_bar},
                        {"min_p", p_min},
                        {"q_window", {qlo, qhi}},
                        {"params", to_json(prm)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "feasible: yes\n"
              << "min_p: " << p_min << "\n"
              << "q_window: [" << qlo << ", " << qhi << "]\n"
              << "p: " << prm.p << "\n"
              << "q: " << prm.q << "\n"
              << "min_path_radius: " << min_path_radius(prm)
              << " (turn_radius " << prm.turn_radius << ")\n";
  }
  return 0;
}

inline int cmd_simulate(const RunConfig& cfg, const std::string& out_dir) {
  const DisturbanceBounds bounds = make_bounds(cfg);
  const ControllerParams prm = make_params(cfg);
  const DisturbanceSignal signal = make_signal(cfg);
  const auto path = load_path(cfg.path_spec);

  const double r_lower = min_path_radius(prm);
  const PathValidationReport path_report = path->validate_assumptions(r_lower);
  if (!path_report.pass()) {
    std::cerr << "path validation failed:\n"
              << to_json(path_report).dump(2) << "\n";
    raise(Errc::validation,
          "reference path violates the tracking assumptions for this tuning");
  }

  std::vector<std::pair<double, double>> starts;
  if (cfg.all_starts) {
    starts = benchmark_starts();
  } else {
    StartSpec s;
    if (cfg.start_y) s.y = *cfg.start_y;
    if (cfg.start_theta_deg) s.theta = *cfg.start_theta_deg * kPi / 180.0;
    starts.push_back({s.y, s.theta});
  }

  ensure_dir(out_dir);
  const double kappa_max = path->max_abs_curvature();
  const CertificateReport invariance = invariance_certificate(
      InvariantSetSpec::from_params(prm), prm, bounds, kappa_max);
  const CertificateReport attract =
      attractiveness_certificate(prm, bounds, kappa_max);

  nlohmann::json runs = nlohmann::json::array();
  bool any_abort = false;
  std::size_t total_violations = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    Scenario sc;
    sc.path = path;
    sc.initial_error = starts[i];
    sc.params = prm;
    sc.bounds = bounds;
    sc.signal = signal;
    sc.dt = cfg.dt;
    sc.t_max = cfg.t_max;
    const SimLog log = run(sc);

    const std::string csv = out_dir + "/run-" + std::to_string(i + 1) + ".csv";
    write_csv_file(csv, log);
    nlohmann::json entry = {{"csv", csv},
                            {"start_y_err", starts[i].first},
                            {"start_theta_err", starts[i].second},
                            {"metrics", to_json(log.metrics)}};
    runs.push_back(entry);
    any_abort = any_abort || log.metrics.aborted;
    total_violations += log.metrics.invariance_violations;
    std::cout << csv << ": " << (log.metrics.aborted ? "aborted" : "completed")
              << ", converged=" << (log.metrics.converged ? "yes" : "no")
              << ", invariance_violations="
              << log.metrics.invariance_violations
              << ", omega_sign_switches=" << log.metrics.omega_sign_switches
              << "\n";
  }

  nlohmann::json summary = {
      {"path", cfg.path_spec},
      {"params", to_json(prm)},
      {"bounds", to_json(bounds)},
      {"signal", {{"kind", cfg.signal_kind}, {"seed", cfg.seed}}},
      {"dt", cfg.dt},
      {"path_validation", to_json(path_report)},
      {"certificates",
       {{"invariance", to_json(invariance)}, {"attractiveness", to_json(attract)}}},
      {"runs", runs}};
  const std::string summary_file = out_dir + "/summary.json";
  write_json_file(summary_file, summary);
  std::cout << "summary: " << summary_file << "\n";

  if (any_abort) return 4;
  if (total_violations > 0) return 3;
  return 0;
}

inline int cmd_certify(const RunConfig& cfg, const std::string& out_dir,
                       std::optional<double> kappa_max_opt,
                       const CertificateOptions& opts) {
  const DisturbanceBounds bounds = make_bounds(cfg);
  const ControllerParams prm = unaudited_params(cfg);
  const double kappa_max =
      kappa_max_opt.value_or(1.0 / min_path_radius(prm));
  const CertificateReport invariance = invariance_certificate(
      InvariantSetSpec::from_params(prm), prm, bounds, kappa_max, opts);
  const CertificateReport attract =
      attractiveness_certificate(prm, bounds, kappa_max, opts);

  print_certificate(std::cout, "invariance", invariance);
  print_certificate(std::cout, "attractiveness", attract);
  const bool pass = invariance.pass && attract.pass;
  std::cout << "overall: " << (pass ? "PASS" : "FAIL") << "\n";

  ensure_dir(out_dir);
  nlohmann::json j = {{"params", to_json(prm)},
                      {"bounds", to_json(bounds)},
                      {"kappa_abs_max", kappa_max},
                      {"invariance", to_json(invariance)},
                      {"attractiveness", to_json(attract)},
                      {"pass", pass}};
  const std::string report_file = out_dir + "/certificate.json";
  write_json_file(report_file, j);
  std::cout << "report: " << report_file << "\n";
  return pass ? 0 : 3;
}

inline int cmd_validate_path(const RunConfig& cfg,
                             std::optional<double> min_radius_opt,
                             bool as_json) {
  const auto path = load_path(cfg.path_spec);
  const double min_radius =
      min_radius_opt.value_or(min_path_radius(unaudited_params(cfg)));
  const PathValidationReport report = path->validate_assumptions(min_radius);
  if (as_json) {
    nlohmann::json j = to_json(report);
    j["min_radius"] = min_radius;
    j["total_length"] = path->total_length();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "min_radius: " << min_radius << "\n"
              << "total_length: " << path->total_length() << "\n"
              << "joins_ok: " << (report.joins_ok ? "yes" : "no")
              << " (position gap " << report.max_join_position_gap
              << ", heading gap " << report.max_join_heading_gap << ")\n"
              << "curvature_ok: " << (report.curvature_ok ? "yes" : "no")
              << " (min osculating radius " << report.min_osculating_radius
              << ")\n"
              << "uniqueness_ok: " << (report.uniqueness_ok ? "yes" : "no")
              << " (" << report.uniqueness_violations << "/"
              << report.uniqueness_points << " violations)\n"
              << "curvature_sign_changes: " << report.curvature_sign_changes
              << "\n"
              << "overall: " << (report.pass() ? "PASS" : "FAIL") << "\n";
  }
  return report.pass() ? 0 : 2;
}

}  // namespace detail

/// Entry point for the command-line tool; args excludes the program name.
inline int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Robust sliding-mode path tracking for curvature-constrained "
               "vehicles: tuning, certification, and simulation"};
  app.require_subcommand(1);

  std::string config_file;
  std::string out_dir = detail::default_out_dir();
  app.add_option("--config", config_file, "config file (ini-style sections)");
  app.add_option("--out-dir", out_dir,
                 "output directory (default: $ISMPATH_OUT_DIR or '.')");

  // Shared tuning/disturbance flags, registered per subcommand.
  struct Flags {
    double d1 = 0.1, d2 = 0.1, radius = 0.8, speed = 0.8, y_intercept = 1.0;
    double p = 0.0, q = 0.0, phi = 0.05, dt = 1e-3, t_max = 0.0;
    std::string law = "sign", signal = "random", target = "gamma2";
    std::string path_spec = "paper-benchmark", start;
    double const_d1 = 0.0, const_d2 = 0.0;
    std::uint64_t seed = 1;
    double kappa_max = 0.0, min_radius = 0.0;
    std::size_t boundary_samples = 1000, region_grid = 64;
    bool all_starts = false, benchmark = false, as_json = false;
  } f;

  const auto add_bounds = [&f](CLI::App* cmd) {
    cmd->add_option("--d1", f.d1, "speed disturbance bound in [0,1)");
    cmd->add_option("--d2", f.d2, "turn-rate disturbance bound in [0,1)");
  };
  const auto add_tuning = [&f](CLI::App* cmd) {
    cmd->add_option("--radius", f.radius, "vehicle minimum turn radius R");
    cmd->add_option("--speed", f.speed, "forward speed v");
    cmd->add_option("--p", f.p, "invariant-set margin p");
    cmd->add_option("--q", f.q, "switching margin q");
    cmd->add_option("--y-intercept", f.y_intercept,
                    "invariant-set half-height (y_err/R at theta_err=0)");
    cmd->add_option("--phi", f.phi, "boundary-layer half-width");
    cmd->add_option("--law", f.law, "control law: sign | saturated");
  };

  CLI::App* params_cmd =
      app.add_subcommand("params", "feasibility, margins, and defaults for "
                                    "given disturbance bounds");
  add_bounds(params_cmd);
  add_tuning(params_cmd);
  params_cmd->add_flag("--json", f.as_json, "machine-readable output");

  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "closed-loop run(s) with CSV logs and a JSON summary");
  add_bounds(sim_cmd);
  add_tuning(sim_cmd);
  sim_cmd->add_option("--path", f.path_spec,
                      "built-in path name or path file");
  sim_cmd->add_flag("--benchmark", f.benchmark,
                    "use the built-in paper-benchmark path");
  sim_cmd->add_flag("--all-starts", f.all_starts,
                    "run all four canonical starts");
  sim_cmd->add_option("--start", f.start, "initial error 'y,theta_deg'");
  sim_cmd->add_option("--signal", f.signal,
                      "zero | constant | sinusoid | random | adversarial");
  sim_cmd->add_option("--seed", f.seed, "random-signal seed");
  sim_cmd->add_option("--const-d1", f.const_d1, "constant-signal d1");
  sim_cmd->add_option("--const-d2", f.const_d2, "constant-signal d2");
  sim_cmd->add_option("--target", f.target,
                      "adversarial boundary: l1 | l2 | gamma1 | gamma2");
  sim_cmd->add_option("--dt", f.dt, "integration step");
  sim_cmd->add_option("--t-max", f.t_max, "time budget (default 3L/v)");

  CLI::App* cert_cmd = app.add_subcommand(
      "certify", "numeric invariance + attractiveness certificates");
  add_bounds(cert_cmd);
  add_tuning(cert_cmd);
  cert_cmd->add_option("--kappa-max", f.kappa_max,
                       "max |path curvature| to certify against "
                       "(default: reciprocal minimum path radius)");
  cert_cmd->add_option("--boundary-samples", f.boundary_samples,
                       "samples per boundary arc");
  cert_cmd->add_option("--region-grid", f.region_grid,
                       "grid points per axis for region sweeps");

  CLI::App* val_cmd = app.add_subcommand(
      "validate-path", "audit a path against the tracking assumptions");
  add_bounds(val_cmd);
  add_tuning(val_cmd);
  val_cmd->add_option("--path", f.path_spec, "built-in path name or path file");
  val_cmd->add_option("--min-radius", f.min_radius,
                      "required minimum osculating radius (default: derived "
                      "from the tuning)");
  val_cmd->add_flag("--json", f.as_json, "machine-readable output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg;
    if (!config_file.empty()) cfg = load_config_file(config_file);

    const auto picked = app.get_subcommands().at(0);
    const auto take = [&](const char* name, auto& dst, const auto& src) {
      if (picked->count(name) > 0) dst = src;
    };
    take("--d1", cfg.d1_bar, f.d1);
    take("--d2", cfg.d2_bar, f.d2);
    if (picked->count("--radius")) cfg.turn_radius = f.radius;
    if (picked->count("--speed")) cfg.speed = f.speed;
    if (picked->count("--p")) cfg.p = f.p;
    if (picked->count("--q")) cfg.q = f.q;
    if (picked->count("--y-intercept")) cfg.y_intercept = f.y_intercept;
    if (picked->count("--phi")) cfg.phi = f.phi;
    if (picked->count("--law")) cfg.law = f.law;

    if (picked == params_cmd) return detail::cmd_params(cfg, f.as_json);

    if (picked == sim_cmd) {
      if (f.benchmark) cfg.path_spec = "paper-benchmark";
      if (sim_cmd->count("--path")) cfg.path_spec = f.path_spec;
      if (sim_cmd->count("--signal")) cfg.signal_kind = f.signal;
      if (sim_cmd->count("--seed")) cfg.seed = f.seed;
      if (sim_cmd->count("--const-d1")) cfg.const_d1 = f.const_d1;
      if (sim_cmd->count("--const-d2")) cfg.const_d2 = f.const_d2;
      if (sim_cmd->count("--target")) cfg.adversarial_target = f.target;
      if (sim_cmd->count("--dt")) cfg.dt = f.dt;
      if (sim_cmd->count("--t-max")) cfg.t_max = f.t_max;
      if (sim_cmd->count("--all-starts")) cfg.all_starts = f.all_starts;
      if (sim_cmd->count("--start")) {
        const detail::StartSpec s = detail::parse_start(f.start);
        cfg.start_y = s.y;
        cfg.start_theta_deg = s.theta * 180.0 / kPi;
      }
      // "random" in config files maps to the uniform signal; normalize alias.
      if (cfg.signal_kind == "uniform_random") cfg.signal_kind = "random";
      return detail::cmd_simulate(cfg, out_dir);
    }

    if (picked == cert_cmd) {
      CertificateOptions opts;
      opts.boundary_samples = f.boundary_samples;
      opts.region_grid = f.region_grid;
      std::optional<double> kappa_max;
      if (cert_cmd->count("--kappa-max")) kappa_max = f.kappa_max;
      return detail::cmd_certify(cfg, out_dir, kappa_max, opts);
    }

    if (picked == val_cmd) {
      if (val_cmd->count("--path")) cfg.path_spec = f.path_spec;
      std::optional<double> min_radius;
      if (val_cmd->count("--min-radius")) min_radius = f.min_radius;
      return detail::cmd_validate_path(cfg, min_radius, f.as_json);
    }
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ismpath
