#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ismpath/controller.hpp"
#include "ismpath/core.hpp"
#include "ismpath/frenet.hpp"
#include "ismpath/invariant.hpp"
#include "ismpath/plant.hpp"
#include "ismpath/refpath.hpp"

namespace ismpath {

/// One closed-loop experiment. Give either an initial transverse error
/// (placed at the path start) or an initial world pose, not both.
struct Scenario {
  std::shared_ptr<const ReferencePath> path;
  std::optional<std::pair<double, double>> initial_error;  // (y_err, theta_err)
  std::optional<Pose> initial_pose;
  ControllerParams params;
  DisturbanceBounds bounds;
  DisturbanceSignal signal = DisturbanceSignal::zero();
  double dt = 1e-3;
  std::optional<double> t_max;              // default: 3 * length / speed
  std::optional<Integrator> integrator;     // default: euler for the sign law,
                                            // rk4 for the saturated law
  bool require_start_in_set = false;
};

struct SimStep {
  double t = 0.0;
  Pose pose;
  double s_hat = 0.0;
  double y_err = 0.0;
  double theta_err = 0.0;
  double sigma = 0.0;
  double omega = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  bool in_set = true;
};

struct SimMetrics {
  bool converged = false;
  double convergence_time = 0.0;
  double max_abs_y_after_convergence = 0.0;
  double max_abs_theta_after_convergence = 0.0;
  std::size_t invariance_violations = 0;
  std::size_t omega_sign_switches = 0;
  double final_s = 0.0;
  double end_time = 0.0;
  bool completed = false;  // reached the path end or the time budget
  bool aborted = false;
  std::string abort_reason;
  double eps_y = 0.0;      // convergence thresholds used
  double eps_theta = 0.0;
};

struct SimLog {
  std::vector<SimStep> steps;
  SimMetrics metrics;
};

namespace detail {

inline SimMetrics compute_metrics(const std::vector<SimStep>& steps,
                                  double eps_y, double eps_theta) {
  SimMetrics m;
  m.eps_y = eps_y;
  m.eps_theta = eps_theta;
  if (steps.empty()) return m;

  // Convergence = thresholds hold from some step through the end of the run.
  std::size_t k = steps.size();
  for (std::size_t i = steps.size(); i-- > 0;) {
    if (std::abs(steps[i].y_err) < eps_y &&
        std::abs(steps[i].theta_err) < eps_theta) {
      k = i;
    } else {
      break;
    }
  }
  m.converged = k < steps.size();
  if (m.converged) {
    m.convergence_time = steps[k].t;
    for (std::size_t i = k; i < steps.size(); ++i) {
      m.max_abs_y_after_convergence =
          std::max(m.max_abs_y_after_convergence, std::abs(steps[i].y_err));
      m.max_abs_theta_after_convergence = std::max(
          m.max_abs_theta_after_convergence, std::abs(steps[i].theta_err));
    }
  }
  for (const SimStep& s : steps) {
    if (!s.in_set) ++m.invariance_violations;
  }
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (steps[i].omega * steps[i - 1].omega < 0.0) ++m.omega_sign_switches;
  }
  m.final_s = steps.back().s_hat;
  m.end_time = steps.back().t;
  return m;
}

}  // namespace detail

/// Runs one scenario to the end of the path or the time budget. Validation
/// problems (bad tuning, path too tight, start outside the invariant set)
/// throw before any integration; mid-run failures (frame singularity,
/// ambiguous projection) return the partial log with the abort diagnostic.
inline SimLog run(const Scenario& scenario) {
  if (!scenario.path) raise(Errc::domain, "scenario has no reference path");
  audit_params(scenario.params, scenario.bounds);
  const ReferencePath& path = *scenario.path;
  const ControllerParams& prm = scenario.params;

  // Curvature admissibility gate: every osculating radius along the path
  // must be at least the minimum the tuning can hold.
  const double r_lower = min_path_radius(prm);
  if (path.max_abs_curvature() * r_lower > 1.0 + 1e-9) {
    raise(Errc::validation,
          "path curvature exceeds the admissible bound for this tuning");
  }
  if (!(scenario.dt > 0.0)) raise(Errc::domain, "dt must be positive");
  if (scenario.initial_error && scenario.initial_pose) {
    raise(Errc::domain, "give either an initial error or an initial pose, not both");
  }

  const InvariantSetSpec spec = InvariantSetSpec::from_params(prm);
  Pose pose;
  if (scenario.initial_pose) {
    pose = *scenario.initial_pose;
  } else {
    const auto [y0, th0] = scenario.initial_error.value_or(std::pair{0.0, 0.0});
    pose = pose_from_transverse(path, 0.0, y0, th0);
  }
  if (scenario.require_start_in_set) {
    TransverseState start = to_transverse(pose, path, 0.0);
    if (scenario.initial_pose) start = to_transverse(pose, path);
    if (!contains(start.y_err, start.theta_err, spec, 1e-9)) {
      raise(Errc::validation, "initial error lies outside the invariant set");
    }
  }

  const double t_max =
      scenario.t_max.value_or(3.0 * path.total_length() / prm.speed);
  if (!(t_max > 0.0)) raise(Errc::domain, "t_max must be positive");
  const Integrator method = scenario.integrator.value_or(
      prm.law == ControlLaw::sign ? Integrator::euler : Integrator::rk4);

  SimLog log;
  log.steps.reserve(static_cast<std::size_t>(t_max / scenario.dt) + 2);
  const double eps_y = 0.02 * prm.turn_radius;
  const double eps_theta = 5.0 * kPi / 180.0;

  double t = 0.0;
  std::optional<double> hint;
  if (!scenario.initial_pose) hint = 0.0;
  try {
    while (true) {
      const TransverseState ts = to_transverse(pose, path, hint);
      hint = ts.s_hat;

      SimStep step;
      step.t = t;
      step.pose = pose;
      step.s_hat = ts.s_hat;
      step.y_err = ts.y_err;
      step.theta_err = ts.theta_err;
      step.sigma = sliding_value(ts.y_err, ts.theta_err, prm);
      step.omega = control(ts, prm);
      const auto [d1, d2] = scenario.signal.sample(t);
      step.d1 = d1;
      step.d2 = d2;
      step.in_set = contains(ts.y_err, ts.theta_err, spec, 1e-3);
      log.steps.push_back(step);

      if (ts.s_hat >= 1.0 - 1e-6 || t >= t_max) break;
      pose = integrate_step(pose, prm.speed, step.omega, scenario.signal, t,
                            scenario.dt, method);
      t += scenario.dt;
    }
    log.metrics = detail::compute_metrics(log.steps, eps_y, eps_theta);
    log.metrics.completed = true;
  } catch (const Error& e) {
    log.metrics = detail::compute_metrics(log.steps, eps_y, eps_theta);
    log.metrics.aborted = true;
    log.metrics.abort_reason = e.what();
  }
  return log;
}

/// The S-curve benchmark: a half-turn left arc of radius 2 dropping into a
/// 4-unit straight, closed by a half-turn right arc of radius 2. Endpoints
/// (0, 4) to (4, -4); one curvature sign change; headings continuous.
inline std::shared_ptr<const ReferencePath> build_benchmark_path() {
  std::vector<PathSegment> segs;
  segs.push_back({ArcGeom{{0.0, 2.0}, 2.0, kPi / 2.0, kPi}, 0.0, 0.25});
  segs.push_back({LineGeom{{0.0, 0.0}, {4.0, 0.0}}, 0.25, 0.75});
  segs.push_back({ArcGeom{{4.0, -2.0}, 2.0, kPi / 2.0, -kPi}, 0.75, 1.0});
  return std::make_shared<const ReferencePath>(std::move(segs));
}

/// The four canonical starts, one per error-space quadrant.
inline std::vector<std::pair<double, double>> benchmark_starts() {
  const double th = 30.0 * kPi / 180.0;
  return {{-0.5, th}, {0.5, -th}, {0.5, th}, {-0.5, -th}};
}

/// Runs the benchmark path from all four canonical starts.
inline std::vector<SimLog> benchmark_suite(const ControllerParams& params,
                                           const DisturbanceBounds& bounds,
                                           const DisturbanceSignal& signal,
                                           double dt = 1e-3) {
  const auto path = build_benchmark_path();
  std::vector<SimLog> logs;
  for (const auto& start : benchmark_starts()) {
    Scenario sc;
    sc.path = path;
    sc.initial_error = start;
    sc.params = params;
    sc.bounds = bounds;
    sc.signal = signal;
    sc.dt = dt;
    sc.require_start_in_set = true;
    logs.push_back(run(sc));
  }
  return logs;
}

}  // namespace ismpath
