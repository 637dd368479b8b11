#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "ismpath/core.hpp"
#include "ismpath/frenet.hpp"
#include "ismpath/plant.hpp"

namespace ismpath {

enum class ControlLaw { sign, saturated };

/// Tuning of the switching tracking controller.
///  - turn_radius: tightest turn the vehicle may command (R).
///  - speed: commanded forward speed (v > 0).
///  - p: margin shrinking the invariant set so boundary flow stays inward
///    under disturbances. Must exceed min_p(bounds) for robustness.
///  - q: margin steepening the switching function so the sliding manifold
///    stays attractive. Must lie inside q_window(bounds).
///  - y_intercept: normalized half-height of the invariant set,
///    (y/R) at theta_err = 0 on its boundary; in (0, 1].
///  - phi: boundary-layer half-width of the saturated law.
struct ControllerParams {
  double turn_radius = 0.8;
  double speed = 0.8;
  double p = 0.0;
  double q = 0.5;
  double y_intercept = 1.0;
  double phi = 0.05;
  ControlLaw law = ControlLaw::sign;
};

/// Smallest admissible invariant-set margin p for the given disturbance
/// bounds.
inline double min_p(const DisturbanceBounds& bounds) {
  if (!bounds.valid()) raise(Errc::infeasible_bounds, "disturbance bounds must lie in [0, 1)");
  return 1.0 - (1.0 - bounds.d2_bar) / (1.0 + bounds.d1_bar);
}

/// Admissible interval (lo, hi) for the switching margin q. Empty (lo > hi)
/// means no q makes the manifold attractive under these bounds.
inline std::pair<double, double> q_window(const DisturbanceBounds& bounds) {
  if (!bounds.valid()) raise(Errc::infeasible_bounds, "disturbance bounds must lie in [0, 1)");
  const double ratio = (1.0 - bounds.d2_bar) / (1.0 + bounds.d1_bar);
  return {1.0 - ratio, ratio};
}

/// True when the disturbance boxes leave any room for a robust tuning:
/// 1 - d2_bar >= 0.5 (1 + d1_bar).
inline bool feasible(const DisturbanceBounds& bounds) {
  if (!bounds.valid()) return false;
  return 1.0 - bounds.d2_bar >= 0.5 * (1.0 + bounds.d1_bar) - 1e-15;
}

/// Tightest reference-path osculating radius the tuning can track while
/// keeping the invariant set forward invariant.
inline double min_path_radius(const ControllerParams& prm) {
  return 2.0 * prm.turn_radius / (1.0 - prm.p) -
         prm.y_intercept * prm.turn_radius;
}

/// Switching function sigma(y_err, theta_err). The manifold sigma = 0 blends
/// a cross-track term with a heading term so sliding along it drives both
/// errors to zero together.
inline double sliding_value(double y_err, double theta_err,
                            const ControllerParams& prm) {
  return -y_err * (1.0 - prm.q) / prm.turn_radius -
         sign_or_zero(theta_err) * (1.0 - std::cos(theta_err));
}

/// Turn-rate command for the current transverse state. The sign law
/// bang-bangs at the curvature limit; the saturated law interpolates
/// linearly through a boundary layer of half-width phi.
inline double control(const TransverseState& ts, const ControllerParams& prm) {
  const double sigma = sliding_value(ts.y_err, ts.theta_err, prm);
  double gain;
  if (prm.law == ControlLaw::sign) {
    gain = sign_or_zero(sigma);
  } else {
    gain = std::abs(sigma) <= prm.phi ? sigma / prm.phi : sign_or_zero(sigma);
  }
  return ts.curv_sign * gain * prm.speed / prm.turn_radius;
}

/// Validates a tuning against the disturbance bounds. Throws invalid_params
/// with a description of every violated requirement.
inline void audit_params(const ControllerParams& prm,
                         const DisturbanceBounds& bounds) {
  std::string why;
  const auto fail = [&why](const std::string& msg) {
    if (!why.empty()) why += "; ";
    why += msg;
  };
  if (!bounds.valid()) fail("disturbance bounds must lie in [0, 1)");
  if (!(prm.turn_radius > 0.0)) fail("turn_radius must be positive");
  if (!(prm.speed > 0.0)) fail("speed must be positive");
  if (!(prm.p >= 0.0 && prm.p < 1.0)) fail("p must lie in [0, 1)");
  if (!(prm.q >= 0.0 && prm.q < 1.0)) fail("q must lie in [0, 1)");
  if (!(prm.y_intercept > 0.0 && prm.y_intercept <= 1.0)) {
    fail("y_intercept must lie in (0, 1]");
  }
  if (prm.law == ControlLaw::saturated && !(prm.phi > 0.0)) {
    fail("phi must be positive for the saturated law");
  }
  if (bounds.valid()) {
    if (!feasible(bounds)) {
      fail("disturbance bounds too large: 1 - d2_bar < (1 + d1_bar)/2");
    } else {
      if (prm.p >= 0.0 && prm.p < 1.0 && prm.p < min_p(bounds) - 1e-12) {
        fail("p below the robustness threshold for these bounds");
      }
      const auto [qlo, qhi] = q_window(bounds);
      if (prm.q >= 0.0 && prm.q < 1.0 &&
          (prm.q < qlo - 1e-12 || prm.q > qhi + 1e-12)) {
        fail("q outside the admissible window for these bounds");
      }
    }
  }
  if (!why.empty()) raise(Errc::invalid_params, why);
}

struct SynthesisOptions {
  double turn_radius = 0.8;
  double speed = 0.8;
  std::optional<double> p;            // default: min_p(bounds)
  std::optional<double> q;            // default: midpoint of q_window(bounds)
  double y_intercept = 1.0;
  double phi = 0.05;
  ControlLaw law = ControlLaw::sign;
};

/// Builds a tuning that satisfies every robustness requirement for the given
/// bounds, filling unspecified margins with their extremal/midpoint defaults.
inline ControllerParams synthesize_params(const DisturbanceBounds& bounds,
                                          const SynthesisOptions& opts = {}) {
  if (!feasible(bounds)) {
    raise(Errc::infeasible_bounds,
          "no robust tuning exists: 1 - d2_bar < (1 + d1_bar)/2");
  }
  const auto [qlo, qhi] = q_window(bounds);
  ControllerParams prm;
  prm.turn_radius = opts.turn_radius;
  prm.speed = opts.speed;
  prm.p = opts.p.value_or(min_p(bounds));
  prm.q = opts.q.value_or(0.5 * (qlo + qhi));
  prm.y_intercept = opts.y_intercept;
  prm.phi = opts.phi;
  prm.law = opts.law;
  audit_params(prm, bounds);
  return prm;
}

}  // namespace ismpath
