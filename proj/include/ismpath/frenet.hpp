#pragma once

#include <cmath>
#include <optional>

#include "ismpath/core.hpp"
#include "ismpath/refpath.hpp"

namespace ismpath {

/// Vehicle state expressed relative to the nearest path point: signed cross
/// -track error, heading error, both flipped with the local turn direction so
/// that a single control law covers left and right turns.
struct TransverseState {
  double y_err = 0.0;      // signed cross-track error (turn-direction aligned)
  double theta_err = 0.0;  // heading error in (-pi, pi]
  double s_hat = 0.0;      // path parameter of the nearest point
  int curv_sign = 1;       // +1 for straight/left-turning, -1 for right-turning
  double kappa_abs = 0.0;  // |curvature| at s_hat
};

struct TransverseRates {
  double dy = 0.0;
  double dtheta = 0.0;
};

/// Computes the transverse state of a pose. The optional hint warm-starts the
/// projection (mandatory along trajectories so s_hat stays continuous);
/// max_distance bounds how far a hint-free query may sit from the path.
inline TransverseState to_transverse(const Pose& pose, const ReferencePath& path,
                                     std::optional<double> hint = std::nullopt,
                                     double max_distance = kInf) {
  ProjectionOptions opts;
  opts.hint = hint;
  opts.max_distance = max_distance;
  const ProjectionResult proj = path.project(pose.position(), opts);

  const double theta_hat = path.tangent_heading(proj.s_hat);
  const SignedCurvature curv = path.signed_curvature(proj.s_hat);
  const int sign = curv.radius_sign();
  const Vec2 rel = pose.position() - path.eval(proj.s_hat);
  const double c = std::cos(theta_hat);
  const double s = std::sin(theta_hat);

  TransverseState ts;
  ts.s_hat = proj.s_hat;
  ts.curv_sign = sign;
  ts.kappa_abs = curv.abs();
  ts.y_err = sign * (rel.y * c - rel.x * s);
  ts.theta_err = wrap_angle(sign * wrap_angle(pose.theta - theta_hat));
  return ts;
}

/// Error dynamics under multiplicative disturbances d1 (speed) and d2 (turn
/// rate). omega is the world-frame turn rate; the curvature-sign flip that
/// normalizes the frame is applied here. Throws when the frame degenerates
/// (vehicle at or beyond the local center of curvature).
inline TransverseRates transverse_rates(const TransverseState& ts, double speed,
                                        double omega, double d1, double d2) {
  const double denom = 1.0 - ts.kappa_abs * ts.y_err;
  if (denom <= 1e-9) {
    raise(Errc::frame_singularity,
          "transverse frame undefined: vehicle reached the center of curvature");
  }
  TransverseRates r;
  r.dy = std::sin(ts.theta_err) * (1.0 + d1) * speed;
  r.dtheta = -ts.kappa_abs * std::cos(ts.theta_err) / denom * (1.0 + d1) * speed +
             ts.curv_sign * (1.0 + d2) * omega;
  return r;
}

/// Inverse of to_transverse: world pose realizing the given transverse errors
/// at path parameter s.
inline Pose pose_from_transverse(const ReferencePath& path, double s,
                                 double y_err, double theta_err) {
  const Vec2 base = path.eval(s);
  const double theta_hat = path.tangent_heading(s);
  const int sign = path.signed_curvature(s).radius_sign();
  const Vec2 normal{-std::sin(theta_hat), std::cos(theta_hat)};
  Pose pose;
  pose.x = base.x + sign * y_err * normal.x;
  pose.y = base.y + sign * y_err * normal.y;
  pose.theta = wrap_angle(theta_hat + sign * theta_err);
  return pose;
}

}  // namespace ismpath
