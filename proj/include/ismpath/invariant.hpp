#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ismpath/controller.hpp"
#include "ismpath/core.hpp"
#include "ismpath/plant.hpp"

namespace ismpath {

/// Geometry of the robust invariant error set S in (y_err, theta_err) space.
struct InvariantSetSpec {
  double p = 0.0;           // vertical-compression margin, in [0, 1)
  double y_intercept = 1.0; // (y_err / R) at theta_err = 0 on the boundary, in (0, 1]
  double turn_radius = 0.8; // R > 0

  static InvariantSetSpec from_params(const ControllerParams& prm) {
    return {prm.p, prm.y_intercept, prm.turn_radius};
  }
};

inline void validate_spec(const InvariantSetSpec& spec) {
  if (!(spec.turn_radius > 0.0) || !(spec.p >= 0.0 && spec.p < 1.0) ||
      !(spec.y_intercept > 0.0 && spec.y_intercept <= 1.0)) {
    raise(Errc::invalid_params,
          "invariant set needs R > 0, p in [0, 1), y_intercept in (0, 1]");
  }
}

/// The four scalar functions whose zero level sets bound S. l1/l2 are the
/// lower/upper cross-track caps; gamma1/gamma2 close the set over heading.
struct BoundaryValues {
  double l1 = 0.0;
  double l2 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

inline BoundaryValues boundary_values(double y_err, double theta_err,
                                      const InvariantSetSpec& spec) {
  validate_spec(spec);
  const double u = y_err / spec.turn_radius;
  const double yd = spec.y_intercept;
  const double c = std::cos(theta_err);
  BoundaryValues b;
  b.l1 = u + yd;
  b.l2 = yd - u;
  b.gamma1 = -2.0 + yd * (1.0 - spec.p) - u * (1.0 - spec.p) + 2.0 * c;
  b.gamma2 = -2.0 + yd * (1.0 - spec.p) + u * (1.0 - spec.p) + 2.0 * c;
  return b;
}

/// Membership test for S. The set is the two-lobed region bounded below/above
/// by l1/l2 and closed over heading by gamma1 (for theta_err >= 0) and gamma2
/// (for theta_err <= 0): only the gamma function on the active side
/// constrains, which is what makes the set forward invariant (the inactive
/// gamma may decrease while trajectories flow through the interior).
inline bool contains(double y_err, double theta_err, const InvariantSetSpec& spec,
                     double tol = 1e-12) {
  if (std::abs(theta_err) > kPi / 2.0 + tol) return false;
  const BoundaryValues b = boundary_values(y_err, theta_err, spec);
  if (b.l1 < -tol || b.l2 < -tol) return false;
  if (theta_err >= 0.0 && b.gamma1 < -tol) return false;
  if (theta_err <= 0.0 && b.gamma2 < -tol) return false;
  return true;
}

/// Threshold for the vicinity condition on the gamma2 boundary: the inward
/// -flow argument there needs 0 <= gamma2 <= gamma2_tilde. Unbounded
/// (+infinity) on straight segments; zero exactly at the tightest admissible
/// path radius.
inline double gamma2_tilde(const InvariantSetSpec& spec, double kappa_abs) {
  validate_spec(spec);
  if (kappa_abs < 0.0) raise(Errc::domain, "kappa_abs must be non-negative");
  if (kappa_abs == 0.0) return kInf;
  return -2.0 + spec.y_intercept * (1.0 - spec.p) +
         (1.0 - spec.p) / (kappa_abs * spec.turn_radius);
}

/// Quadrants of S by (sign theta_err, sign sigma), numbered as in the
/// attractiveness analysis. Ties go to the lower-numbered region.
enum class Region : int { r1 = 1, r2 = 2, r3 = 3, r4 = 4 };

inline Region classify_region(double y_err, double theta_err,
                              const ControllerParams& prm, double tol = 1e-9) {
  if (!contains(y_err, theta_err, InvariantSetSpec::from_params(prm), tol)) {
    raise(Errc::domain, "state outside the invariant set has no region label");
  }
  const double sigma = sliding_value(y_err, theta_err, prm);
  if (theta_err >= 0.0 && sigma >= 0.0) return Region::r1;
  if (theta_err <= 0.0 && sigma <= 0.0) return Region::r2;
  if (theta_err >= 0.0) return Region::r3;
  return Region::r4;
}

/// One certified quantity: the extremal value of a boundary derivative (for
/// invariance) or of sigma*sigma_dot (for attractiveness), with the sample
/// and disturbance vertex where the extremum occurred.
struct CertificateCheck {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  double worst_y_err = 0.0;
  double worst_theta_err = 0.0;
  double worst_d1 = 0.0;
  double worst_d2 = 0.0;
  /// Curvature coupling at the extremum: |curvature| for boundary checks,
  /// the drift ratio R cos(theta_err)/(|R_hat| - y_err) for region checks.
  double worst_drift = 0.0;
  std::size_t samples = 0;
};

struct CertificateReport {
  bool pass = false;
  double tolerance = 0.0;
  std::vector<CertificateCheck> checks;
};

struct CertificateOptions {
  std::size_t boundary_samples = 1000;  // per boundary arc
  std::size_t region_grid = 64;         // per axis, per region sweep
  double tolerance = 1e-9;              // pass slack on analytically-zero minima
  double sigma_tolerance = 1e-6;        // off-manifold exclusion band
};

namespace detail {

inline void validate_certificate_inputs(const ControllerParams& prm,
                                        const DisturbanceBounds& bounds,
                                        double kappa_abs_max) {
  if (!bounds.valid()) {
    raise(Errc::invalid_params, "disturbance bounds must lie in [0, 1)");
  }
  if (!(prm.turn_radius > 0.0) || !(prm.speed > 0.0) ||
      !(prm.p >= 0.0 && prm.p < 1.0) || !(prm.q >= 0.0 && prm.q < 1.0) ||
      !(prm.y_intercept > 0.0 && prm.y_intercept <= 1.0)) {
    raise(Errc::invalid_params,
          "certificate needs R > 0, v > 0, p and q in [0, 1), y_intercept in (0, 1]");
  }
  if (kappa_abs_max < 0.0) {
    raise(Errc::domain, "kappa_abs_max must be non-negative");
  }
}

inline std::array<std::pair<double, double>, 4> disturbance_vertices(
    const DisturbanceBounds& bounds) {
  return {{{-bounds.d1_bar, -bounds.d2_bar},
           {-bounds.d1_bar, +bounds.d2_bar},
           {+bounds.d1_bar, -bounds.d2_bar},
           {+bounds.d1_bar, +bounds.d2_bar}}};
}

}  // namespace detail

/// Numerically certifies forward invariance of S: on each of the four set
/// boundaries the time derivative of the boundary function, evaluated with
/// the closed-loop control and minimized over the disturbance-box vertices
/// and the curvature endpoints {0, kappa_abs_max}, must be non-negative.
/// Derivatives are affine in (d1, d2) and monotone in the curvature coupling,
/// so the vertex/endpoint sweep is exact on the sample set.
inline CertificateReport invariance_certificate(const InvariantSetSpec& spec,
                                            const ControllerParams& prm,
                                            const DisturbanceBounds& bounds,
                                            double kappa_abs_max,
                                            const CertificateOptions& opts = {}) {
  validate_spec(spec);
  detail::validate_certificate_inputs(prm, bounds, kappa_abs_max);
  if (std::abs(spec.p - prm.p) > 1e-12 ||
      std::abs(spec.y_intercept - prm.y_intercept) > 1e-12 ||
      std::abs(spec.turn_radius - prm.turn_radius) > 1e-12) {
    raise(Errc::invalid_params,
          "invariant-set spec disagrees with the controller parameters");
  }
  // Geometric precondition: the path must be no tighter than the minimum
  // radius the tuning can hold, otherwise the gamma2 vicinity bound fails
  // before any sampling starts.
  if (kappa_abs_max * min_path_radius(prm) > 1.0 + opts.tolerance) {
    raise(Errc::precondition,
          "kappa_abs_max exceeds the reciprocal minimum path radius for this tuning");
  }

  const double R = prm.turn_radius;
  const double v = prm.speed;
  const double p = spec.p;
  const double yd = spec.y_intercept;
  const auto vertices = detail::disturbance_vertices(bounds);
  const std::array<double, 2> kappas{0.0, kappa_abs_max};
  const std::size_t n = std::max<std::size_t>(opts.boundary_samples, 2);

  CertificateReport report;
  report.tolerance = opts.tolerance;

  // Boundary description: y_err(theta) on a theta range plus the derivative
  // of its boundary function under the closed loop.
  struct Boundary {
    std::string name;
    double theta_lo, theta_hi;
    std::function<double(double)> y_of_theta;
    // derivative(theta, y, d1, d2, kappa)
    std::function<double(double, double, double, double, double)> rate;
  };

  // Shared curvature coupling: 2 kappa cos(theta) (1+d1) v / (1 - kappa y).
  const auto curv_term = [&](double theta, double y, double d1, double kappa) {
    if (kappa == 0.0) return 0.0;
    const double denom = 1.0 - kappa * y;
    return 2.0 * kappa * std::cos(theta) * (1.0 + d1) * v / denom;
  };
  const auto sigma_sign = [&](double y, double theta) {
    return sign_or_zero(sliding_value(y, theta, prm));
  };

  const std::vector<Boundary> boundaries = {
      {"edge-lower", 0.0, kPi / 2.0, [&](double) { return -yd * R; },
       [&](double theta, double, double d1, double, double) {
         return std::sin(theta) * (1.0 + d1) * v / R;
       }},
      {"edge-upper", -kPi / 2.0, 0.0, [&](double) { return yd * R; },
       [&](double theta, double, double d1, double, double) {
         return -std::sin(theta) * (1.0 + d1) * v / R;
       }},
      {"gamma1-curve", 0.0, kPi / 2.0,
       [&](double theta) {
         return R * (yd - 2.0 * (1.0 - std::cos(theta)) / (1.0 - p));
       },
       [&](double theta, double y, double d1, double d2, double kappa) {
         return std::sin(theta) *
                ((p - 1.0) * (1.0 + d1) * v / R + curv_term(theta, y, d1, kappa) -
                 2.0 * sigma_sign(y, theta) * (1.0 + d2) * v / R);
       }},
      {"gamma2-curve", -kPi / 2.0, 0.0,
       [&](double theta) {
         return R * (-yd + 2.0 * (1.0 - std::cos(theta)) / (1.0 - p));
       },
       [&](double theta, double y, double d1, double d2, double kappa) {
         return std::sin(theta) *
                ((1.0 - p) * (1.0 + d1) * v / R + curv_term(theta, y, d1, kappa) -
                 2.0 * sigma_sign(y, theta) * (1.0 + d2) * v / R);
       }}};

  report.pass = true;
  for (const Boundary& b : boundaries) {
    CertificateCheck check;
    check.name = b.name;
    check.worst = kInf;
    for (std::size_t i = 0; i < n; ++i) {
      const double theta =
          b.theta_lo + (b.theta_hi - b.theta_lo) * static_cast<double>(i) /
                           static_cast<double>(n - 1);
      const double y = b.y_of_theta(theta);
      if (!contains(y, theta, spec, opts.tolerance)) continue;
      ++check.samples;
      for (const auto& [d1, d2] : vertices) {
        for (double kappa : kappas) {
          if (kappa * y >= 1.0 - 1e-9) continue;  // beyond frame validity
          const double rate = b.rate(theta, y, d1, d2, kappa);
          if (rate < check.worst) {
            check.worst = rate;
            check.worst_y_err = y;
            check.worst_theta_err = theta;
            check.worst_d1 = d1;
            check.worst_d2 = d2;
            check.worst_drift = kappa;
          }
        }
      }
    }
    check.pass = check.worst >= -opts.tolerance;
    report.pass = report.pass && check.pass;
    report.checks.push_back(std::move(check));
  }
  return report;
}

/// Numerically certifies attractiveness of the sliding manifold on its
/// attractive half (theta_err >= 0): sigma * sigma_dot must be strictly
/// negative off the manifold throughout regions 1 and 3. The curvature drift
/// ratio R cos(theta)/(|R_hat| - y) is swept over its admissible envelope
/// {0, 1} — the same relaxation the attractiveness analysis uses, and the one
/// that makes the q window both necessary and sufficient — jointly with the
/// disturbance-box vertices. Window violations therefore surface as failed
/// region checks rather than as thrown errors.
inline CertificateReport attractiveness_certificate(
    const ControllerParams& prm, const DisturbanceBounds& bounds,
    double kappa_abs_max, const CertificateOptions& opts = {}) {
  detail::validate_certificate_inputs(prm, bounds, kappa_abs_max);
  const InvariantSetSpec spec = InvariantSetSpec::from_params(prm);

  const double R = prm.turn_radius;
  const double v = prm.speed;
  const double yd = prm.y_intercept;
  const auto vertices = detail::disturbance_vertices(bounds);
  const std::array<double, 2> drifts{0.0, 1.0};
  const std::size_t n = std::max<std::size_t>(opts.region_grid, 2);

  CertificateReport report;
  report.tolerance = opts.tolerance;
  CertificateCheck region1, region3;
  region1.name = "region-1";
  region3.name = "region-3";
  region1.worst = -kInf;
  region3.worst = -kInf;

  for (std::size_t i = 0; i < n; ++i) {
    const double u = -yd + 2.0 * yd * static_cast<double>(i) /
                               static_cast<double>(n - 1);
    const double y = u * R;
    for (std::size_t j = 0; j < n; ++j) {
      // theta in (0, pi/2]: the theta = 0 slice has sigma_dot identically
      // zero and belongs to the manifold itself.
      const double theta =
          kPi / 2.0 * static_cast<double>(j + 1) / static_cast<double>(n);
      if (!contains(y, theta, spec)) continue;
      const double sigma = sliding_value(y, theta, prm);
      if (std::abs(sigma) <= opts.sigma_tolerance) continue;
      CertificateCheck& check = sigma > 0.0 ? region1 : region3;
      ++check.samples;
      for (const auto& [d1, d2] : vertices) {
        for (double x : drifts) {
          const double sigma_dot =
              -std::sin(theta) * v / R *
              ((1.0 - prm.q - x) * (1.0 + d1) +
               sign_or_zero(sigma) * (1.0 + d2));
          const double value = sigma * sigma_dot;
          if (value > check.worst) {
            check.worst = value;
            check.worst_y_err = y;
            check.worst_theta_err = theta;
            check.worst_d1 = d1;
            check.worst_d2 = d2;
            check.worst_drift = x;
          }
        }
      }
    }
  }

  region1.pass = region1.worst < 0.0;
  region3.pass = region3.worst < 0.0;
  report.pass = region1.pass && region3.pass;
  report.checks.push_back(std::move(region1));
  report.checks.push_back(std::move(region3));
  return report;
}

/// Boundary a worst-case constant disturbance should push against.
enum class BoundaryTarget { l1, l2, gamma1, gamma2 };

/// Disturbance-box vertex minimizing the inward flow across the target
/// boundary: the edge checks recover slowest at low speed and weak turn
/// authority, the gamma checks are tightest at high speed and weak turns.
inline std::pair<double, double> adversarial_vertex(
    BoundaryTarget target, const DisturbanceBounds& bounds) {
  if (!bounds.valid()) {
    raise(Errc::invalid_params, "disturbance bounds must lie in [0, 1)");
  }
  switch (target) {
    case BoundaryTarget::l1:
    case BoundaryTarget::l2:
      return {-bounds.d1_bar, -bounds.d2_bar};
    case BoundaryTarget::gamma1:
    case BoundaryTarget::gamma2:
      return {+bounds.d1_bar, -bounds.d2_bar};
  }
  return {0.0, 0.0};
}

}  // namespace ismpath
