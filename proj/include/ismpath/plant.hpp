#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "ismpath/core.hpp"

namespace ismpath {

struct PoseRates {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;
};

/// Unicycle kinematics with multiplicative actuator disturbances: d1 scales
/// the effective speed, d2 the effective turn rate.
inline PoseRates dubins_rates(const Pose& pose, double speed, double omega,
                              double d1, double d2) {
  PoseRates r;
  r.dx = std::cos(pose.theta) * (1.0 + d1) * speed;
  r.dy = std::sin(pose.theta) * (1.0 + d1) * speed;
  r.dtheta = (1.0 + d2) * omega;
  return r;
}

/// Bounds on the multiplicative disturbances: |d1| <= d1_bar, |d2| <= d2_bar.
/// Both must lie in [0, 1) or the plant can stall or reverse.
struct DisturbanceBounds {
  double d1_bar = 0.0;
  double d2_bar = 0.0;

  bool valid() const {
    return d1_bar >= 0.0 && d1_bar < 1.0 && d2_bar >= 0.0 && d2_bar < 1.0;
  }
};

/// Time-indexed disturbance pair (d1(t), d2(t)). Factories cover the test
/// menagerie: zero, constants, sinusoids, seeded piecewise-constant noise,
/// and a frozen worst-case vertex.
class DisturbanceSignal {
 public:
  static DisturbanceSignal zero() { return DisturbanceSignal{}; }

  static DisturbanceSignal constant(double d1, double d2,
                                    const DisturbanceBounds& bounds) {
    check_amplitude(d1, bounds.d1_bar, "d1");
    check_amplitude(d2, bounds.d2_bar, "d2");
    DisturbanceSignal sig;
    sig.kind_ = Kind::constant;
    sig.a1_ = d1;
    sig.a2_ = d2;
    return sig;
  }

  static DisturbanceSignal sinusoid(double amp1, double freq1, double amp2,
                                    double freq2,
                                    const DisturbanceBounds& bounds) {
    check_amplitude(amp1, bounds.d1_bar, "d1 amplitude");
    check_amplitude(amp2, bounds.d2_bar, "d2 amplitude");
    DisturbanceSignal sig;
    sig.kind_ = Kind::sinusoid;
    sig.a1_ = amp1;
    sig.f1_ = freq1;
    sig.a2_ = amp2;
    sig.f2_ = freq2;
    return sig;
  }

  /// Piecewise-constant noise, uniform on the disturbance box, held for
  /// `hold` seconds. Values depend only on (seed, floor(t/hold)), so samples
  /// are reproducible regardless of query order or integrator stage times.
  static DisturbanceSignal uniform_random(std::uint64_t seed,
                                          const DisturbanceBounds& bounds,
                                          double hold = 0.05) {
    if (!(hold > 0.0)) raise(Errc::domain, "hold time must be positive");
    DisturbanceSignal sig;
    sig.kind_ = Kind::uniform_random;
    sig.a1_ = bounds.d1_bar;
    sig.a2_ = bounds.d2_bar;
    sig.seed_ = seed;
    sig.hold_ = hold;
    return sig;
  }

  /// Constant disturbance frozen at a vertex of the disturbance box.
  static DisturbanceSignal adversarial(std::pair<double, double> vertex,
                                       const DisturbanceBounds& bounds) {
    return constant(vertex.first, vertex.second, bounds);
  }

  std::pair<double, double> sample(double t) const {
    switch (kind_) {
      case Kind::zero:
        return {0.0, 0.0};
      case Kind::constant:
        return {a1_, a2_};
      case Kind::sinusoid:
        return {a1_ * std::sin(kTwoPi * f1_ * t),
                a2_ * std::sin(kTwoPi * f2_ * t)};
      case Kind::uniform_random: {
        const auto k = static_cast<std::uint64_t>(std::floor(t / hold_));
        const double u1 = hash_to_unit(splitmix64(seed_ ^ (2 * k + 1)));
        const double u2 = hash_to_unit(splitmix64(seed_ ^ (2 * k + 2)));
        return {a1_ * (2.0 * u1 - 1.0), a2_ * (2.0 * u2 - 1.0)};
      }
    }
    return {0.0, 0.0};
  }

 private:
  enum class Kind { zero, constant, sinusoid, uniform_random };

  static void check_amplitude(double value, double bound, const char* what) {
    if (std::abs(value) > bound + 1e-15) {
      raise(Errc::domain,
            std::string(what) + " exceeds its disturbance bound");
    }
  }

  Kind kind_ = Kind::zero;
  double a1_ = 0.0, a2_ = 0.0;
  double f1_ = 0.0, f2_ = 0.0;
  std::uint64_t seed_ = 0;
  double hold_ = 0.05;
};

enum class Integrator { euler, rk4 };

/// Advances the pose one step under sample-and-hold control. The disturbance
/// is re-sampled at each integrator stage time, matching a disturbance that
/// varies during the step.
inline Pose integrate_step(const Pose& pose, double speed, double omega,
                           const DisturbanceSignal& signal, double t, double dt,
                           Integrator method = Integrator::rk4) {
  if (!(dt > 0.0)) raise(Errc::domain, "time step must be positive");

  const auto deriv = [&](const Pose& p, double time) {
    const auto [d1, d2] = signal.sample(time);
    return dubins_rates(p, speed, omega, d1, d2);
  };
  const auto advance = [](const Pose& p, const PoseRates& r, double h) {
    return Pose{p.x + r.dx * h, p.y + r.dy * h, p.theta + r.dtheta * h};
  };

  Pose out;
  if (method == Integrator::euler) {
    out = advance(pose, deriv(pose, t), dt);
  } else {
    const PoseRates k1 = deriv(pose, t);
    const PoseRates k2 = deriv(advance(pose, k1, 0.5 * dt), t + 0.5 * dt);
    const PoseRates k3 = deriv(advance(pose, k2, 0.5 * dt), t + 0.5 * dt);
    const PoseRates k4 = deriv(advance(pose, k3, dt), t + dt);
    PoseRates sum;
    sum.dx = (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx) / 6.0;
    sum.dy = (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy) / 6.0;
    sum.dtheta = (k1.dtheta + 2.0 * k2.dtheta + 2.0 * k3.dtheta + k4.dtheta) / 6.0;
    out = advance(pose, sum, dt);
  }
  out.theta = wrap_angle(out.theta);
  return out;
}

}  // namespace ismpath
