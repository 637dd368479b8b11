#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ismpath {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Error categories raised by the library. The CLI maps these onto process
/// exit codes, and tests match on them instead of message text.
enum class Errc {
  domain,                // argument outside its documented domain
  degenerate_curve,      // vanishing first derivative on a path segment
  projection_ambiguous,  // query outside the projection neighborhood, no hint
  nonunique_projection,  // two nearest-point candidates at equal distance
  frame_singularity,     // |kappa|*|y_err| >= 1, transverse frame undefined
  infeasible_bounds,     // disturbance bounds fail the feasibility inequality
  invalid_params,        // controller parameter audit failed
  precondition,          // certificate precondition violated
  validation,            // path or scenario validation failed
  config,                // unparseable configuration or file format
  io,                    // file I/O failure
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
  throw Error(code, what);
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double k) const { return {x * k, y * k}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double norm_sq() const { return x * x + y * y; }
};

inline Vec2 operator*(double k, const Vec2& v) { return v * k; }

/// Planar vehicle pose; theta is kept wrapped to (-pi, pi].
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
};

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a + kPi, kTwoPi);
  if (a <= 0.0) a += kTwoPi;
  return a - kPi;
}

/// Signum with sign(0) = 0, the convention used by the switching law.
inline double sign_or_zero(double x) {
  if (x > 0.0) return 1.0;
  if (x < 0.0) return -1.0;
  return 0.0;
}

/// SplitMix64 hash step; used for order-independent seeded sampling.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Maps a 64-bit hash to a double in [0, 1).
inline double hash_to_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace ismpath
