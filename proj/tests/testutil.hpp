#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include <ismpath/ismpath.hpp>

namespace testutil {

inline constexpr double kDeg = ismpath::kPi / 180.0;

inline ismpath::DisturbanceBounds default_bounds() { return {0.1, 0.1}; }

/// Canonical tuning used across the suite: q fixed at 0.59 so the frozen
/// sliding-value oracles stay valid, everything else synthesized.
inline ismpath::ControllerParams default_params() {
  ismpath::SynthesisOptions opt;
  opt.q = 0.59;
  return ismpath::synthesize_params(default_bounds(), opt);
}

/// Full circle of the given radius centred at the origin, traversed
/// counter-clockwise from angle 0.
inline std::shared_ptr<const ismpath::ReferencePath> make_circle_path(
    double radius) {
  std::vector<ismpath::PathSegment> segs;
  segs.push_back({ismpath::ArcGeom{{0.0, 0.0}, radius, 0.0, ismpath::kTwoPi},
                  0.0, 1.0});
  return std::make_shared<const ismpath::ReferencePath>(std::move(segs));
}

/// Single straight segment from a to b.
inline std::shared_ptr<const ismpath::ReferencePath> make_line_path(
    ismpath::Vec2 a, ismpath::Vec2 b) {
  std::vector<ismpath::PathSegment> segs;
  segs.push_back({ismpath::LineGeom{a, b}, 0.0, 1.0});
  return std::make_shared<const ismpath::ReferencePath>(std::move(segs));
}

/// Exhaustive nearest-point search used as the oracle for the projection
/// solver: dense scan followed by one ternary-search refinement in the best
/// cell.
inline std::pair<double, double> brute_force_project(
    const ismpath::ReferencePath& path, ismpath::Vec2 query,
    std::size_t grid = 200000) {
  double best_s = 0.0;
  double best_d = ismpath::kInf;
  for (std::size_t i = 0; i <= grid; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(grid);
    const double d = (path.eval(s) - query).norm();
    if (d < best_d) {
      best_d = d;
      best_s = s;
    }
  }
  double lo = std::max(0.0, best_s - 1.0 / grid);
  double hi = std::min(1.0, best_s + 1.0 / grid);
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if ((path.eval(m1) - query).norm() <= (path.eval(m2) - query).norm()) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  const double s = 0.5 * (lo + hi);
  return {s, (path.eval(s) - query).norm()};
}

/// Central finite difference of a scalar function of one variable.
template <typename F>
double central_diff(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace testutil
