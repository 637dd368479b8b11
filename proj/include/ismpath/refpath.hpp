#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ismpath/core.hpp"

namespace ismpath {

struct LineGeom {
  Vec2 start;
  Vec2 end;
};

/// Circular arc. sweep > 0 traverses counter-clockwise, sweep < 0 clockwise.
struct ArcGeom {
  Vec2 center;
  double radius = 1.0;
  double start_angle = 0.0;
  double sweep = kPi;
};

/// Arbitrary twice-differentiable curve on a local parameter u in [0, 1].
struct AnalyticGeom {
  std::function<Vec2(double)> position;
  std::function<Vec2(double)> velocity;      // d/du
  std::function<Vec2(double)> acceleration;  // d2/du2
};

/// One piece of a reference path, occupying [s_begin, s_end] of the global
/// parameter. Segment ranges must partition [0, 1] without gaps or overlaps.
struct PathSegment {
  std::variant<LineGeom, ArcGeom, AnalyticGeom> geometry;
  double s_begin = 0.0;
  double s_end = 1.0;

  double local(double s) const { return (s - s_begin) / (s_end - s_begin); }

  Vec2 position_local(double u) const {
    if (const auto* l = std::get_if<LineGeom>(&geometry)) {
      return l->start + (l->end - l->start) * u;
    }
    if (const auto* a = std::get_if<ArcGeom>(&geometry)) {
      const double ang = a->start_angle + a->sweep * u;
      return a->center + Vec2{std::cos(ang), std::sin(ang)} * a->radius;
    }
    return std::get<AnalyticGeom>(geometry).position(u);
  }

  Vec2 velocity_local(double u) const {
    if (const auto* l = std::get_if<LineGeom>(&geometry)) {
      (void)u;
      return l->end - l->start;
    }
    if (const auto* a = std::get_if<ArcGeom>(&geometry)) {
      const double ang = a->start_angle + a->sweep * u;
      return Vec2{-std::sin(ang), std::cos(ang)} * (a->radius * a->sweep);
    }
    return std::get<AnalyticGeom>(geometry).velocity(u);
  }

  Vec2 acceleration_local(double u) const {
    if (std::get_if<LineGeom>(&geometry)) return {0.0, 0.0};
    if (const auto* a = std::get_if<ArcGeom>(&geometry)) {
      const double ang = a->start_angle + a->sweep * u;
      return Vec2{std::cos(ang), std::sin(ang)} *
             (-a->radius * a->sweep * a->sweep);
    }
    return std::get<AnalyticGeom>(geometry).acceleration(u);
  }

  /// Arc length of the segment (numeric quadrature for analytic curves).
  double length() const {
    if (const auto* l = std::get_if<LineGeom>(&geometry)) {
      return (l->end - l->start).norm();
    }
    if (const auto* a = std::get_if<ArcGeom>(&geometry)) {
      return a->radius * std::abs(a->sweep);
    }
    // Composite Simpson on |velocity|.
    constexpr int kPanels = 256;
    const double h = 1.0 / kPanels;
    double acc = velocity_local(0.0).norm() + velocity_local(1.0).norm();
    for (int i = 1; i < kPanels; ++i) {
      acc += (i % 2 ? 4.0 : 2.0) * velocity_local(i * h).norm();
    }
    return acc * h / 3.0;
  }
};

/// Curvature with orientation. Straight segments report sign +1 so the
/// transverse frame degenerates smoothly to the usual Frenet frame.
struct SignedCurvature {
  double kappa = 0.0;

  double abs() const { return std::abs(kappa); }
  int radius_sign() const { return kappa < 0.0 ? -1 : 1; }
};

struct ProjectionResult {
  double s_hat = 0.0;
  double distance = 0.0;
  bool unique = true;
};

struct ProjectionOptions {
  std::optional<double> hint;
  double hint_window = 0.02;  // half-width of the warm-start search window
  double max_distance = kInf;
  double s_tolerance = 1e-10;
};

struct PathValidationOptions {
  std::size_t curvature_samples = 512;  // per analytic segment
  std::size_t uniqueness_points = 200;
  std::size_t uniqueness_grid = 8192;
  std::uint64_t seed = 0x5eedULL;
  double join_tolerance = 1e-9;
};

struct PathValidationReport {
  bool joins_ok = false;
  double max_join_position_gap = 0.0;
  double max_join_heading_gap = 0.0;
  bool curvature_ok = false;
  double max_abs_curvature = 0.0;
  double min_osculating_radius = kInf;
  bool uniqueness_ok = false;
  std::size_t uniqueness_violations = 0;
  std::size_t uniqueness_points = 0;
  std::size_t curvature_sign_changes = 0;

  bool pass() const { return joins_ok && curvature_ok && uniqueness_ok; }
};

/// Piecewise reference path on s in [0, 1]. Immutable after construction, so
/// instances can be shared across threads and simulation runs freely.
class ReferencePath {
 public:
  explicit ReferencePath(std::vector<PathSegment> segments,
                         std::size_t coarse_grid = 1024)
      : segments_(std::move(segments)) {
    if (segments_.empty()) raise(Errc::domain, "path needs at least one segment");
    constexpr double kTol = 1e-12;
    if (std::abs(segments_.front().s_begin) > kTol ||
        std::abs(segments_.back().s_end - 1.0) > kTol) {
      raise(Errc::domain, "segment ranges must start at 0 and end at 1");
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      if (!(segments_[i].s_end > segments_[i].s_begin)) {
        raise(Errc::domain, "segment range is empty or reversed");
      }
      if (i > 0 &&
          std::abs(segments_[i].s_begin - segments_[i - 1].s_end) > kTol) {
        raise(Errc::domain, "segment ranges must partition [0, 1]");
      }
    }
    length_ = 0.0;
    for (const auto& seg : segments_) length_ += seg.length();
    max_abs_curvature_ = compute_max_abs_curvature();

    const std::size_t n = std::max<std::size_t>(coarse_grid, 16);
    grid_s_.resize(n + 1);
    grid_p_.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      grid_s_[i] = static_cast<double>(i) / static_cast<double>(n);
      grid_p_[i] = eval(grid_s_[i]);
    }
    closed_ = (grid_p_.front() - grid_p_.back()).norm() <= 1e-9;
  }

  Vec2 eval(double s) const {
    s = checked_s(s);
    const PathSegment& seg = segment_at(s);
    return seg.position_local(seg.local(s));
  }

  /// First derivative with respect to the global parameter s.
  Vec2 derivative(double s) const {
    s = checked_s(s);
    const PathSegment& seg = segment_at(s);
    return seg.velocity_local(seg.local(s)) * (1.0 / (seg.s_end - seg.s_begin));
  }

  double tangent_heading(double s) const {
    const Vec2 d = derivative(s);
    if (d.norm() < 1e-14) {
      raise(Errc::degenerate_curve, "zero path derivative at s=" + std::to_string(s));
    }
    return std::atan2(d.y, d.x);
  }

  /// Signed curvature at s; at segment joins the upcoming (right) segment
  /// decides, so values are right-continuous.
  SignedCurvature signed_curvature(double s) const {
    s = checked_s(s);
    const PathSegment& seg = segment_at(s);
    if (std::get_if<LineGeom>(&seg.geometry)) return {0.0};
    if (const auto* a = std::get_if<ArcGeom>(&seg.geometry)) {
      return {(a->sweep < 0.0 ? -1.0 : 1.0) / a->radius};
    }
    const double u = seg.local(s);
    const Vec2 v = seg.velocity_local(u);
    const Vec2 acc = seg.acceleration_local(u);
    const double speed = v.norm();
    if (speed < 1e-14) {
      raise(Errc::degenerate_curve, "zero path derivative at s=" + std::to_string(s));
    }
    return {v.cross(acc) / (speed * speed * speed)};
  }

  /// Closest-point projection. Without a hint the whole path is searched and
  /// equal-distance candidates are rejected; with a hint the search is
  /// restricted to a window around it, which enforces continuity of s_hat
  /// along a trajectory.
  ProjectionResult project(const Vec2& query,
                           const ProjectionOptions& opts = {}) const {
    ProjectionResult result;
    if (opts.hint) {
      const double lo = std::max(0.0, *opts.hint - opts.hint_window);
      const double hi = std::min(1.0, *opts.hint + opts.hint_window);
      if (!(hi > lo)) raise(Errc::domain, "projection hint outside [0, 1]");
      constexpr std::size_t kLocal = 64;
      std::size_t best = 0;
      double best_d = kInf;
      for (std::size_t i = 0; i <= kLocal; ++i) {
        const double s = lo + (hi - lo) * static_cast<double>(i) / kLocal;
        const double d = (eval(s) - query).norm();
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      const double cell = (hi - lo) / kLocal;
      result.s_hat = refine_minimum(query, lo, hi, lo + (best == 0 ? 0 : best - 1) * cell,
                                    std::min(hi, lo + (best + 1) * cell),
                                    opts.s_tolerance);
      result.unique = true;
    } else {
      std::size_t best = 0;
      double best_d = kInf;
      std::vector<double> dist(grid_s_.size());
      for (std::size_t i = 0; i < grid_s_.size(); ++i) {
        dist[i] = (grid_p_[i] - query).norm();
        if (dist[i] < best_d) {
          best_d = dist[i];
          best = i;
        }
      }
      // Candidate set analysis: contiguous runs of grid points within a tight
      // band above the minimum. Two separated runs (or one run covering a
      // large fraction of the path, e.g. the center of a circle) mean the
      // nearest point is not well defined.
      const double tight = best_d + std::max(1e-12, 1e-9 * best_d);
      const double loose = best_d + std::max(1e-9, 1e-6 * best_d);
      std::size_t tight_runs = 0, loose_runs = 0, tight_width = 0;
      bool in_tight = false, in_loose = false;
      for (std::size_t i = 0; i < dist.size(); ++i) {
        const bool t = dist[i] <= tight;
        const bool l = dist[i] <= loose;
        if (t && !in_tight) ++tight_runs;
        if (t) ++tight_width;
        if (l && !in_loose) ++loose_runs;
        in_tight = t;
        in_loose = l;
      }
      // On a closed path the first and last grid points coincide, so a run
      // that straddles the seam shows up as two; fold it back into one.
      if (closed_ && dist.front() <= tight && dist.back() <= tight &&
          tight_runs > 1) {
        --tight_runs;
      }
      if (closed_ && dist.front() <= loose && dist.back() <= loose &&
          loose_runs > 1) {
        --loose_runs;
      }
      if (tight_runs > 1 || tight_width > dist.size() / 4) {
        raise(Errc::nonunique_projection,
              "nearest point on path is not unique for this query");
      }
      result.unique = loose_runs <= 1;
      const double cell = grid_s_[1] - grid_s_[0];
      const double lo = best == 0 ? 0.0 : grid_s_[best - 1];
      const double hi = best + 1 >= grid_s_.size() ? 1.0 : grid_s_[best + 1];
      result.s_hat = refine_minimum(query, std::max(0.0, lo - cell),
                                    std::min(1.0, hi + cell), lo, hi,
                                    opts.s_tolerance);
      // A closed path's minimizer can sit just across the seam from the best
      // grid point; refine the mirror cell too and keep the closer result.
      if (closed_ && (best == 0 || best + 1 == grid_s_.size())) {
        const double mirror =
            best == 0 ? refine_minimum(query, 1.0 - 2.0 * cell, 1.0,
                                       1.0 - cell, 1.0, opts.s_tolerance)
                      : refine_minimum(query, 0.0, 2.0 * cell, 0.0, cell,
                                       opts.s_tolerance);
        if ((eval(mirror) - query).norm() <
            (eval(result.s_hat) - query).norm()) {
          result.s_hat = mirror;
        }
      }
    }
    result.distance = (eval(result.s_hat) - query).norm();
    if (!opts.hint && !(result.distance < opts.max_distance)) {
      raise(Errc::projection_ambiguous,
            "query point outside the projection neighborhood and no hint given");
    }
    return result;
  }

  /// Audits the standing assumptions: tangent-continuous joins, curvature
  /// bounded by 1/min_radius, and a well-defined nearest-point map on the
  /// tube of radius min_radius around the path. Violations are reported, not
  /// thrown, so callers can inspect partial failures.
  PathValidationReport validate_assumptions(
      double min_radius, const PathValidationOptions& opts = {}) const {
    if (!(min_radius > 0.0)) raise(Errc::domain, "min_radius must be positive");
    PathValidationReport rep;

    rep.max_join_position_gap = 0.0;
    rep.max_join_heading_gap = 0.0;
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
      const PathSegment& a = segments_[i];
      const PathSegment& b = segments_[i + 1];
      const double gap = (a.position_local(1.0) - b.position_local(0.0)).norm();
      const Vec2 va = a.velocity_local(1.0);
      const Vec2 vb = b.velocity_local(0.0);
      const double ha = std::atan2(va.y, va.x);
      const double hb = std::atan2(vb.y, vb.x);
      const double dth = std::abs(wrap_angle(ha - hb));
      rep.max_join_position_gap = std::max(rep.max_join_position_gap, gap);
      rep.max_join_heading_gap = std::max(rep.max_join_heading_gap, dth);
    }
    rep.joins_ok = rep.max_join_position_gap <= opts.join_tolerance &&
                   rep.max_join_heading_gap <= opts.join_tolerance;

    rep.max_abs_curvature = max_abs_curvature_;
    rep.min_osculating_radius =
        max_abs_curvature_ > 0.0 ? 1.0 / max_abs_curvature_ : kInf;
    rep.curvature_ok = rep.min_osculating_radius >= min_radius * (1.0 - 1e-12);

    rep.curvature_sign_changes = count_curvature_sign_changes(opts);

    rep.uniqueness_points = opts.uniqueness_points;
    rep.uniqueness_violations = 0;
    if (opts.uniqueness_points > 0) {
      std::vector<Vec2> grid(opts.uniqueness_grid + 1);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = eval(static_cast<double>(i) / opts.uniqueness_grid);
      }
      std::mt19937_64 rng(opts.seed);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (std::size_t k = 0; k < opts.uniqueness_points; ++k) {
        const double s = unit(rng);
        const double r = (2.0 * unit(rng) - 1.0) * 0.999 * min_radius;
        const double th = tangent_heading(s);
        const Vec2 q = eval(s) + Vec2{-std::sin(th), std::cos(th)} * r;
        double dmin = kInf;
        for (const Vec2& g : grid) dmin = std::min(dmin, (g - q).norm());
        const double band = dmin + std::max(1e-9, 1e-6 * dmin);
        std::size_t runs = 0;
        bool inside = false;
        for (const Vec2& g : grid) {
          const bool near = (g - q).norm() <= band;
          if (near && !inside) ++runs;
          inside = near;
        }
        if (closed_ && (grid.front() - q).norm() <= band &&
            (grid.back() - q).norm() <= band && runs > 1) {
          --runs;
        }
        if (runs > 1) ++rep.uniqueness_violations;
      }
    }
    rep.uniqueness_ok = rep.uniqueness_violations == 0;
    return rep;
  }

  double total_length() const { return length_; }
  double max_abs_curvature() const { return max_abs_curvature_; }
  const std::vector<PathSegment>& segments() const { return segments_; }

 private:
  static double clamp01(double s) { return std::min(1.0, std::max(0.0, s)); }

  double checked_s(double s) const {
    if (s < -1e-12 || s > 1.0 + 1e-12) {
      raise(Errc::domain, "path parameter s=" + std::to_string(s) +
                              " outside [0, 1]");
    }
    return clamp01(s);
  }

  /// Segment owning s, right-continuous at interior joins.
  const PathSegment& segment_at(double s) const {
    std::size_t lo = 0, hi = segments_.size();
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (segments_[mid].s_begin <= s) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return segments_[lo];
  }

  /// d/ds of |g(s) - q|^2, up to the positive factor 2. The sign is
  /// continuous across joins (tangent direction is continuous) even though
  /// the magnitude of g' may jump.
  double dist_deriv(const Vec2& q, double s) const {
    return (eval(s) - q).dot(derivative(s));
  }

  /// Finds the minimizer of |g(s) - q| inside [lo, hi] given that the grid
  /// minimum fell in [blo, bhi]. Safeguarded Newton on the derivative with a
  /// bisection bracket; falls back to the clamped endpoint when the
  /// derivative does not change sign.
  double refine_minimum(const Vec2& q, double lo, double hi, double blo,
                        double bhi, double s_tol) const {
    double a = std::max(lo, blo);
    double b = std::min(hi, bhi);
    double fa = dist_deriv(q, a);
    double fb = dist_deriv(q, b);
    // Expand toward the window edges until the derivative straddles zero.
    for (int i = 0; i < 8 && fa > 0.0 && a > lo; ++i) {
      a = std::max(lo, a - (b - a));
      fa = dist_deriv(q, a);
    }
    for (int i = 0; i < 8 && fb < 0.0 && b < hi; ++i) {
      b = std::min(hi, b + (b - a));
      fb = dist_deriv(q, b);
    }
    if (fa >= 0.0) return a;  // minimum pinned at the left edge
    if (fb <= 0.0) return b;  // minimum pinned at the right edge
    double x = 0.5 * (a + b);
    for (int it = 0; it < 200 && (b - a) > s_tol; ++it) {
      const Vec2 g = eval(x) - q;
      const Vec2 d1 = derivative(x);
      const double fx = g.dot(d1);
      if (fx < 0.0) {
        a = x;
      } else if (fx > 0.0) {
        b = x;
      } else {
        return x;
      }
      const PathSegment& seg = segment_at(x);
      const double scale = 1.0 / (seg.s_end - seg.s_begin);
      const Vec2 d2 = seg.acceleration_local(seg.local(x)) * (scale * scale);
      const double fpx = d1.norm_sq() + g.dot(d2);
      double next = fpx > 0.0 ? x - fx / fpx : 0.5 * (a + b);
      if (!(next > a && next < b)) next = 0.5 * (a + b);
      x = next;
    }
    return 0.5 * (a + b);
  }

  double compute_max_abs_curvature() const {
    double worst = 0.0;
    for (const auto& seg : segments_) {
      if (std::get_if<LineGeom>(&seg.geometry)) continue;
      if (const auto* a = std::get_if<ArcGeom>(&seg.geometry)) {
        worst = std::max(worst, 1.0 / a->radius);
        continue;
      }
      constexpr int kSamples = 512;
      for (int i = 0; i <= kSamples; ++i) {
        const double u = static_cast<double>(i) / kSamples;
        const Vec2 v = seg.velocity_local(u);
        const Vec2 acc = seg.acceleration_local(u);
        const double speed = v.norm();
        if (speed < 1e-14) continue;
        worst = std::max(worst, std::abs(v.cross(acc)) / (speed * speed * speed));
      }
    }
    return worst;
  }

  std::size_t count_curvature_sign_changes(
      const PathValidationOptions& opts) const {
    std::vector<int> signs;
    for (const auto& seg : segments_) {
      if (std::get_if<LineGeom>(&seg.geometry)) {
        signs.push_back(0);
        continue;
      }
      if (const auto* a = std::get_if<ArcGeom>(&seg.geometry)) {
        signs.push_back(a->sweep < 0.0 ? -1 : 1);
        continue;
      }
      const std::size_t n = std::max<std::size_t>(opts.curvature_samples, 8);
      for (std::size_t i = 0; i <= n; ++i) {
        const double u = static_cast<double>(i) / n;
        const Vec2 v = seg.velocity_local(u);
        const Vec2 acc = seg.acceleration_local(u);
        const double c = v.cross(acc);
        signs.push_back(c > 1e-12 ? 1 : c < -1e-12 ? -1 : 0);
      }
    }
    std::size_t changes = 0;
    int last = 0;
    for (int s : signs) {
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  }

  std::vector<PathSegment> segments_;
  double length_ = 0.0;
  double max_abs_curvature_ = 0.0;
  std::vector<double> grid_s_;
  std::vector<Vec2> grid_p_;
  bool closed_ = false;
};

}  // namespace ismpath
