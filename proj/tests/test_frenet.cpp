#include <gtest/gtest.h>

#include <cmath>
#include <optional>
#include <random>

#include <ismpath/ismpath.hpp>

#include "testutil.hpp"

using namespace ismpath;
using testutil::kDeg;

namespace {

TEST(TransverseFrame, ZeroErrorOnStraight) {
  const auto path = testutil::make_line_path({0, 0}, {4, 0});
  const TransverseState ts = to_transverse({2.0, 0.0, 0.0}, *path);
  EXPECT_NEAR(ts.s_hat, 0.5, 1e-9);
  EXPECT_NEAR(ts.y_err, 0.0, 1e-12);
  EXPECT_NEAR(ts.theta_err, 0.0, 1e-12);
  EXPECT_EQ(ts.curv_sign, 1);
  EXPECT_EQ(ts.kappa_abs, 0.0);
}

TEST(TransverseFrame, LeftOfTrackIsPositiveOnStraight) {
  const auto path = testutil::make_line_path({0, 0}, {4, 0});
  const TransverseState above = to_transverse({2.0, 0.7, 0.2}, *path);
  EXPECT_NEAR(above.y_err, 0.7, 1e-12);
  EXPECT_NEAR(above.theta_err, 0.2, 1e-12);
  const TransverseState below = to_transverse({2.0, -0.7, -0.2}, *path);
  EXPECT_NEAR(below.y_err, -0.7, 1e-12);
  EXPECT_NEAR(below.theta_err, -0.2, 1e-12);
}

TEST(TransverseFrame, TowardCenterIsPositiveOnLeftTurn) {
  // Counter-clockwise circle: at s=0 the path point is (2, 0) heading +90
  // degrees, center at the origin.
  const auto ccw = testutil::make_circle_path(2.0);
  const TransverseState ts =
      to_transverse({1.5, 0.0, kPi / 2.0 + 0.1}, *ccw, 0.0);
  EXPECT_NEAR(ts.y_err, 0.5, 1e-9);
  EXPECT_NEAR(ts.theta_err, 0.1, 1e-9);
  EXPECT_EQ(ts.curv_sign, 1);
  EXPECT_NEAR(ts.kappa_abs, 0.5, 1e-12);
}

TEST(TransverseFrame, TowardCenterIsPositiveOnRightTurn) {
  // Clockwise circle: at s=0 the path point is (2, 0) heading -90 degrees.
  std::vector<PathSegment> segs;
  segs.push_back({ArcGeom{{0, 0}, 2.0, 0.0, -kTwoPi}, 0.0, 1.0});
  const ReferencePath cw(std::move(segs));
  const TransverseState ts =
      to_transverse({1.5, 0.0, -kPi / 2.0 - 0.1}, cw, 0.0);
  // Mirrored frame: displacement toward the center and heading rotated into
  // the turn keep the same signs as on a left turn.
  EXPECT_NEAR(ts.y_err, 0.5, 1e-9);
  EXPECT_NEAR(ts.theta_err, 0.1, 1e-9);
  EXPECT_EQ(ts.curv_sign, -1);
  EXPECT_NEAR(ts.kappa_abs, 0.5, 1e-12);
}

TEST(TransverseFrame, RoundTripsThroughPose) {
  const auto path = build_benchmark_path();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> us(0.02, 0.98);
  std::uniform_real_distribution<double> uy(-0.79, 0.79);
  std::uniform_real_distribution<double> ut(-1.4, 1.4);
  for (int k = 0; k < 60; ++k) {
    const double s = us(rng);
    const double y = uy(rng);
    const double th = ut(rng);
    const Pose pose = pose_from_transverse(*path, s, y, th);
    const TransverseState ts = to_transverse(pose, *path, s);
    EXPECT_NEAR(ts.s_hat, s, 1e-7);
    EXPECT_NEAR(ts.y_err, y, 1e-7);
    EXPECT_NEAR(ts.theta_err, th, 1e-7);
  }
}

TEST(TransverseFrame, HeadingErrorWrapsIntoHalfOpenInterval) {
  const auto path = testutil::make_line_path({0, 0}, {4, 0});
  const TransverseState ts = to_transverse({2.0, 0.0, kPi + 0.3}, *path);
  EXPECT_NEAR(ts.theta_err, -kPi + 0.3, 1e-12);
  const TransverseState tie = to_transverse({2.0, 0.0, kPi}, *path);
  EXPECT_NEAR(tie.theta_err, kPi, 1e-12);
}

TEST(TransverseRatesLaw, MatchesClosedFormOnLeftTurn) {
  TransverseState ts;
  ts.y_err = 0.3;
  ts.theta_err = 0.4;
  ts.curv_sign = 1;
  ts.kappa_abs = 0.5;
  const double v = 0.8, w = 0.7, d1 = 0.05, d2 = -0.02;
  const TransverseRates r = transverse_rates(ts, v, w, d1, d2);
  EXPECT_NEAR(r.dy, std::sin(0.4) * 1.05 * 0.8, 1e-15);
  const double expected_dtheta =
      -0.5 * std::cos(0.4) / (1.0 - 0.5 * 0.3) * 1.05 * 0.8 + 0.98 * 0.7;
  EXPECT_NEAR(r.dtheta, expected_dtheta, 1e-15);
}

TEST(TransverseRatesLaw, FlipsTurnRateOnRightTurn) {
  TransverseState ts;
  ts.y_err = 0.0;
  ts.theta_err = 0.0;
  ts.curv_sign = -1;
  ts.kappa_abs = 0.0;
  const TransverseRates r = transverse_rates(ts, 1.0, 0.5, 0.0, 0.0);
  EXPECT_NEAR(r.dtheta, -0.5, 1e-15);
}

TEST(TransverseRatesLaw, ThrowsAtCenterOfCurvature) {
  TransverseState ts;
  ts.y_err = 2.0;  // exactly the osculating radius
  ts.kappa_abs = 0.5;
  try {
    transverse_rates(ts, 1.0, 0.0, 0.0, 0.0);
    FAIL() << "expected a frame-singularity error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::frame_singularity);
  }
}

TEST(TransverseFrame, FarPoseWithoutHintIsRejected) {
  const auto path = testutil::make_line_path({0, 0}, {4, 0});
  try {
    to_transverse({2.0, 50.0, 0.0}, *path, std::nullopt, 1.0);
    FAIL() << "expected an ambiguous-projection error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::projection_ambiguous);
  }
}

}  // namespace
