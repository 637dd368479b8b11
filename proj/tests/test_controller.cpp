#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include <ismpath/ismpath.hpp>

#include "testutil.hpp"

using namespace ismpath;
using testutil::kDeg;

namespace {

TEST(RobustnessMargins, MatchClosedForms) {
  const DisturbanceBounds b{0.1, 0.1};
  EXPECT_NEAR(min_p(b), 2.0 / 11.0, 1e-15);
  const auto [lo, hi] = q_window(b);
  EXPECT_NEAR(lo, 2.0 / 11.0, 1e-15);
  EXPECT_NEAR(hi, 9.0 / 11.0, 1e-15);
  EXPECT_LT(lo, 0.59);
  EXPECT_GT(hi, 0.59);

  EXPECT_NEAR(min_p({0.0, 0.0}), 0.0, 1e-15);
  EXPECT_NEAR(min_p({0.2, 0.3}), 1.0 - 0.7 / 1.2, 1e-15);
}

TEST(RobustnessMargins, InvalidBoundsThrow) {
  try {
    min_p({1.0, 0.1});
    FAIL() << "expected an infeasible-bounds error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::infeasible_bounds);
  }
  EXPECT_THROW(q_window({0.1, -0.1}), Error);
}

TEST(RobustnessMargins, FeasibilityFrontier) {
  EXPECT_TRUE(feasible({0.1, 0.1}));
  EXPECT_FALSE(feasible({0.2, 0.5}));
  EXPECT_TRUE(feasible({0.0, 0.5}));   // exactly on the frontier
  EXPECT_FALSE(feasible({0.0, 0.51}));
  EXPECT_FALSE(feasible({1.2, 0.1}));  // invalid counts as infeasible
}

TEST(MinimumPathRadius, MatchesClosedForm) {
  ControllerParams prm;
  prm.turn_radius = 0.8;
  prm.p = 0.182;
  prm.y_intercept = 1.0;
  EXPECT_NEAR(min_path_radius(prm), 1.1559902200488996, 1e-12);
  // Larger margin p widens the requirement; larger intercept shrinks it.
  ControllerParams wider = prm;
  wider.p = 0.3;
  EXPECT_GT(min_path_radius(wider), min_path_radius(prm));
  ControllerParams deeper = prm;
  deeper.y_intercept = 0.5;
  EXPECT_GT(min_path_radius(deeper), min_path_radius(prm));
}

TEST(SlidingVariable, MatchesFrozenValues) {
  ControllerParams prm;
  prm.turn_radius = 0.8;
  prm.q = 0.59;
  EXPECT_NEAR(sliding_value(-0.5, 30.0 * kDeg, prm), 0.12227540378443869,
              1e-12);
  EXPECT_NEAR(sliding_value(0.5, -30.0 * kDeg, prm), -0.12227540378443869,
              1e-12);
  // At zero heading error the switch term drops out entirely.
  EXPECT_NEAR(sliding_value(-0.4, 0.0, prm), 0.4 * 0.41 / 0.8, 1e-15);
  EXPECT_EQ(sliding_value(0.0, 0.0, prm), 0.0);
}

TEST(SlidingVariable, OddSymmetry) {
  ControllerParams prm;
  prm.q = 0.37;
  for (double y : {-0.6, -0.2, 0.0, 0.3, 0.7}) {
    for (double th : {-1.2, -0.4, 0.0, 0.5, 1.3}) {
      EXPECT_NEAR(sliding_value(y, th, prm), -sliding_value(-y, -th, prm),
                  1e-15);
    }
  }
}

TEST(ControlLawOutput, SwitchesOnSlidingSign) {
  ControllerParams prm;  // sign law, R = v = 0.8
  TransverseState ts;
  ts.y_err = -0.5;
  ts.theta_err = 30.0 * kDeg;
  ts.curv_sign = 1;
  EXPECT_NEAR(control(ts, prm), 1.0, 1e-15);  // sigma > 0, gain v/R = 1
  ts.y_err = 0.5;
  ts.theta_err = -30.0 * kDeg;
  EXPECT_NEAR(control(ts, prm), -1.0, 1e-15);
  ts.curv_sign = -1;
  EXPECT_NEAR(control(ts, prm), 1.0, 1e-15);  // frame flip mirrors the input
  ts.y_err = 0.0;
  ts.theta_err = 0.0;
  EXPECT_EQ(control(ts, prm), 0.0);  // exactly on the manifold
}

TEST(ControlLawOutput, SaturatedRampInsideBoundaryLayer) {
  ControllerParams prm;
  prm.law = ControlLaw::saturated;
  prm.phi = 0.05;
  prm.q = 0.5;
  TransverseState ts;
  ts.curv_sign = 1;
  // sigma = -y (1-q)/R = 0.02 -> half-way pro-rated inside the layer.
  ts.y_err = -0.02 * prm.turn_radius / (1.0 - prm.q);
  ts.theta_err = 0.0;
  EXPECT_NEAR(control(ts, prm), 0.4, 1e-12);
  // Outside the layer the command saturates at the full gain.
  ts.y_err = -0.5;
  EXPECT_NEAR(control(ts, prm), 1.0, 1e-12);
}

TEST(TuningAudit, AcceptsCanonicalTuning) {
  const DisturbanceBounds b{0.1, 0.1};
  EXPECT_NO_THROW(audit_params(testutil::default_params(), b));
}

TEST(TuningAudit, RejectsOutOfWindowMargins) {
  const DisturbanceBounds b{0.1, 0.1};
  ControllerParams prm = testutil::default_params();
  prm.q = 0.9;
  try {
    audit_params(prm, b);
    FAIL() << "expected an invalid-params error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_params);
    EXPECT_NE(std::string(e.what()).find("q"), std::string::npos);
  }
  prm = testutil::default_params();
  prm.p = 0.05;
  EXPECT_THROW(audit_params(prm, b), Error);
  prm = testutil::default_params();
  prm.q = 0.1;
  EXPECT_THROW(audit_params(prm, b), Error);
}

TEST(TuningAudit, RejectsBadShapeParameters) {
  const DisturbanceBounds b{0.1, 0.1};
  ControllerParams prm = testutil::default_params();
  prm.turn_radius = 0.0;
  EXPECT_THROW(audit_params(prm, b), Error);
  prm = testutil::default_params();
  prm.speed = -1.0;
  EXPECT_THROW(audit_params(prm, b), Error);
  prm = testutil::default_params();
  prm.y_intercept = 0.0;
  EXPECT_THROW(audit_params(prm, b), Error);
  prm = testutil::default_params();
  prm.y_intercept = 1.5;
  EXPECT_THROW(audit_params(prm, b), Error);
  prm = testutil::default_params();
  prm.law = ControlLaw::saturated;
  prm.phi = 0.0;
  EXPECT_THROW(audit_params(prm, b), Error);
}

TEST(TuningAudit, ReportsEveryViolationAtOnce) {
  const DisturbanceBounds b{0.1, 0.1};
  ControllerParams prm = testutil::default_params();
  prm.p = 0.05;
  prm.q = 0.95;
  try {
    audit_params(prm, b);
    FAIL() << "expected an invalid-params error";
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("p"), std::string::npos);
    EXPECT_NE(msg.find("q"), std::string::npos);
  }
}

TEST(TuningSynthesis, FillsDefaultsInsideTheWindows) {
  const DisturbanceBounds b{0.1, 0.1};
  const ControllerParams prm = synthesize_params(b, {});
  EXPECT_NEAR(prm.p, 2.0 / 11.0, 1e-15);
  EXPECT_NEAR(prm.q, 0.5, 1e-12);  // midpoint of a symmetric window
  EXPECT_NO_THROW(audit_params(prm, b));

  SynthesisOptions opt;
  opt.q = 0.59;
  opt.p = 0.25;
  const ControllerParams custom = synthesize_params(b, opt);
  EXPECT_EQ(custom.q, 0.59);
  EXPECT_EQ(custom.p, 0.25);
}

TEST(TuningSynthesis, RefusesInfeasibleBounds) {
  try {
    synthesize_params({0.2, 0.5}, {});
    FAIL() << "expected an infeasible-bounds error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::infeasible_bounds);
  }
}

TEST(TuningSynthesis, AuditsExplicitOverrides) {
  SynthesisOptions opt;
  opt.q = 0.9;
  EXPECT_THROW(synthesize_params({0.1, 0.1}, opt), Error);
}

}  // namespace
