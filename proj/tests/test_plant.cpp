#include <gtest/gtest.h>

#include <cmath>

#include <ismpath/ismpath.hpp>

#include "testutil.hpp"

using namespace ismpath;

namespace {

TEST(Kinematics, RatesMatchClosedForm) {
  const Pose pose{1.0, -2.0, kPi / 3.0};
  const PoseRates r = dubins_rates(pose, 2.0, 0.5, 0.1, -0.1);
  EXPECT_NEAR(r.dx, std::cos(kPi / 3.0) * 1.1 * 2.0, 1e-15);
  EXPECT_NEAR(r.dy, std::sin(kPi / 3.0) * 1.1 * 2.0, 1e-15);
  EXPECT_NEAR(r.dtheta, 0.9 * 0.5, 1e-15);
}

TEST(DisturbanceBoundsChecks, RejectOutOfRangeBounds) {
  EXPECT_TRUE((DisturbanceBounds{0.1, 0.1}.valid()));
  EXPECT_TRUE((DisturbanceBounds{0.0, 0.0}.valid()));
  EXPECT_FALSE((DisturbanceBounds{1.0, 0.1}.valid()));
  EXPECT_FALSE((DisturbanceBounds{0.1, 1.0}.valid()));
  EXPECT_FALSE((DisturbanceBounds{-0.1, 0.1}.valid()));
}

TEST(DisturbanceSignals, ConstantHoldsItsValue) {
  const DisturbanceBounds b{0.1, 0.2};
  const DisturbanceSignal sig = DisturbanceSignal::constant(0.05, -0.2, b);
  for (double t : {0.0, 0.3, 17.0}) {
    const auto [d1, d2] = sig.sample(t);
    EXPECT_EQ(d1, 0.05);
    EXPECT_EQ(d2, -0.2);
  }
}

TEST(DisturbanceSignals, ConstantOutsideBoundsThrows) {
  const DisturbanceBounds b{0.1, 0.1};
  EXPECT_THROW(DisturbanceSignal::constant(0.11, 0.0, b), Error);
  EXPECT_THROW(DisturbanceSignal::constant(0.0, -0.11, b), Error);
  EXPECT_NO_THROW(DisturbanceSignal::constant(-0.1, 0.1, b));
}

TEST(DisturbanceSignals, SinusoidMatchesClosedForm) {
  const DisturbanceBounds b{0.1, 0.1};
  const DisturbanceSignal sig =
      DisturbanceSignal::sinusoid(0.1, 2.0, 0.05, 0.5, b);
  EXPECT_NEAR(sig.sample(0.0).first, 0.0, 1e-15);
  EXPECT_NEAR(sig.sample(0.125).first, 0.1, 1e-12);   // quarter period of 2 Hz
  EXPECT_NEAR(sig.sample(0.5).second, 0.05, 1e-12);   // quarter period of 0.5 Hz
  EXPECT_THROW(DisturbanceSignal::sinusoid(0.2, 1.0, 0.0, 1.0, b), Error);
}

TEST(DisturbanceSignals, RandomNoiseIsSeededAndBounded) {
  const DisturbanceBounds b{0.1, 0.1};
  const DisturbanceSignal a = DisturbanceSignal::uniform_random(7, b);
  const DisturbanceSignal c = DisturbanceSignal::uniform_random(7, b);
  const DisturbanceSignal d = DisturbanceSignal::uniform_random(8, b);
  bool any_difference = false;
  for (int k = 0; k < 200; ++k) {
    const double t = 0.013 * k;
    const auto [a1, a2] = a.sample(t);
    EXPECT_EQ(a1, c.sample(t).first);
    EXPECT_EQ(a2, c.sample(t).second);
    EXPECT_LE(std::abs(a1), 0.1);
    EXPECT_LE(std::abs(a2), 0.1);
    if (a1 != d.sample(t).first) any_difference = true;
  }
  EXPECT_TRUE(any_difference);
}

TEST(DisturbanceSignals, RandomNoiseHoldsBetweenUpdates) {
  const DisturbanceBounds b{0.1, 0.1};
  const DisturbanceSignal sig = DisturbanceSignal::uniform_random(3, b, 0.05);
  const auto v0 = sig.sample(0.100001);
  const auto v1 = sig.sample(0.149999);
  EXPECT_EQ(v0.first, v1.first);
  EXPECT_EQ(v0.second, v1.second);
  const auto v2 = sig.sample(0.150001);
  EXPECT_TRUE(v2.first != v0.first || v2.second != v0.second);
}

TEST(DisturbanceSignals, AdversarialIsConstantVertex) {
  const DisturbanceBounds b{0.1, 0.1};
  const DisturbanceSignal sig = DisturbanceSignal::adversarial({0.1, -0.1}, b);
  EXPECT_EQ(sig.sample(0.0).first, 0.1);
  EXPECT_EQ(sig.sample(5.0).second, -0.1);
}

TEST(Integration, EulerMatchesOneHandComputedStep) {
  const DisturbanceBounds b{0.1, 0.1};
  const DisturbanceSignal sig = DisturbanceSignal::constant(0.1, -0.1, b);
  const Pose start{0.0, 0.0, kPi / 2.0};
  const Pose next =
      integrate_step(start, 1.0, 0.5, sig, 0.0, 0.01, Integrator::euler);
  EXPECT_NEAR(next.x, 0.01 * std::cos(kPi / 2.0) * 1.1, 1e-15);
  EXPECT_NEAR(next.y, 0.01 * std::sin(kPi / 2.0) * 1.1, 1e-15);
  EXPECT_NEAR(next.theta, kPi / 2.0 + 0.01 * 0.9 * 0.5, 1e-15);
}

TEST(Integration, FourthOrderTracksCircleTightly) {
  // Constant (v, w) drives an exact circle of radius v/w; one coarse step
  // should land far closer with the fourth-order method than with Euler.
  const DisturbanceSignal sig = DisturbanceSignal::zero();
  const Pose start{0.0, 0.0, 0.0};
  const double v = 1.0, w = 1.0, dt = 0.1;
  const Pose exact{std::sin(w * dt) * v / w, (1.0 - std::cos(w * dt)) * v / w,
                   w * dt};
  const Pose rk = integrate_step(start, v, w, sig, 0.0, dt, Integrator::rk4);
  const Pose eu = integrate_step(start, v, w, sig, 0.0, dt, Integrator::euler);
  const double rk_err = std::hypot(rk.x - exact.x, rk.y - exact.y);
  const double eu_err = std::hypot(eu.x - exact.x, eu.y - exact.y);
  EXPECT_LT(rk_err, 3e-7);
  EXPECT_GT(eu_err, 1e-3);
  EXPECT_NEAR(rk.theta, exact.theta, 1e-12);
}

TEST(Integration, HeadingStaysWrapped) {
  const DisturbanceSignal sig = DisturbanceSignal::zero();
  Pose pose{0.0, 0.0, kPi - 0.001};
  pose = integrate_step(pose, 1.0, 1.0, sig, 0.0, 0.01, Integrator::rk4);
  EXPECT_LE(pose.theta, kPi);
  EXPECT_GT(pose.theta, -kPi);
  EXPECT_NEAR(pose.theta, -kPi + 0.009, 1e-9);
}

TEST(Integration, NonpositiveStepThrows) {
  const DisturbanceSignal sig = DisturbanceSignal::zero();
  const Pose pose{0.0, 0.0, 0.0};
  EXPECT_THROW(integrate_step(pose, 1.0, 0.0, sig, 0.0, 0.0), Error);
  EXPECT_THROW(integrate_step(pose, 1.0, 0.0, sig, 0.0, -0.1), Error);
}

TEST(Integration, SinusoidSampledAtStageTimes) {
  // A disturbance varying within the step must influence the fourth-order
  // result; freezing it at the step start (Euler) gives a different answer.
  const DisturbanceBounds b{0.5, 0.5};
  const DisturbanceSignal sig = DisturbanceSignal::sinusoid(0.5, 5.0, 0.0, 1.0, b);
  const Pose start{0.0, 0.0, 0.3};
  const Pose rk = integrate_step(start, 1.0, 0.2, sig, 0.0, 0.05, Integrator::rk4);
  const Pose eu = integrate_step(start, 1.0, 0.2, sig, 0.0, 0.05, Integrator::euler);
  EXPECT_NE(rk.x, eu.x);
}

}  // namespace
