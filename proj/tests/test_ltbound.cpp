#include "ltwg/ltbound.hpp"
#include "ltwg/pipeline.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace ltwg;

namespace {

constexpr double kPi = std::numbers::pi;
const double kPi2 = kPi * kPi;

// L^cl_{sigma,2} = 1 / (4 pi (sigma + 1)).
double classical_d2(double sigma) { return 1.0 / (4.0 * kPi * (sigma + 1.0)); }

} // namespace

TEST(Constants, ClassicalClosedForms) {
  EXPECT_NEAR(classical_constant(0.5, 1), 0.25, 1e-15);
  EXPECT_NEAR(classical_constant(1.5, 1), 0.1875, 1e-15);
  EXPECT_NEAR(classical_constant(1.0, 1), 2.0 / (3.0 * kPi), 1e-15);
  EXPECT_NEAR(classical_constant(1.0, 2), 1.0 / (8.0 * kPi), 1e-15);
  for (double s : {0.5, 0.9, 1.4, 2.0}) EXPECT_NEAR(classical_constant(s, 2), classical_d2(s), 1e-15);
  EXPECT_NEAR(classical_constant(0.5, 3), 1.0 / (32.0 * kPi), 1e-15);
  EXPECT_NEAR(classical_constant(1.5, 3), 1.0 / (64.0 * kPi), 1e-15);
  EXPECT_GT(classical_constant(300.0, 1), 0.0);
}

TEST(Constants, ExcessFactorTable) {
  for (int d : {1, 2, 3}) {
    EXPECT_EQ(excess_factor(2.0, d), 1.0);
    EXPECT_EQ(excess_factor(1.5, d), 1.0);
    EXPECT_EQ(excess_factor(1.4, d), 2.0);
    EXPECT_EQ(excess_factor(1.0, d), 2.0);
    EXPECT_EQ(excess_factor(0.9, d), d == 1 ? 2.0 : 4.0);
    EXPECT_EQ(excess_factor(0.5, d), d == 1 ? 2.0 : 4.0);
  }
  EXPECT_EQ(excess_factor(0.7, 2), 4.0);
  EXPECT_THROW(excess_factor(0.4, 1), ConfigError);
}

TEST(RieszMean, Examples) {
  EXPECT_NEAR(riesz_mean({8.0, 9.0}, kPi2, 0.5), std::sqrt(kPi2 - 8.0) + std::sqrt(kPi2 - 9.0), 1e-14);
  EXPECT_NEAR(riesz_mean({8.0, 9.0}, kPi2, 0.5), 2.2998, 1e-4);
  EXPECT_EQ(riesz_mean({}, kPi2, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(riesz_mean({kPi2 - 1.0}, kPi2, 1.0), 1.0);
}

TEST(BoundIntegral, WindowClosedForm) {
  for (double b : {0.6, 0.8, 1.0}) {
    for (double sigma : {0.5, 1.0, 1.5}) {
      const auto g = WaveguideGeometry::strip_window(0.3, 1.7, b);
      const double exact = 1.7 * std::pow(kPi2 - kPi2 / (4 * b * b), sigma + 0.5);
      const auto r = bound_integral(g, BoundSpec{sigma, 1, kPi2});
      EXPECT_NEAR(r.value, exact, 1e-12 * exact);
    }
  }
  const auto rep = lt_bound(WaveguideGeometry::strip_window(0.0, 1.0, 1.0), 0.5);
  EXPECT_NEAR(rep.integral, 0.75 * kPi2, 1e-12);
  EXPECT_NEAR(rep.bound, 3.0 * kPi2 / 8.0, 1e-12);
  EXPECT_NEAR(rep.bound, 3.7011, 1e-4);
}

TEST(BoundIntegral, RectangularBump) {
  const auto rep = lt_bound(WaveguideGeometry::strip_bump(Profile::rectangular(1.0, 0.0, 1.0)), 0.5);
  EXPECT_NEAR(rep.integral, 0.75 * kPi2, 1e-12);
  EXPECT_NEAR(rep.bound, 3.0 * kPi2 / 8.0, 1e-12);
  // Height 2.5: modes 1 to 3 of the width 3.5 section lie below pi^2.
  const auto multi = bound_integral(
      WaveguideGeometry::strip_bump(Profile::rectangular(2.5, 0.0, 1.0)), BoundSpec{1.0, 1, kPi2});
  double expect = 0.0;
  for (int j = 1; j <= 3; ++j) expect += std::pow(std::max(0.0, kPi2 - j * j * kPi2 / 12.25), 1.5);
  EXPECT_NEAR(multi.value, expect, 1e-12 * expect);
}

TEST(BoundIntegral, SmoothBumpMatchesDirectQuadrature) {
  for (double amp : {0.3, 1.5}) {
    const auto g = WaveguideGeometry::strip_bump(Profile::smooth_bump(amp, -1.0, 1.0));
    const auto r = bound_integral(g, BoundSpec{1.0, 1, kPi2});
    // Midpoint oracle on a fine grid of the multi-mode integrand.
    const int n = 200000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = -1.0 + (i + 0.5) * 2.0 / n;
      const double c = std::cos(kPi * x / 2.0);
      const double w = 1.0 + amp * c * c;
      for (int j = 1; j * kPi / w < kPi; ++j) s += std::pow(kPi2 - j * j * kPi2 / (w * w), 1.5);
    }
    s *= 2.0 / n;
    EXPECT_NEAR(r.value, s, 1e-7 * s);
  }
}

TEST(BoundIntegral, TubeAndFaberKrahnRoute) {
  const double j01 = bessel_zero(0, 1);
  const auto g = WaveguideGeometry::tube(Profile::rectangular(0.2, 0.0, 2.0));
  const BoundSpec spec{0.5, 1, g.threshold()};
  const double exact = 2.0 * j01 * j01 * (1.0 - 1.0 / 1.44);
  EXPECT_NEAR(bound_integral(g, spec).value, exact, 1e-12 * exact);
  EXPECT_NEAR(faber_krahn_bound_integral(g, spec).value, exact, 1e-12 * exact);
  EXPECT_NEAR(lt_bound(g, 0.5).bound, 0.5 * exact, 1e-12);
  const auto wide = WaveguideGeometry::tube(Profile::rectangular(std::sqrt(2.0) - 1.0, 0.0, 1.0));
  EXPECT_NEAR(faber_krahn_bound_integral(wide, spec).value, 0.5 * j01 * j01, 1e-12);
  EXPECT_NEAR(0.5 * j01 * j01, 2.8916, 1e-4);
  const auto too_wide = WaveguideGeometry::tube(Profile::rectangular(0.5, 0.0, 1.0));
  EXPECT_THROW(faber_krahn_bound_integral(too_wide, spec), ConfigError);
}

TEST(BoundIntegral, SmoothTubeRoutesAgree) {
  const auto g = WaveguideGeometry::tube(Profile::smooth_bump(0.3, -1.0, 1.0));
  const BoundSpec spec{1.0, 1, g.threshold()};
  const double a = bound_integral(g, spec).value;
  const double b = faber_krahn_bound_integral(g, spec).value;
  EXPECT_NEAR(a, b, 1e-10 * a);
}

TEST(BoundIntegral, UnperturbedIsZero) {
  const auto g = WaveguideGeometry::strip_bump(Profile::rectangular(0.0, 0.0, 1.0));
  const auto rep = lt_bound(g, 0.5);
  EXPECT_EQ(rep.integral, 0.0);
  EXPECT_EQ(rep.bound, 0.0);
}

TEST(BoundIntegral, MonotoneInProfile) {
  double prev = -1.0;
  for (double amp : {0.1, 0.4, 0.9, 1.2, 2.1}) {
    const auto g = WaveguideGeometry::strip_bump(Profile::smooth_bump(amp, 0.0, 2.0));
    const double v = bound_integral(g, BoundSpec{0.5, 1, kPi2}).value;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(WeakCoupling, PolynomialExamples) {
  const WeakCouplingMoments unit{1.0, 1.0, 1.0};
  EXPECT_NEAR(weak_coupling_lower(unit, 0.1, 2), kPi2 - kPi2 * kPi2 * 0.01, 1e-13);
  EXPECT_NEAR(weak_coupling_lower(unit, 0.1, 2), 8.8955, 1e-4);
  EXPECT_DOUBLE_EQ(weak_coupling_lower(unit, 0.0, 4), kPi2);
  const WeakCouplingMoments cos2{1.0, 0.75, 0.625};
  const double pi4 = kPi2 * kPi2;
  EXPECT_NEAR(weak_coupling_lower(cos2, 0.1, 3), kPi2 - pi4 * 0.01 + 3.0 * pi4 * 0.75 * 0.001, 1e-13);
  EXPECT_NEAR(weak_coupling_lower(cos2, 0.1, 3), 9.1147, 1e-4);
}

TEST(WeakCoupling, MatchesExpansionOfTheBound) {
  const Profile unit = Profile::smooth_bump(1.0, -1.0, 1.0);
  const auto m = profile_moments(unit, 3);
  const WeakCouplingMoments F{m[0], m[1], m[2]};
  std::vector<double> rem;
  for (double a : {0.02, 0.01}) {
    const auto g = WaveguideGeometry::strip_bump(Profile::smooth_bump(a, -1.0, 1.0));
    const double b = lt_bound(g, 0.5).bound;
    rem.push_back(std::fabs(kPi2 - b * b - weak_coupling_lower(F, a, 4)));
  }
  // The remainder is O(alpha^5).
  EXPECT_NEAR(std::log2(rem[0] / rem[1]), 5.0, 0.3);
}

TEST(StrongCoupling, Brackets) {
  const auto [lo, up] = bracket_bounds(4.0, 0.5);
  double expect = 0.0;
  for (int n = 1; n <= 3; ++n) expect += std::sqrt(kPi2 * (0.75 - n * n / 16.0));
  EXPECT_NEAR(lo, expect, 1e-12);
  EXPECT_NEAR(lo, 6.186, 1e-3);
  EXPECT_NEAR(up - lo, std::sqrt(0.75 * kPi2), 1e-12);
  EXPECT_EQ(bracket_bounds(2.0 / std::sqrt(3.0) * 0.999, 0.5).first, 0.0);
  EXPECT_GT(bracket_bounds(2.0 / std::sqrt(3.0) * 1.001, 0.5).first, 0.0);
}

TEST(StrongCoupling, WindowCoefficient) {
  EXPECT_NEAR(window_coupling_coefficient() * 64.0, 9.0, 1e-13);
  EXPECT_NEAR(window_coupling_lower(0.1), kPi2 - 9.0 / 64.0 * kPi2 * kPi2 * 0.01, 1e-12);
}

TEST(Scaling, SlackRatioIsScaleInvariant) {
  const auto g = WaveguideGeometry::strip_window(0.0, 1.0, 1.0);
  GridSpec spec;
  spec.h = 0.05;
  spec.gap_estimate = 0.2;
  const auto base = solve_on_grid(g, spec);
  for (double s : {0.5, 2.0}) {
    const auto gs = g.scaled(s);
    const auto sol = solve_on_grid(gs, spec.scaled(s));
    for (double sigma : {0.5, 1.0, 1.5}) {
      auto r0 = lt_bound(g, sigma);
      auto r1 = lt_bound(gs, sigma);
      attach_riesz_mean(r0, base.riesz_mean(sigma));
      attach_riesz_mean(r1, sol.riesz_mean(sigma));
      EXPECT_NEAR(r1.integral, r0.integral * std::pow(s, -2.0 * sigma), 1e-12 * r1.integral);
      EXPECT_NEAR(*r1.slack_ratio, *r0.slack_ratio, 1e-8);
    }
  }
}
