#include <gtest/gtest.h>

#include <cmath>

#include "thetalab/blowup.hpp"

using namespace thetalab;

namespace {
double round_W(double t) { return 0.5 / std::sin(t / 2) + 0.5 / std::cos(t / 2); }
}  // namespace

TEST(BlowupTwo, RoundClosedForm) {
  auto bm = blowup_two(round_profile(1024));
  EXPECT_NEAR(bm.W(pi / 2), std::sqrt(2.0), 1e-10);
  for (double t : {0.05, 0.7, 2.0, 3.1}) EXPECT_NEAR(bm.W(t), round_W(t), 1e-9 * round_W(t));
  EXPECT_LT(scal_flat_residual(bm, pi / 4, 3 * pi / 4), 1e-6);
  EXPECT_TRUE(std::isinf(bm.W_field().values.front()));
  EXPECT_TRUE(std::isinf(bm.W_field().values.back()));
  EXPECT_NEAR(bm.W(1e-4) * 1e-4, 1.0, 1e-4);
  EXPECT_NEAR(bm.W(pi - 1e-4) * 1e-4, 1.0, 1e-4);
}

TEST(BlowupTwo, ScalFlatUnderRefinement) {
  double prev = 0.0;
  for (int n : {256, 512, 1024}) {
    const double r = scal_flat_residual(blowup_two(pinched_profile(1.0, n)), pi / 4, 3 * pi / 4);
    if (prev > 0.0) {
      EXPECT_LT(r, prev / 4) << n;
    }
    prev = r;
  }
}

TEST(BlowupTwo, Reversal) {
  auto p = table_profile(std::string(THETALAB_TEST_DATA) + "/bumpy_profile.csv", 512);
  auto a = blowup_two(p), b = blowup_two(reverse(p));
  for (double t : {0.1, 1.0, 2.0, 3.0}) EXPECT_NEAR(b.W(t), a.W(pi - t), 1e-9 * a.W(pi - t));
}

TEST(SphereArea, Round) {
  auto bm = blowup_two(round_profile(1024));
  EXPECT_NEAR(sphere_area(bm, pi / 2), 16 * pi, 1e-8);
  EXPECT_NEAR(sphere_area(bm, 1e-4) * 1e-8 / (4 * pi), 1.0, 1e-3);
  double prev = inf;
  bool rising = false;
  for (int i = 1; i < 1024; ++i) {
    const double a = sphere_area(bm, pi * i / 1024);
    if (a > prev) rising = true;
    if (rising) {
      EXPECT_GE(a, prev);
    } else {
      EXPECT_LT(a, prev);
    }
    prev = a;
  }
  EXPECT_THROW(sphere_area(bm, 0.0), Error);
}

TEST(ShellVolume, Basics) {
  auto bm = blowup_two(round_profile(1024));
  EXPECT_EQ(shell_volume(bm, 1.0, 1.0), 0.0);
  const double h = 1e-3;
  EXPECT_NEAR(shell_volume(bm, pi / 2 - h, pi / 2 + h) / (64 * pi * h), 1.0, 1e-5);
  const double v13 = shell_volume(bm, 0.4, 2.2);
  EXPECT_NEAR(v13, shell_volume(bm, 0.4, 1.3) + shell_volume(bm, 1.3, 2.2), 1e-12 * v13);
  EXPECT_THROW(shell_volume(bm, 2.0, 1.0), Error);
  EXPECT_THROW(shell_volume(bm, 0.0, 1.0), Error);
}

TEST(ScaleInvariance, AreaAndVolume) {
  auto bm = blowup_two(pinched_profile(1.0, 512));
  for (double c : {0.5, 3.0}) {
    auto s = bm.scaled(c);
    EXPECT_NEAR(sphere_area(s, 0.9), std::pow(c, 4) * sphere_area(bm, 0.9),
                1e-12 * sphere_area(s, 0.9));
    EXPECT_NEAR(shell_volume(s, 0.7, 2.0), std::pow(c, 6) * shell_volume(bm, 0.7, 2.0),
                1e-12 * shell_volume(s, 0.7, 2.0));
  }
}

TEST(MeanCurvatureBlown, RoundAndFirstVariation) {
  auto bm = blowup_two(round_profile(1024));
  EXPECT_NEAR(mean_curvature_blown(bm, pi / 2), 0.0, 1e-10);
  // with normal +d/dt the spheres shrink toward the equator from the P side
  for (double t : {0.01, 0.5, 1.5}) EXPECT_LT(mean_curvature_blown(bm, t), 0.0);
  for (double t : {1.65, 2.5, 3.1}) EXPECT_GT(mean_curvature_blown(bm, t), 0.0);
  for (auto p : {round_profile(1024), pinched_profile(2.0, 1024)}) {
    auto b = blowup_two(p);
    for (double t : {0.3, 1.2, 2.6}) {
      const double e = 1e-5;
      const double dA = (sphere_area(b, t + e) - sphere_area(b, t - e)) / (2 * e);
      const double w = b.W(t);
      EXPECT_NEAR(dA, mean_curvature_blown(b, t) * w * w * sphere_area(b, t),
                  1e-7 * std::max(1.0, std::abs(dA)));
    }
  }
}

TEST(Masses, Round) {
  auto bm = blowup_two(round_profile(1024));
  auto m = masses(bm);
  EXPECT_NEAR(m.paper_mass_p, 0.5, 1e-8);
  EXPECT_NEAR(m.paper_mass_q, 0.5, 1e-8);
  EXPECT_NEAR(m.fit_mass_p, 1.0, 1e-8);
  EXPECT_NEAR(m.fit_mass_q, 1.0, 1e-8);
  EXPECT_NEAR(16 * pi * m.fit_mass_p * m.fit_mass_p / sphere_area(bm, pi / 2), 1.0, 1e-6);
}

TEST(Masses, RatioTwoAndSymmetry) {
  auto m = masses(blowup_two(pinched_profile(1.0, 1024)));
  EXPECT_NEAR(m.paper_mass_p, m.paper_mass_q, 1e-10);
  EXPECT_NEAR(m.ratio_p, 2.0, 1e-6);
  EXPECT_NEAR(m.ratio_q, 2.0, 1e-6);
}
