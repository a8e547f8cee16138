#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "thetalab/experiments.hpp"

using namespace thetalab;

TEST(AlphaMean, RoundClosedForm) {
  auto p = round_profile(1024);
  auto G = solve_green(p, Pole::P);
  // alpha = csc(t/2)/2 - eta(t)/t, averaged against 4 pi sin^2 t over 2 pi^2
  auto f = [](double t) {
    const double a = t < 1e-8 ? 0.0 : 0.5 / std::sin(t / 2) - cutoff(t, pi) / t;
    return a * 4 * pi * std::sin(t) * std::sin(t) / (2 * pi * pi);
  };
  double ref = 0.0;
  // split at the cutoff's kinks
  for (auto [a, b] : {std::pair{0.0, pi / 8}, {pi / 8, pi / 4}, {pi / 4, pi}}) {
    ref += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
  }
  EXPECT_NEAR(alpha_mean(p, G), ref, 1e-8);
  EXPECT_GT(ref, 0.5);  // cutoff-dependent constant, not zero
}

TEST(AlphaMean, ScalesWithW) {
  auto bm = blowup_two(pinched_profile(1.0, 512));
  EXPECT_NEAR(alpha_mean(bm.scaled(2.5)), 2.5 * alpha_mean(bm), 1e-13);
}

TEST(AlphaMean, Reversal) {
  auto p = table_profile(std::string(THETALAB_TEST_DATA) + "/bumpy_profile.csv", 512);
  auto r = reverse(p);
  EXPECT_NEAR(alpha_mean(r, solve_green(r, Pole::P)), alpha_mean(p, solve_green(p, Pole::Q)), 1e-10);
}

TEST(FamilySweep, LambdaZeroIsRound) {
  auto rows = family_sweep("pinched", {0.0, 1.0});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].theta, 0.0);
  EXPECT_NEAR(rows[0].mu_sym, mu_sigma(), 1e-6 * mu_sigma());
  EXPECT_NEAR(rows[0].paper_mass_p, 0.5, 1e-8);
  EXPECT_NEAR(rows[0].sigma_area, 16 * pi, 1e-8);
  EXPECT_NE(std::find(rows[0].flags.begin(), rows[0].flags.end(), "degenerate"), rows[0].flags.end());
}

TEST(FamilySweep, RowsReproducible) {
  auto rows = family_sweep("pinched", {0.5, 2.0});
  for (const auto& r : rows) {
    const auto again = sweep_row("pinched", r.lambda);
    EXPECT_NEAR(again.mu_sym, r.mu_sym, 1e-10);
    EXPECT_NEAR(again.theta, r.theta, 1e-10);
    EXPECT_NEAR(again.alpha_mean, r.alpha_mean, 1e-10);
    EXPECT_EQ(again.flags, r.flags);
  }
}

TEST(FamilySweep, Errors) {
  EXPECT_THROW(family_sweep("pinched", {1.0, 0.5}), Error);
  EXPECT_THROW(family_sweep("pinched", {}), Error);
  EXPECT_THROW(family_sweep("nope", {0.0}), Error);
  // bad rows do not stop the sweep
  auto rows = family_sweep("pinched", {-1.0, 0.0});
  EXPECT_EQ(rows[0].flag_string(), "error:invalid_argument");
  EXPECT_EQ(rows[1].theta, 0.0);
}

TEST(FamilySweep, SummaryAndCsv) {
  auto rows = family_sweep("pinched", {0.0, 1.0, 2.0});
  auto s = summarize(rows);
  EXPECT_NEAR(s.reduction_factor, 1.0, 1e-6);
  EXPECT_EQ(s.monotone_check, "skipped: mu_sym stays above 1");
  const auto csv = sweep_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "lambda,mu_sym,theta,paper_mass_p,paper_mass_q,alpha_mean,sigma_area,omega_volume,bound_diagnostic,flags");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(ScalingFit, ExactPowerLaw) {
  std::vector<double> a, t;
  for (double x : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    a.push_back(x);
    t.push_back(2 * x * x * x);
  }
  auto f = scaling_fit(a, t);
  EXPECT_NEAR(f.exponent, 3.0, 1e-10);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  EXPECT_EQ(f.used, 5u);
}

TEST(ScalingFit, Asymptotic) {
  double prev = 0.0;
  for (double s : {10.0, 100.0, 1000.0}) {
    std::vector<double> a, t;
    for (double x : {1.0, 1.5, 2.0, 2.5}) {
      a.push_back(s * x);
      t.push_back(std::pow(s * x, 3) * (1 + 1 / (s * x)));
    }
    const double e = scaling_fit(a, t).exponent;
    if (prev > 0.0) {
      EXPECT_LT(std::abs(e - 3.0), std::abs(prev - 3.0) / 5);
    }
    prev = e;
  }
}

TEST(ScalingFit, InsufficientRows) {
  try {
    scaling_fit({1.0, 2.0, 3.0, 4.0}, {1.0, 0.0, 2.0, 3.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::insufficient_data);
  }
  // degenerate real rows carry Theta = 0
  EXPECT_THROW(scaling_fit(family_sweep("pinched", {0.0, 1.0, 2.0, 3.0})), Error);
}
