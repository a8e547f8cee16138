#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "thetalab/greens.hpp"

using namespace thetalab;

namespace {

double round_green(double t) { return 0.5 / std::sin(t / 2); }

// Independent route for any profile: every warped metric is u^4 sigma for the
// round metric sigma, via s = int dt/phi, tau = 2 atan(e^s), u^2 = phi / sin tau.
// Then G_P(t) = G_sigma(tau) / (u(0) u(t)) with u(0) = lim = exp(-int_0^... )
struct ConformalOracle {
  const WarpProfile& p;
  double t_mid;

  // s(t) = int_{t_mid}^t dt/phi
  double s(double t) const {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double x) { return 1.0 / p.phi(x); }, t_mid, t, 15, 1e-14);
  }
  double u2(double t) const {
    const double tau = 2 * std::atan(std::exp(s(t)));
    return p.phi(t) / std::sin(tau);
  }
  // u(0)^2 = lim phi/sin tau; near 0, phi ~ t and sin tau ~ 2 e^{s}
  double u2_at_P() const {
    const double e = 1e-6;
    // log t - s(t) converges as t -> 0 with O(t^2) error
    return 0.5 * std::exp(std::log(e) - s(e));
  }
  double G(double t) const {
    const double tau = 2 * std::atan(std::exp(s(t)));
    return round_green(tau) / std::sqrt(u2_at_P() * u2(t));
  }
};

}  // namespace

TEST(SolveGreen, RoundClosedForm) {
  auto p = round_profile(2048);
  auto G = solve_green(p, Pole::P);
  double err = 0.0;
  for (int i = 0; i <= 2048; ++i) {
    const double t = p.grid().node(i);
    if (t < 0.1 || t > pi - 0.1) continue;
    err = std::max(err, std::abs(G.field[i] - round_green(t)));
  }
  EXPECT_LT(err, 1e-8);
  EXPECT_NEAR(G.alpha0, 0.0, 1e-8);
  EXPECT_NEAR(green_at_opposite(G), 0.5, 1e-10);
  EXPECT_LT(green_residual(p, G, pi / 4, 3 * pi / 4), 1e-8);
  // off-grid evaluation
  for (double t : {0.01, 0.123, 1.7, 3.1}) {
    EXPECT_NEAR(G(t), round_green(t), 1e-9 * round_green(t));
    EXPECT_NEAR(G.derivative(t), -0.25 * std::cos(t / 2) / std::pow(std::sin(t / 2), 2),
                1e-8 * std::abs(round_green(t)) / t);
  }
  EXPECT_TRUE(std::isinf(G.field.values.front()));
  EXPECT_EQ(G.field.singular_order, -1);
}

TEST(SolveGreen, PoleQMirrorsP) {
  auto p = round_profile(512);
  auto Gp = solve_green(p, Pole::P), Gq = solve_green(p, Pole::Q);
  for (int i = 1; i < 512; ++i) EXPECT_NEAR(Gq.field[i], Gp.field[512 - i], 1e-12);
  EXPECT_NEAR(Gq(pi - 0.3), round_green(0.3), 1e-9);
  EXPECT_NEAR(Gq.derivative(pi - 0.3), 0.25 * std::cos(0.15) / std::pow(std::sin(0.15), 2), 1e-8);
}

TEST(SolveGreen, PinchedAgainstConformalOracle) {
  for (double l : {0.5, 2.0}) {
    auto p = pinched_profile(l, 1024);
    auto G = solve_green(p, Pole::P);
    ConformalOracle o{p, pi / 2};
    for (double t : {0.2, 0.8, pi / 2, 2.5, 3.0}) {
      EXPECT_NEAR(G(t), o.G(t), 1e-7 * o.G(t)) << l << " " << t;
    }
    // every profile is conformally round, so the mass term vanishes
    EXPECT_NEAR(G.alpha0, 0.0, 1e-7) << l;
    for (int i = 1; i <= 1024; ++i) EXPECT_GT(G.field[i], 0.0);
  }
}

TEST(SolveGreen, SymmetryOfGreensFunction) {
  auto p = table_profile(std::string(THETALAB_TEST_DATA) + "/bumpy_profile.csv", 1024);
  const double a = green_at_opposite(solve_green(p, Pole::P));
  const double b = green_at_opposite(solve_green(reverse(p), Pole::P));
  const double c = green_at_opposite(solve_green(p, Pole::Q));
  EXPECT_NEAR(a, b, 1e-8);
  EXPECT_NEAR(b, c, 1e-10);
}

TEST(SolveGreen, HomothetyScalesOpposite) {
  for (double c : {0.5, 2.0}) {
    auto G = solve_green(homothety(round_profile(1024), c), Pole::P);
    EXPECT_NEAR(green_at_opposite(G), 0.5 / c, 1e-9);
  }
}

TEST(SolveGreen, ResidualShrinksUnderRefinement) {
  double prev = 0.0;
  for (int n : {256, 512, 1024}) {
    auto p = pinched_profile(1.0, n);
    const double r = green_residual(p, solve_green(p, Pole::P), pi / 4, 3 * pi / 4);
    if (prev > 0.0) {
      EXPECT_LT(r, prev / 4);
    }
    prev = r;
  }
}

TEST(SolveGreen, FitWindowsAgree) {
  double prev = 0.0;
  for (int n : {256, 512, 1024}) {
    auto p = pinched_profile(1.0, n);
    GreenOptions a, b;
    a.fit_lo = 2;
    a.fit_hi = 6;
    a.fit_degree = 3;
    b.fit_lo = 4;
    b.fit_hi = 12;
    b.fit_degree = 3;
    const double diff = std::abs(solve_green(p, Pole::P, a).alpha0 - solve_green(p, Pole::P, b).alpha0);
    if (prev > 1e-11) {
      EXPECT_LT(diff, prev / 3) << n;
    }
    prev = diff;
  }
}

TEST(ConformalTransport, Identity) {
  auto p = pinched_profile(1.0, 512);
  auto G = solve_green(p, Pole::P);
  auto H = conformal_transport(G, CosineSeries{{1.0}}, p);
  for (int i = 1; i <= 512; ++i) EXPECT_NEAR(H.field[i], G.field[i], 1e-12 * G.field[i]);
  EXPECT_NEAR(H.alpha0, G.alpha0, 1e-15);
}

TEST(ConformalTransport, Constant) {
  auto p = round_profile(512);
  auto G = solve_green(p, Pole::P);
  auto H = conformal_transport(G, CosineSeries{{2.0}}, p);
  for (int i = 1; i <= 512; ++i) EXPECT_NEAR(H.field[i], G.field[i] / 4, 1e-12);
  EXPECT_NEAR(H.T(), 4 * pi, 1e-14);
}

TEST(ConformalTransport, MatchesDirectSolve) {
  auto p = round_profile(1024);
  CosineSeries w{{1.0, 0.2}};
  for (Pole pole : {Pole::P, Pole::Q}) {
    auto H = conformal_transport(solve_green(p, pole), w, p);
    auto q = conformal(p, w);
    auto D = solve_green(q, pole);
    double err = 0.0;
    for (int i = 1; i < 1024; ++i) {
      const double s = q.grid().node(i);
      if (s < 0.1 || s > q.T() - 0.1) continue;
      err = std::max(err, std::abs(H.field[i] - D.field[i]));
    }
    EXPECT_LT(err, 1e-8);
    EXPECT_NEAR(H.alpha0, D.alpha0, 1e-8);
    EXPECT_NEAR(H.opposite, D.opposite, 1e-9);
    EXPECT_NEAR(H(0.05), D(0.05), 1e-8 * D(0.05));
  }
  EXPECT_THROW(conformal_transport(solve_green(p, Pole::P), CosineSeries{{0.1, 0.5}}, p), Error);
}

TEST(AlphaField, RoundClosedForm) {
  auto p = round_profile(512);
  auto G = solve_green(p, Pole::P);
  auto a = alpha_field(G);
  EXPECT_NEAR(a[0], 0.0, 1e-8);
  for (int i = 1; i <= 512; ++i) {
    const double t = p.grid().node(i);
    EXPECT_NEAR(a[i], round_green(t) - cutoff(t, pi) / t, 1e-9);
  }
  EXPECT_EQ(cutoff(0.1, pi), 1.0);
  EXPECT_EQ(cutoff(1.0, pi), 0.0);
}
