#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "thetalab/horizons.hpp"
#include "thetalab/oracles.hpp"

namespace thetalab {

/// 1 + three random cosine modes of size <= amp; positive for amp < 1/3.
inline CosineSeries random_conformal_factor(std::mt19937_64& rng, double amp = 0.1) {
  std::uniform_real_distribution<double> U(-amp, amp);
  CosineSeries w;
  w.coeffs = {1.0, U(rng), U(rng), U(rng)};
  return w;
}

/// max over nodes of |L' f - w^-5 L (w f)| for g' = w^4 g, the left side by
/// finite differences on the conformal grid, the right side from exact jets.
inline double covariance_residual(const WarpProfile& base, const CosineSeries& w, const CosineSeries& f) {
  auto q = conformal(base, w);
  const auto& m = dynamic_cast<const models::Conformal&>(q.model());
  auto fs = sample(q, [&](double s) { return f(m.base_coordinate(s)); });
  auto lhs = apply_L(q, fs);
  double res = 0.0;
  for (int i = 1; i < q.n(); ++i) {
    const double t = m.base_coordinate(q.grid().node(i));
    const double v = w(t) * f(t);
    const double v1 = w.d1(t) * f(t) + w(t) * f.d1(t);
    const double v2 = w.d2(t) * f(t) + 2 * w.d1(t) * f.d1(t) + w(t) * f.d2(t);
    res = std::max(res, std::abs(lhs[i] - apply_L_at(base.jet(t), v, v1, v2) / std::pow(w(t), 5)));
  }
  return res;
}

/// Round blow-up plus k (1.5 - 2 cos 2t + 0.5 cos 4t) + a cos t: a synthetic
/// conformal factor with three symmetric horizons and Theta > 0.
inline BlownUpMetric three_horizon_metric(int n, double a = 0.05, double k = 0.2) {
  auto bm = blowup_two(round_profile(n));
  return BlownUpMetric(bm.base(), bm.Gp(), bm.Gq(), 1.0, CosineSeries{{1.5 * k, a, -2 * k, 0.0, 0.5 * k}});
}

/// The same metric seen from the other pole.
inline BlownUpMetric three_horizon_metric_reversed(int n, double a = 0.05, double k = 0.2) {
  auto p = reverse(round_profile(n));
  return BlownUpMetric(p, solve_green(p, Pole::P), solve_green(p, Pole::Q), 1.0,
                       CosineSeries{{1.5 * k, -a, -2 * k, 0.0, 0.5 * k}});
}

struct PropertyOptions {
  int n = 1024;
  unsigned seed = 42;
  int factors = 5;
};

/// Conformal invariance, p-q symmetry and vanishing on the round sphere of
/// Theta, plus covariance of L and scale invariance.
inline OracleReport property_suite(const WarpProfile& profile, const PropertyOptions& opts = {}) {
  detail::OracleSuite s;
  s.rep.n = opts.n;
  std::mt19937_64 rng(opts.seed);
  const auto p = profile.with_grid(opts.n);

  s.guarded("theta_conformal_invariance", [&] {
    const auto bm = blowup_two(p);
    const auto th = theta(bm);
    double worst = 0.0;
    bool same = true;
    for (int i = 0; i < opts.factors; ++i) {
      const auto w = random_conformal_factor(rng);
      const auto tw = theta(conformal_blowup(bm, w));
      worst = std::max(worst, std::abs(tw.theta - th.theta));
      same = same && tw.degenerate == th.degenerate;
    }
    s.add("theta_conformal_invariance", "PAPER", worst, 0.0, 1e-6, 0,
          std::to_string(opts.factors) + " random radial factors, max |dTheta|");
    s.add("theta_conformal_degeneracy_agrees", "PAPER", same ? 1.0 : 0.0, 1.0, 0.0);
  });
  s.guarded("theta_pq_symmetry", [&] {
    const double a = theta(blowup_two(p)).theta, b = theta(blowup_two(reverse(p))).theta;
    s.add("theta_pq_symmetry", "PAPER", a, b, 1e-10);
    const double c = theta(three_horizon_metric(opts.n)).theta;
    const double d = theta(three_horizon_metric_reversed(opts.n)).theta;
    s.add("theta_pq_symmetry_synthetic", "DERIVED", c, d, 1e-10 * std::max(1.0, c), 0,
          "three-horizon synthetic factor, Theta > 0");
  });
  s.guarded("theta_round_zero", [&] {
    const auto th = theta(blowup_two(round_profile(opts.n)));
    s.add("theta_round_zero", "PAPER", th.theta, 0.0, 0.0);
    s.add("theta_round_degenerate", "PAPER", th.degenerate ? 1.0 : 0.0, 1.0, 0.0);
  });
  s.guarded("theta_scale_invariance", [&] {
    std::uniform_real_distribution<double> C(0.2, 5.0);
    const auto bm = three_horizon_metric(opts.n);
    const double t0 = theta(bm).theta;
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(theta(bm.scaled(C(rng))).theta - t0));
    s.add("theta_scale_invariance", "PAPER", worst, 0.0, 1e-12 * t0);
  });
  s.guarded("L_conformal_covariance", [&] {
    const auto w = random_conformal_factor(rng, 0.15), f = random_conformal_factor(rng, 0.5);
    const double r1 = covariance_residual(p.with_grid(opts.n / 2), w, f), r2 = covariance_residual(p, w, f);
    const double nn = static_cast<double>(opts.n) * opts.n;
    s.add("L_conformal_covariance", "DERIVED", r2, 0.0, 10.0 / nn, 0, "max residual, tolerance 10 n^-2");
    const double order = r2 > 1e-9 ? std::log2(r1 / r2) : 2.0;
    s.add("L_conformal_covariance_order", "DERIVED", std::min(order, 2.0), 2.0, 1e-12, 0,
          "log2(res(n/2)/res(n)), capped at 2");
  });
  return s.rep;
}

}  // namespace thetalab
