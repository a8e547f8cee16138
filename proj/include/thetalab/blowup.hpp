#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "thetalab/conformal_laplacian.hpp"
#include "thetalab/greens.hpp"
#include "thetalab/warped_geometry.hpp"

namespace thetalab {

struct MassReport {
  double paper_mass_p = 0.0;
  double paper_mass_q = 0.0;
  double fit_mass_p = 0.0;
  double fit_mass_q = 0.0;
  double fit_residual = 0.0;
  // fit_mass / paper_mass, expected 2 with our Green normalization
  double ratio_p = 0.0;
  double ratio_q = 0.0;
};

/// g_{p,q} = W^4 g with W = c (G_p + G_q + extra). `extra` is zero for the
/// genuine blow-up; a nonzero smooth term gives a synthetic (non scalar-flat)
/// conformal factor used to exercise the horizon machinery on shapes the
/// warped family never produces.
class BlownUpMetric {
 public:
  BlownUpMetric(WarpProfile base, GreenFunction Gp, GreenFunction Gq, double scale = 1.0,
                std::optional<CosineSeries> extra = std::nullopt)
      : base_(std::move(base)), Gp_(std::move(Gp)), Gq_(std::move(Gq)), scale_(scale),
        extra_(std::move(extra)) {
    if (!(scale_ > 0.0)) throw Error(ErrorKind::invalid_argument, "blowup: scale must be > 0");
    if (extra_) extra_->L = base_.T();
    const int n = base_.n();
    W_ = RadialField{base_.grid(), std::vector<double>(base_.grid().size()), -1, Pole::P};
    W1_ = W_;
    for (int i = 0; i <= n; ++i) {
      if (i == 0 || i == n) {
        W_.values[i] = inf;
        W1_.values[i] = i == 0 ? -inf : inf;
      } else {
        const double t = base_.grid().node(i);
        W_.values[i] = W(t);
        W1_.values[i] = dW(t);
      }
    }
  }

  const WarpProfile& base() const { return base_; }
  const GreenFunction& Gp() const { return Gp_; }
  const GreenFunction& Gq() const { return Gq_; }
  double scale() const { return scale_; }
  bool synthetic() const { return extra_.has_value(); }
  double T() const { return base_.T(); }

  /// Nodal W (both pole entries +inf) and W'.
  const RadialField& W_field() const { return W_; }
  const RadialField& W_d1() const { return W1_; }

  double W(double t) const {
    double w = Gp_(t) + Gq_(t);
    if (extra_) w += (*extra_)(t);
    return scale_ * w;
  }

  double dW(double t) const {
    double w = Gp_.derivative(t) + Gq_.derivative(t);
    if (extra_) w += extra_->d1(t);
    return scale_ * w;
  }

  BlownUpMetric scaled(double c) const {
    return BlownUpMetric(base_, Gp_, Gq_, scale_ * c, extra_);
  }

  void check_t(double t, const char* who) const {
    if (!(t > 0.0 && t < T())) throw Error(ErrorKind::invalid_argument, std::string(who) + ": t outside (0,T)");
  }

 private:
  WarpProfile base_;
  GreenFunction Gp_, Gq_;
  double scale_;
  std::optional<CosineSeries> extra_;
  RadialField W_, W1_;
};

inline BlownUpMetric blowup_two(const WarpProfile& p, const GreenOptions& opts = {}) {
  if (!yamabe_positive(p)) {
    throw Error(ErrorKind::nonpositive_yamabe, "blowup_two: symmetric Yamabe constant <= 0");
  }
  GreenOptions o = opts;
  o.check_yamabe = false;
  return BlownUpMetric(p, solve_green(p, Pole::P, o), solve_green(p, Pole::Q, o));
}

/// Area 4 pi phi^2 W^4 of the t-sphere.
inline double sphere_area(const BlownUpMetric& bm, double t) {
  bm.check_t(t, "sphere_area");
  const double f = bm.base().phi(t), w = bm.W(t);
  return 4.0 * pi * f * f * std::pow(w, 4);
}

/// Volume of the shell between the t1- and t2-spheres. Seven-point Gauss on
/// each grid cell: W is a piecewise quintic there, so cells are the natural
/// panels.
inline double shell_volume(const BlownUpMetric& bm, double t1, double t2) {
  bm.check_t(t1, "shell_volume");
  bm.check_t(t2, "shell_volume");
  if (t2 < t1) throw Error(ErrorKind::invalid_argument, "shell_volume: t2 < t1");
  if (t1 == t2) return 0.0;
  auto f = [&](double t) {
    const double r = bm.base().phi(t), w = bm.W(t);
    return 4.0 * pi * r * r * std::pow(w, 6);
  };
  using Gauss = boost::math::quadrature::gauss<double, 7>;
  const auto& g = bm.base().grid();
  const double h = g.h();
  int k = std::max(0, static_cast<int>(std::floor(t1 / h)));
  double sum = 0.0, a = t1;
  while (a < t2) {
    const double b = std::min(t2, k + 1 >= g.n ? g.T : g.node(k + 1));
    if (b > a) sum += Gauss::integrate(f, a, b);
    a = std::max(a, b);
    ++k;
  }
  return sum;
}

/// Trace mean curvature of the t-sphere in W^4 g, normal +d/dt:
/// W^-2 (2 phi'/phi) + 4 W^-3 W'.
inline double mean_curvature_blown(const BlownUpMetric& bm, double t) {
  bm.check_t(t, "mean_curvature_blown");
  const auto j = bm.base().jet(t);
  const double w = bm.W(t);
  return 2.0 * j.d1 / j.phi / (w * w) + 4.0 * bm.dW(t) / (w * w * w);
}

/// Scale-free version H sqrt(A / 4 pi); equals -2 .. 2 for round spheres.
inline double normalized_mean_curvature(const BlownUpMetric& bm, double t) {
  return mean_curvature_blown(bm, t) * std::sqrt(sphere_area(bm, t) / (4.0 * pi));
}

/// max over nodes in [a, b] of |W^-5 L W|, the scalar curvature of g_{p,q}.
inline double scal_flat_residual(const BlownUpMetric& bm, double a, double b) {
  const auto& p = bm.base();
  const auto scal = scalar_curvature(p);
  const auto& W = bm.W_field().values;
  const double h = p.grid().h();
  double res = 0.0;
  for (int i = 2; i <= p.n() - 2; ++i) {
    const double t = p.grid().node(i);
    if (t < a || t > b) continue;
    const double w1 = fd_first(W, i, h), w2 = fd_second(W, i, h);
    const double LW = 8.0 * (-w2 - 2.0 * p.d1_nodes()[i] / p.phi_nodes()[i] * w1) + scal[i] * W[i];
    res = std::max(res, std::abs(LW) / std::pow(W[i], 5));
  }
  return res;
}

namespace detail {

// least-squares fit of d W(d) = c0 + c1 d + ... near a pole; returns (c0, c1,
// sup residual)
inline std::array<double, 3> end_fit(const BlownUpMetric& bm, Pole pole, int lo = 2, int hi = 14,
                                     int degree = 6) {
  const auto& g = bm.base().grid();
  const double h = g.h(), scale = hi * h;
  const int m = hi - lo + 1;
  Eigen::MatrixXd V(m, degree + 1);
  Eigen::VectorXd y(m);
  for (int r = 0; r < m; ++r) {
    const int k = lo + r;
    const double d = k * h;
    const double t = pole == Pole::P ? d : g.T - d;
    for (int c = 0; c <= degree; ++c) V(r, c) = std::pow(d / scale, c);
    y[r] = d * bm.W(t);
  }
  const Eigen::VectorXd c = V.colPivHouseholderQr().solve(y);
  const double res = (V * c - y).cwiseAbs().maxCoeff();
  return {c[0], c[1] / scale, res};
}

}  // namespace detail

/// Masses of the two ends: the sum alpha_p(p) + G_q(p), and the Schwarzschild
/// fit d W = 1 + (m/2) d + O(d^2) near each pole.
inline MassReport masses(const BlownUpMetric& bm) {
  MassReport r;
  r.paper_mass_p = bm.Gp().alpha0 + green_at_opposite(bm.Gq());
  r.paper_mass_q = bm.Gq().alpha0 + green_at_opposite(bm.Gp());
  const auto fp = detail::end_fit(bm, Pole::P), fq = detail::end_fit(bm, Pole::Q);
  // normalize by the leading coefficient so a rescaled W fits the same form
  r.fit_mass_p = 2.0 * fp[1] / fp[0];
  r.fit_mass_q = 2.0 * fq[1] / fq[0];
  r.fit_residual = std::max(fp[2], fq[2]);
  r.ratio_p = r.fit_mass_p / r.paper_mass_p;
  r.ratio_q = r.fit_mass_q / r.paper_mass_q;
  return r;
}

/// Blow-up of w^4 g built from the Green's functions of g.
inline BlownUpMetric conformal_blowup(const BlownUpMetric& bm, const CosineSeries& w) {
  auto q = conformal(bm.base(), w);
  return BlownUpMetric(q, conformal_transport(bm.Gp(), w, bm.base()),
                       conformal_transport(bm.Gq(), w, bm.base()), bm.scale());
}

}  // namespace thetalab
