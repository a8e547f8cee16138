#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/interpolators/quintic_hermite.hpp>
#include <boost/numeric/odeint.hpp>

#include "thetalab/conformal_laplacian.hpp"
#include "thetalab/error.hpp"
#include "thetalab/grid.hpp"
#include "thetalab/warped_geometry.hpp"

namespace thetalab {

struct GreenOptions {
  double abs_tol = 1e-14;
  double rel_tol = 1e-13;
  // least-squares window for t G(t), in grid steps
  int fit_lo = 2;
  int fit_hi = 14;
  int fit_degree = 6;
  bool check_yamabe = true;
};

/// Green's function of L = 8 Delta + Scal with pole at P or Q, normalized so
/// that G = 1/d + alpha + O(d), d the distance to the pole.
class GreenFunction {
 public:
  Pole pole = Pole::P;
  RadialField field;
  double alpha0 = 0.0;    // alpha_p(p)
  double opposite = 0.0;  // G at the other pole
  double c2 = 0.0;        // next coefficient of d G

  GreenFunction() = default;

  /// G at a point of (0, T].
  double operator()(double t) const {
    const double d = distance(t);
    return interp_->operator()(clamp_d(d)) / d;
  }

  /// dG/dt.
  double derivative(double t) const {
    const double d = distance(t), x = clamp_d(d);
    const double v = (*interp_)(x), v1 = interp_->prime(x);
    const double dGdd = (v1 - v / d) / d;
    return pole == Pole::P ? dGdd : -dGdd;
  }

  /// d G(d) as a function of the distance d to the pole, and its derivative.
  double lead_removed(double d) const { return (*interp_)(clamp_d(d)); }
  double lead_removed_prime(double d) const { return interp_->prime(clamp_d(d)); }

  double distance(double t) const { return pole == Pole::P ? t : T_ - t; }
  double T() const { return T_; }
  const Grid& grid() const { return field.grid; }

  /// Builds the function from nodal G, dG/dd and d^2G/dd^2 in the distance
  /// variable (index 0 is the pole).
  static GreenFunction assemble(Pole pole, const Grid& grid, const std::vector<double>& G,
                                const std::vector<double>& G1, const std::vector<double>& G2,
                                double alpha0, double c2) {
    const int n = grid.n;
    GreenFunction g;
    g.pole = pole;
    g.T_ = grid.T;
    g.alpha0 = alpha0;
    g.c2 = c2;
    g.opposite = G[n];
    std::vector<double> x(n + 1), v(n + 1), v1(n + 1), v2(n + 1);
    for (int i = 0; i <= n; ++i) {
      const double d = grid.node(i);
      x[i] = d;
      if (i == 0) {
        v[i] = 1.0;
        v1[i] = alpha0;
        v2[i] = 2.0 * c2;
      } else {
        v[i] = d * G[i];
        v1[i] = G[i] + d * G1[i];
        v2[i] = 2.0 * G1[i] + d * G2[i];
      }
    }
    g.interp_ = std::make_shared<Interp>(std::move(x), std::move(v), std::move(v1), std::move(v2));
    g.field = RadialField{grid, std::vector<double>(grid.size()), -1, pole};
    for (int i = 0; i <= n; ++i) {
      const int j = pole == Pole::P ? i : n - i;
      g.field.values[j] = i == 0 ? inf : G[i];
    }
    return g;
  }

 private:
  using Interp = boost::math::interpolators::quintic_hermite<std::vector<double>>;

  double clamp_d(double d) const { return std::clamp(d, 0.0, T_); }

  double T_ = 0.0;
  std::shared_ptr<Interp> interp_;
};

namespace detail {

// Solves for the solution regular at Q, scaled so u(T) = 1, and returns u,
// u' at every node with t in (0, T].
inline void regular_at_Q(const WarpProfile& p, const GreenOptions& opts, std::vector<double>& u,
                         std::vector<double>& du) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;
  const int n = p.n();
  const double T = p.T(), h = p.grid().h();
  const double S0 = scalar_curvature(p).values.back();
  const double s0 = std::min(4.0 * h, 2e-3);
  const double c2 = S0 / 48.0;
  u.assign(n + 1, 0.0);
  du.assign(n + 1, 0.0);
  u[n] = 1.0;
  du[n] = 0.0;

  auto rhs = [&p](const State& x, State& dx, double t) {
    const auto j = p.jet(t);
    dx[0] = x[1];
    dx[1] = -2.0 * j.d1 / j.phi * x[1] + scalar_curvature_at(j) / 8.0 * x[0];
  };
  const double t0 = T - s0;
  const State start{1.0 + c2 * s0 * s0, -2.0 * c2 * s0};

  std::vector<double> back{t0}, fwd{t0};
  std::vector<int> back_idx{-1}, fwd_idx{-1};
  for (int i = n - 1; i >= 1; --i) {
    const double t = p.grid().node(i);
    if (t < t0) {
      back.push_back(t);
      back_idx.push_back(i);
    } else if (t > t0) {
      fwd.insert(fwd.begin() + 1, t);
      fwd_idx.insert(fwd_idx.begin() + 1, i);
    } else {
      u[i] = start[0];
      du[i] = start[1];
    }
  }
  auto run = [&](const std::vector<double>& times, const std::vector<int>& idx, double dt) {
    if (times.size() < 2) return;
    State x = start;
    std::size_t k = 0;
    auto obs = [&](const State& s, double) {
      if (idx[k] >= 0) {
        u[idx[k]] = s[0];
        du[idx[k]] = s[1];
      }
      ++k;
    };
    try {
      odeint::integrate_times(
          odeint::make_controlled(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State>()),
          rhs, x, times.begin(), times.end(), dt, obs);
    } catch (const std::exception& e) {
      throw Error(ErrorKind::integration_failure, std::string("green ODE: ") + e.what());
    }
  };
  run(back, back_idx, -0.25 * h);
  run(fwd, fwd_idx, 0.25 * std::min(h, s0));
}

}  // namespace detail

/// Green's function at `pole`, from the solution regular at the other pole.
/// The singular coefficient A and alpha0 = B/A come from a least-squares fit
/// t u(t) = A + B t + C t^2 + ... near the pole.
inline GreenFunction solve_green(const WarpProfile& p, Pole pole, const GreenOptions& opts = {}) {
  if (pole == Pole::Q) {
    auto g = solve_green(reverse(p), Pole::P, opts);
    std::reverse(g.field.values.begin(), g.field.values.end());
    g.pole = Pole::Q;
    g.field.singular_pole = Pole::Q;
    return g;
  }
  if (opts.check_yamabe && !yamabe_positive(p)) {
    throw Error(ErrorKind::nonpositive_yamabe, "solve_green: symmetric Yamabe constant <= 0");
  }
  if (opts.fit_degree < 2 || opts.fit_hi - opts.fit_lo < opts.fit_degree + 1 || opts.fit_lo < 1) {
    throw Error(ErrorKind::invalid_argument, "solve_green: bad fit window");
  }
  const int n = p.n();
  const double h = p.grid().h();
  std::vector<double> u, du;
  detail::regular_at_Q(p, opts, u, du);

  const int m = opts.fit_hi - opts.fit_lo + 1;
  const double scale = opts.fit_hi * h;
  Eigen::MatrixXd V(m, opts.fit_degree + 1);
  Eigen::VectorXd y(m);
  for (int r = 0; r < m; ++r) {
    const int i = opts.fit_lo + r;
    const double t = p.grid().node(i);
    for (int k = 0; k <= opts.fit_degree; ++k) V(r, k) = std::pow(t / scale, k);
    y[r] = t * u[i];
  }
  const Eigen::VectorXd c = V.colPivHouseholderQr().solve(y);
  const double A = c[0], B = c[1] / scale, C = c[2] / (scale * scale);
  if (!(A > 0.0)) throw Error(ErrorKind::sign_change, "solve_green: singular coefficient <= 0");

  const auto scal = scalar_curvature(p);
  std::vector<double> G(n + 1), G1(n + 1), G2(n + 1);
  for (int i = 1; i <= n; ++i) {
    G[i] = u[i] / A;
    G1[i] = du[i] / A;
    if (!(G[i] > 0.0)) {
      throw Error(ErrorKind::sign_change, "solve_green: G changes sign; resolution too low?");
    }
    if (i < n) {
      G2[i] = -2.0 * p.d1_nodes()[i] / p.phi_nodes()[i] * G1[i] + scal[i] / 8.0 * G[i];
    } else {
      G2[i] = scal[n] / 24.0 * G[i];
    }
  }
  return GreenFunction::assemble(Pole::P, p.grid(), G, G1, G2, B / A, C / A);
}

inline double green_at_opposite(const GreenFunction& G) { return G.opposite; }

/// Fixed cutoff in the distance to the pole: 1 below T/8, 0 above T/4,
/// quintic smoothstep in between.
inline double cutoff(double d, double T) {
  const double a = T / 8.0, b = T / 4.0;
  if (d <= a) return 1.0;
  if (d >= b) return 0.0;
  const double x = (b - d) / (b - a);
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

/// alpha = G - cutoff(d)/d on the whole grid; alpha(pole) = alpha0.
inline RadialField alpha_field(const GreenFunction& G) {
  const Grid& g = G.grid();
  RadialField a{g, std::vector<double>(g.size()), 0, Pole::P};
  for (int i = 0; i <= g.n; ++i) {
    const double t = g.node(i), d = G.distance(t);
    if (d == 0.0) {
      a.values[i] = G.alpha0;
    } else {
      a.values[i] = (G.lead_removed(d) - cutoff(d, g.T)) / d;
    }
  }
  return a;
}

/// max |L G| over nodes in [a, b] (fourth-order differences).
inline double green_residual(const WarpProfile& p, const GreenFunction& G, double a, double b) {
  const int n = p.n();
  const double h = p.grid().h();
  const auto scal = scalar_curvature(p);
  double res = 0.0;
  for (int i = 2; i <= n - 2; ++i) {
    const double t = p.grid().node(i);
    if (t < a || t > b) continue;
    const auto& v = G.field.values;
    const double g1 = fd_first(v, i, h), g2 = fd_second(v, i, h);
    res = std::max(res, std::abs(8.0 * (-g2 - 2.0 * p.d1_nodes()[i] / p.phi_nodes()[i] * g1) +
                                 scal[i] * v[i]));
  }
  return res;
}

/// Green's function of w^4 g from that of g: G' = G / (w(pole) w). The result
/// lives on the conformal profile (same node count, new arclength).
inline GreenFunction conformal_transport(const GreenFunction& G, const CosineSeries& w_in,
                                         const WarpProfile& p) {
  auto q = conformal(p, w_in);
  const auto& m = dynamic_cast<const models::Conformal&>(q.model());
  const CosineSeries& w = m.factor();
  const int n = q.n();
  const double tp = G.pole == Pole::P ? 0.0 : p.T();
  const double w0 = w(tp), w2 = 0.5 * w.d2(tp);
  const auto scal = scalar_curvature(q);
  std::vector<double> Gn(n + 1), G1(n + 1), G2(n + 1);
  for (int k = 1; k <= n; ++k) {
    // node k counted from the pole in the new metric
    const int i = G.pole == Pole::P ? k : n - k;
    const double s = q.grid().node(i);
    const double t = m.base_coordinate(s);
    const double wt = w(t), g = G(t), gt = G.derivative(t);
    const double val = g / (w0 * wt);
    // d/ds in the direction away from the pole
    double ds = (gt / (w0 * wt) - g * w.d1(t) / (w0 * wt * wt)) / (wt * wt);
    if (G.pole == Pole::Q) ds = -ds;
    Gn[k] = val;
    G1[k] = ds;
    const auto j = q.jet(s);
    if (k < n) {
      const double a1 = G.pole == Pole::P ? j.d1 : -j.d1;
      G2[k] = -2.0 * a1 / j.phi * ds + scal[i] / 8.0 * val;
    } else {
      G2[k] = scal[i] / 24.0 * val;
    }
  }
  if (!(w0 > 0.0)) throw Error(ErrorKind::invalid_argument, "conformal_transport: w <= 0");
  Grid grid = q.grid();
  GreenFunction out = GreenFunction::assemble(Pole::P, grid, Gn, G1, G2, G.alpha0 / (w0 * w0),
                                              (G.c2 - w2 / (3.0 * w0)) / std::pow(w0, 4));
  if (G.pole == Pole::Q) {
    out.pole = Pole::Q;
    std::reverse(out.field.values.begin(), out.field.values.end());
    out.field.singular_pole = Pole::Q;
  }
  return out;
}

}  // namespace thetalab
