#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "thetalab/horizons.hpp"
#include "thetalab/integrals.hpp"

namespace thetalab {

struct FlowRow {
  double tau = 0.0;
  double t = 0.0;
  double area = 0.0;
  double H = 0.0;
  double hawking = 0.0;
};

struct FlowTrace {
  std::vector<FlowRow> rows;
  Pole direction = Pole::P;
  double start = 0.0;
  bool complete = true;
  std::string obstruction;

  double area0() const { return rows.empty() ? 0.0 : rows.front().area; }
  double tau_end() const { return rows.empty() ? 0.0 : rows.back().tau; }
};

struct FlowOptions {
  double tau_max = 10.0;
  int samples = 512;
  // return the trace up to an obstruction instead of throwing
  bool allow_partial = false;
};

/// Hawking mass of a symmetric sphere: sqrt(A/16pi) (1 - H^2 A / 16pi).
inline double hawking_mass(double area, double H) {
  const double r = area / (16.0 * pi);
  return std::sqrt(r) * (1.0 - H * H * r);
}

/// The flow from a horizon root toward one end. The symmetric spheres are the
/// flow surfaces, so the flow is a reparametrization of t with tau = log(A/A0).
inline FlowTrace symmetric_imcf(const BlownUpMetric& bm, double start, Pole direction,
                                const FlowOptions& opts = {}) {
  bm.check_t(start, "symmetric_imcf");
  if (!(opts.tau_max > 0.0) || opts.samples < 2) {
    throw Error(ErrorKind::invalid_argument, "symmetric_imcf: bad tau grid");
  }
  FlowTrace tr;
  tr.direction = direction;
  tr.start = start;
  const double A0 = sphere_area(bm, start);
  const double sign = direction == Pole::P ? -1.0 : 1.0;

  // monotone stretch of A from the start toward the pole, by nodes
  const auto& g = bm.base().grid();
  std::vector<double> ts{start}, as{A0};
  const int first = direction == Pole::P ? static_cast<int>(std::ceil(start / g.h())) - 1
                                         : static_cast<int>(std::floor(start / g.h())) + 1;
  const int step = direction == Pole::P ? -1 : 1;
  for (int i = first; i > 0 && i < g.n; i += step) {
    const double t = g.node(i);
    if ((t - start) * sign < 0.01 * g.h()) continue;
    const double a = sphere_area(bm, t);
    if (!(a > as.back())) {
      tr.complete = false;
      tr.obstruction = "area not monotone near t = " + std::to_string(t);
      break;
    }
    ts.push_back(t);
    as.push_back(a);
  }
  if (tr.complete) {
    // the last cell reaches the pole where A -> inf
    double d = direction == Pole::P ? ts.back() : g.T - ts.back();
    const double target = A0 * std::exp(opts.tau_max);
    while (as.back() <= target) {
      d *= 0.5;
      const double t = direction == Pole::P ? d : g.T - d;
      const double a = sphere_area(bm, t);
      if (!(a > as.back())) {
        tr.complete = false;
        tr.obstruction = "area not monotone near the pole";
        break;
      }
      ts.push_back(t);
      as.push_back(a);
    }
  }
  if (!tr.complete && !opts.allow_partial) {
    throw Error(ErrorKind::flow_obstruction, "symmetric_imcf: " + tr.obstruction +
                                                 "; jumps are not simulated");
  }

  auto row_at = [&](double t) {
    FlowRow r;
    r.t = t;
    r.area = sphere_area(bm, t);
    r.tau = std::log(r.area / A0);
    r.H = sign * mean_curvature_blown(bm, t);
    r.hawking = hawking_mass(r.area, r.H);
    return r;
  };
  const double la0 = std::log(A0);
  for (int k = 0; k < opts.samples; ++k) {
    const double tau = opts.tau_max * k / (opts.samples - 1);
    if (k == 0) {
      tr.rows.push_back(row_at(start));
      tr.rows.back().tau = 0.0;
      continue;
    }
    const double want = std::exp(tau) * A0;
    if (want > as.back()) break;  // partial trace
    const auto j = static_cast<std::size_t>(std::lower_bound(as.begin(), as.end(), want) - as.begin());
    if (as[j] == want) {
      tr.rows.push_back(row_at(ts[j]));
      continue;
    }
    auto f = [&](double t) { return std::log(sphere_area(bm, t)) - la0 - tau; };
    std::uintmax_t iters = 200;
    double lo = ts[j - 1], hi = ts[j], flo = std::log(as[j - 1]) - la0 - tau, fhi = std::log(as[j]) - la0 - tau;
    if (lo > hi) {
      std::swap(lo, hi);
      std::swap(flo, fhi);
    }
    const auto br = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                      boost::math::tools::eps_tolerance<double>(52), iters);
    const double t = std::abs(f(br.first)) <= std::abs(f(br.second)) ? br.first : br.second;
    tr.rows.push_back(row_at(t));
  }
  return tr;
}

/// Closed-form flow from the horizon of Schwarzschild with horizon area a0;
/// t is the isotropic radius.
inline FlowTrace schwarzschild_flow(double a0, const FlowOptions& opts = {}) {
  if (!(a0 > 0.0)) throw Error(ErrorKind::invalid_argument, "schwarzschild_flow: a0 must be > 0");
  FlowTrace tr;
  tr.direction = Pole::P;
  const double m = std::sqrt(a0 / (16.0 * pi));
  tr.start = m / 2;
  for (int k = 0; k < opts.samples; ++k) {
    FlowRow r;
    r.tau = opts.tau_max * k / (opts.samples - 1);
    r.area = a0 * std::exp(r.tau);
    const double gap = std::exp(r.tau / 2) * std::expm1(r.tau / 2);
    r.H = std::sqrt(16.0 * pi / a0) * std::sqrt(gap) / std::exp(r.tau);
    r.hawking = m;
    // area radius R = sqrt(A / 4 pi) = r (1 + m/2r)^2
    const double R = std::sqrt(r.area / (4.0 * pi)), q = R - m;
    r.t = 0.5 * (q + std::sqrt(std::max(0.0, q * q - m * m)));
    tr.rows.push_back(r);
  }
  return tr;
}

struct BoundReport {
  double a1 = 0.0;
  double a2 = 0.0;
  double A1 = 0.0;
  double A2 = 0.0;
  double omega_volume = 0.0;
  double theta = 0.0;
  double per_instance_bound = 0.0;
  // the same bound assembled from numerator/denominator with quadrature I, J
  double numerator = 0.0;
  double denominator = 0.0;
  double two_route_bound = 0.0;
  double mu_estimate = 0.0;
  double theorem_bound_lhs = 0.0;
  double mu_sigma = 0.0;
  double flow_inequality_margin = 0.0;
  double tau_common = 0.0;
  bool area_sum_ok = true;
  std::vector<std::string> flags;
};

/// min over the trace of sqrt(16 pi A0 (e^tau - e^{tau/2})) - H A.
inline double flow_margin(const FlowTrace& tr) {
  double m = inf;
  const double A0 = tr.area0();
  for (const auto& r : tr.rows) {
    const double gap = std::exp(r.tau / 2) * std::expm1(r.tau / 2);
    m = std::min(m, std::sqrt(16.0 * pi * A0 * gap) - r.H * r.area);
  }
  return m;
}

inline bool hawking_monotone(const FlowTrace& tr, double slack = 1e-8) {
  for (std::size_t i = 1; i < tr.rows.size(); ++i) {
    if (tr.rows[i].hawking < tr.rows[i - 1].hawking - slack) return false;
  }
  return true;
}

inline double yamabe_bound(double a1, double a2, double omega) {
  const double s = a1 + a2;
  const double A1 = (std::sqrt(a1) + std::sqrt(a2)) / std::sqrt(s);
  const double A2 = (std::pow(a1, 1.5) + std::pow(a2, 1.5)) / std::pow(s, 1.5);
  return 3.0 * std::pow(pi, 1.5) * A1 / std::cbrt(std::sqrt(pi) / 8.0 * A2 + omega / std::pow(s, 1.5));
}

inline BoundReport bray_neves_bound(const BlownUpMetric& bm, const ThetaReport& th,
                                    const FlowTrace& flowP, const FlowTrace& flowQ, double mu_estimate) {
  BoundReport b;
  b.a1 = sphere_area(bm, th.t1);
  b.a2 = th.degenerate ? b.a1 : sphere_area(bm, th.t2);
  b.omega_volume = th.omega_volume;
  b.theta = th.theta;
  const double s = b.a1 + b.a2;
  b.A1 = (std::sqrt(b.a1) + std::sqrt(b.a2)) / std::sqrt(s);
  b.A2 = (std::pow(b.a1, 1.5) + std::pow(b.a2, 1.5)) / std::pow(s, 1.5);
  b.per_instance_bound = yamabe_bound(b.a1, b.a2, b.omega_volume);

  const double I = integral_I().value, J = integral_J().value, r16 = std::sqrt(16.0 * pi);
  b.numerator = r16 * I * (std::sqrt(b.a1) + std::sqrt(b.a2));
  b.denominator = (std::pow(b.a1, 1.5) + std::pow(b.a2, 1.5)) * J / r16 + b.omega_volume;
  b.two_route_bound = 8.0 * b.numerator / std::cbrt(b.denominator);

  b.mu_sigma = mu_sigma();
  b.mu_estimate = mu_estimate;
  b.theorem_bound_lhs = mu_estimate * std::cbrt(1.0 + 4.0 * th.theta / std::sqrt(pi));
  if (b.theorem_bound_lhs > b.mu_sigma) b.flags.push_back("diagnostic-exceeds");
  b.area_sum_ok = s <= 2.0 * th.sigma_area * (1.0 + 1e-14);

  b.flow_inequality_margin = std::min(flow_margin(flowP), flow_margin(flowQ));
  b.tau_common = std::min(flowP.tau_end(), flowQ.tau_end());
  if (!flowP.complete || !flowQ.complete) b.flags.push_back("flow-partial");
  if (th.degenerate) b.flags.push_back("degenerate");
  return b;
}

}  // namespace thetalab
