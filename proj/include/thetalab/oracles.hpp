#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "thetalab/imcf_hawking.hpp"
#include "thetalab/integrals.hpp"
#include "thetalab/report.hpp"

namespace thetalab {

struct OracleCheck {
  std::string name;
  std::string tag;  // PAPER, DERIVED, TRIVIAL, PRINTED
  double computed = 0.0;
  double expected = 0.0;
  double abs_error = 0.0;
  double tol = 0.0;
  bool pass = false;
  bool gating = true;
  // pass | fail | warn (equality check on a coarse grid) | printed-ok | printed-typo
  std::string status;
  std::string note;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  int n = 0;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.pass || !c.gating; });
  }

  const OracleCheck* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }

  Json to_json() const {
    Json arr = Json::array();
    for (const auto& c : checks) {
      arr.push_back({{"name", c.name}, {"tag", c.tag}, {"computed", c.computed}, {"expected", c.expected},
                     {"abs_error", c.abs_error}, {"tol", c.tol}, {"pass", c.pass}, {"gating", c.gating},
                     {"status", c.status}, {"note", c.note}});
    }
    return {{"checks", arr}, {"n", n}, {"all_pass", all_pass()}};
  }
};

struct OracleOptions {
  int n = 1024;
  // below this, failed equality checks are reported as warnings
  int coarse_n = 256;
};

namespace detail {

struct OracleSuite {
  OracleReport rep;
  bool coarse = false;

  // kind: 0 exact/closed form, 1 grid equality (may warn when coarse),
  // 2 printed intermediate (never gating)
  void add(std::string name, std::string tag, double computed, double expected, double tol, int kind = 0,
           std::string note = "") {
    OracleCheck c;
    c.name = std::move(name);
    c.tag = std::move(tag);
    c.computed = computed;
    c.expected = expected;
    c.abs_error = std::abs(computed - expected);
    c.tol = tol;
    c.pass = c.abs_error <= tol;
    c.note = std::move(note);
    if (kind == 2) {
      c.gating = false;
      c.status = c.pass ? "printed-ok" : "printed-typo";
    } else if (c.pass) {
      c.status = "pass";
    } else if (kind == 1 && coarse) {
      c.gating = false;
      c.status = "warn";
    } else {
      c.status = "fail";
    }
    rep.checks.push_back(std::move(c));
  }

  // runs a block; an exception becomes a failed check
  void guarded(const std::string& name, const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& e) {
      add(name, "DERIVED", std::nan(""), 0.0, 0.0, 0, std::string("error: ") + e.what());
    }
  }
};

inline double round_green_error(int n) {
  auto p = round_profile(n);
  auto G = solve_green(p, Pole::P);
  double err = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = p.grid().node(i);
    if (t < 0.1 || t > pi - 0.1) continue;
    err = std::max(err, std::abs(G.field[i] - 0.5 / std::sin(t / 2)));
  }
  return err;
}

}  // namespace detail

inline OracleReport run_all(const OracleOptions& opts = {}) {
  detail::OracleSuite s;
  s.rep.n = opts.n;
  s.coarse = opts.n < opts.coarse_n;
  const int n = opts.n;

  // integrals
  s.guarded("integral_I", [&] {
    const auto I = integral_I(), Ir = integral_I_raw();
    s.add("integral_I", "PAPER", I.value, 3 * pi / 32, 1e-10);
    s.add("integral_I_two_routes", "DERIVED", Ir.value, I.value, 1e-9, 0, "raw t-integral vs substituted");
  });
  s.guarded("integral_J", [&] {
    const auto J = integral_J(), Jr = integral_J_raw();
    s.add("integral_J", "PAPER", J.value, pi / 2, 1e-10);
    s.add("integral_J_two_routes", "DERIVED", Jr.value, J.value, 1e-9, 0, "raw t-integral vs substituted");
  });
  s.add("I_substituted_integrand_at_1", "PAPER", integrands::I_sub(1.0), 0.5, 1e-15);
  s.add("J_substituted_tail", "TRIVIAL", 1e12 * integrands::J_sub(1e6), 4.0, 1e-9, 0,
        "s^2 times the integrand tends to 4, so the tail is integrable");
  {
    // printed intermediate lines, pointwise
    const double t = 1.0, y = std::exp(t / 2);
    const double I_obs = (4 * y - 1) * (4 * y - 1) / (16 * std::pow(2 * y - 1, 3)) * std::sqrt((y - 1) / y);
    s.add("I_printed_t_form", "PRINTED", I_obs, integrands::I_raw(t), 1e-14, 2);
    const double J_obs = 1.0 / ((2 * y - 1) * (2 * y - 1)) * std::sqrt(y / (y - 1));
    s.add("J_printed_t_form", "PRINTED", J_obs, integrands::J_raw(t), 1e-14, 2,
          "printed form carries an extra factor 2e^{t/2}-1; the substituted s-form is correct");
    const double J_lemma = std::pow(integrands::f(t), 6) * std::exp(2 * t) / integrands::gap(t);
    s.add("J_printed_lemma_integrand", "PRINTED", J_lemma, integrands::J_raw(t), 1e-14, 2,
          "without the square root the integrand behaves like 2/t at 0 and diverges");
    const double r = 2.0, q = r * r + 1;
    s.add("I_printed_partial_fractions", "PRINTED", 1 + 3 / q - 4 / (q * q * q), 4 * integrands::I_sub(r), 1e-14,
          2);
    const double m = r * r - 1;
    s.add("J_printed_partial_fractions", "PRINTED", 4 / m - 16 / (m * m) + 16 / (m * m * m), integrands::J_sub(r),
          1e-14, 2, "denominators should read s^2+1");
    s.add("J_corrected_partial_fractions", "DERIVED", 4 / q - 16 / (q * q) + 16 / (q * q * q), integrands::J_sub(r),
          1e-14);
  }

  // round sphere
  s.guarded("round_scalar_curvature", [&] {
    auto p = round_profile(n);
    const auto sc = scalar_curvature(p);
    double e = 0.0;
    for (double v : sc.values) e = std::max(e, std::abs(v - 6.0));
    s.add("round_scalar_curvature", "TRIVIAL", 6.0 + e, 6.0, 1e-9, 1);
    const double vol = integrate_radial(p, sample(p, [](double) { return 1.0; }), 2).value;
    s.add("mu_sigma_constant", "PAPER", mu_sigma(), 6.0 * std::pow(vol, 2.0 / 3.0), 1e-9 * mu_sigma(), 1,
          "6 (2 pi^2)^{2/3} vs Scal Vol^{2/3} of the discretized round sphere");
    RadialField one = sample(p, [](double) { return 1.0; });
    s.add("mu_sigma_quotient_of_constant", "DERIVED", yamabe_quotient(p, one), mu_sigma(), 1e-8 * mu_sigma(), 1);
  });
  s.guarded("round_green", [&] {
    const double e0 = detail::round_green_error(n), e1 = detail::round_green_error(2 * n);
    s.add("round_green_closed_form", "DERIVED", e0, 0.0, 1e-8, 1, "sup |G - csc(t/2)/2| on [0.1, pi-0.1]");
    // order >= 2, unless the finer error sits on the integrator's noise floor
    const double order = e1 > 1e-11 ? std::log2(e0 / e1) : 2.0;
    s.add("round_green_refinement_order", "DERIVED", std::min(order, 2.0), 2.0, 1e-12, 0,
          "log2(err(n)/err(2n)), capped at 2; floor 1e-11");
  });

  // round blow-up = Schwarzschild
  s.guarded("round_blowup", [&] {
    auto bm = blowup_two(round_profile(n));
    const auto ms = masses(bm);
    s.add("round_alpha0", "DERIVED", bm.Gp().alpha0, 0.0, 1e-8, 1);
    s.add("round_paper_mass", "DERIVED", ms.paper_mass_p, 0.5, 1e-8, 1);
    const double A = sphere_area(bm, pi / 2);
    s.add("round_equator_area", "DERIVED", A, 4 * pi * std::pow(std::sqrt(2.0), 4), 1e-8, 1,
          "W(pi/2) = sqrt 2 in closed form");
    s.add("schwarzschild_horizon_area", "PAPER", A, 16 * pi * ms.fit_mass_p * ms.fit_mass_p, 1e-6 * A, 1,
          "horizon area 16 pi m^2 with m from the isotropic fit");
    // first variation: the t-sphere moves with normal speed W^2 per unit t
    const double t = 1.0, e = 1e-3;
    const double dA = (-sphere_area(bm, t + 2 * e) + 8 * sphere_area(bm, t + e) - 8 * sphere_area(bm, t - e) +
                       sphere_area(bm, t - 2 * e)) /
                      (12 * e);
    const double w = bm.W(t);
    s.add("dA_dt_identity", "DERIVED", dA, mean_curvature_blown(bm, t) * sphere_area(bm, t) * w * w,
          1e-8 * std::abs(dA), 1);
    // d^2 W^3 H~ = -2 + 2 a d + O(d^2) near the pole, a = paper mass (the
    // average-curvature convention halves both coefficients)
    auto c = [&](double d) {
      const double W = bm.W(d);
      return (d * d * W * W * W * mean_curvature_blown(bm, d) + 2.0) / d;
    };
    const double d0 = 1e-3;
    s.add("mean_curvature_pole_coefficient", "PAPER", (8 * c(d0) - 6 * c(2 * d0) + c(4 * d0)) / 3,
          2 * ms.paper_mass_p, 1e-6, 1);
    const auto tr = symmetric_imcf(bm, pi / 2, Pole::P);
    const auto ref = schwarzschild_flow(sphere_area(bm, pi / 2));
    double dH = 0.0, dm = 0.0;
    for (std::size_t k = 0; k < tr.rows.size(); ++k) {
      dH = std::max(dH, std::abs(tr.rows[k].H - ref.rows[k].H));
      dm = std::max(dm, std::abs(tr.rows[k].hawking - tr.rows[0].hawking));
    }
    s.add("round_flow_H_matches_closed_form", "PAPER", dH, 0.0, 1e-8, 1);
    s.add("round_flow_hawking_constant", "DERIVED", dm, 0.0, 1e-8, 1);
  });

  // Schwarzschild closed forms
  {
    const auto tr = schwarzschild_flow(16 * pi);
    double dm = 0.0, eq = 0.0;
    for (const auto& r : tr.rows) {
      dm = std::max(dm, std::abs(hawking_mass(r.area, r.H) - 1.0));
      const double rhs = std::sqrt(16 * pi * 16 * pi * std::exp(r.tau / 2) * std::expm1(r.tau / 2));
      eq = std::max(eq, std::abs(r.H * r.area - rhs) / std::max(1.0, rhs));
    }
    s.add("schwarzschild_hawking_constant", "PAPER", 1.0 + dm, 1.0, 1e-9);
    s.add("schwarzschild_flow_equality", "PAPER", eq, 0.0, 1e-12);
    FlowOptions o;
    o.tau_max = 4 * std::log(2.0);
    o.samples = 3;
    s.add("schwarzschild_H_spot_value", "DERIVED", schwarzschild_flow(16 * pi, o).rows[1].H, std::sqrt(2.0) / 4,
          1e-14);
  }
  return s.rep;
}

}  // namespace thetalab
