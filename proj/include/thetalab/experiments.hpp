#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "thetalab/horizons.hpp"
#include "thetalab/report.hpp"

namespace thetalab {

/// Volume average of alpha = G - cutoff/d over the base metric.
inline double alpha_mean(const WarpProfile& p, const GreenFunction& G) {
  const auto one = sample(p, [](double) { return 1.0; });
  return integrate_radial(p, alpha_field(G), 2).value / integrate_radial(p, one, 2).value;
}

/// Same for the pole-P Green's function of a blow-up, scaled with W.
inline double alpha_mean(const BlownUpMetric& bm) { return bm.scale() * alpha_mean(bm.base(), bm.Gp()); }

/// sup |alpha - a| / a.
inline double beta_ratio(const GreenFunction& G, double a) {
  const auto al = alpha_field(G);
  double m = 0.0;
  for (double v : al.values) m = std::max(m, std::abs(v - a));
  return m / std::abs(a);
}

inline WarpProfile family_profile(const std::string& family, double lambda, int n) {
  if (family == "pinched") return pinched_profile(lambda, n);
  if (family == "round") return round_profile(n);
  throw Error(ErrorKind::invalid_argument, "unknown family '" + family + "'");
}

struct SweepRow {
  double lambda = 0.0;
  double mu_sym = 0.0;
  double theta = 0.0;
  double paper_mass_p = 0.0;
  double paper_mass_q = 0.0;
  double alpha_mean = 0.0;
  double sigma_area = 0.0;
  double omega_volume = 0.0;
  double bound_diagnostic = 0.0;
  double beta_ratio = 0.0;
  std::vector<std::string> flags;

  std::string flag_string() const {
    std::string s;
    for (const auto& f : flags) s += (s.empty() ? "" : ";") + f;
    return s;
  }
};

struct SweepOptions {
  int n = 512;
  YamabeOptions yamabe;
  GreenOptions green;
  HorizonOptions horizons;
};

/// One row; errors end up in the flags.
inline SweepRow sweep_row(const std::string& family, double lambda, const SweepOptions& opts = {}) {
  SweepRow r;
  r.lambda = lambda;
  try {
    const auto p = family_profile(family, lambda, opts.n);
    const auto y = minimize_yamabe_sym(p, opts.yamabe);
    r.mu_sym = y.value;
    if (!y.converged) r.flags.push_back("yamabe-not-converged");
    if (y.nonpositive || !yamabe_positive(p)) {
      r.flags.push_back("nonpositive-yamabe");
      r.theta = std::nan("");
      return r;
    }
    const auto bm = blowup_two(p, opts.green);
    const auto th = theta(bm, opts.horizons);
    const auto ms = masses(bm);
    r.theta = th.theta;
    r.paper_mass_p = ms.paper_mass_p;
    r.paper_mass_q = ms.paper_mass_q;
    r.alpha_mean = alpha_mean(bm);
    r.beta_ratio = beta_ratio(bm.Gp(), r.alpha_mean);
    r.sigma_area = th.sigma_area;
    r.omega_volume = th.omega_volume;
    r.bound_diagnostic = r.mu_sym * std::cbrt(1.0 + 4.0 * r.theta / std::sqrt(pi)) - mu_sigma();
    if (th.degenerate) r.flags.push_back("degenerate");
    if (r.bound_diagnostic > 0.0) r.flags.push_back("diagnostic-exceeds");
  } catch (const Error& e) {
    r.flags.push_back(std::string("error:") + to_string(e.kind()));
  }
  return r;
}

inline std::vector<SweepRow> family_sweep(const std::string& family, const std::vector<double>& lambdas,
                                          const SweepOptions& opts = {}) {
  if (lambdas.empty()) throw Error(ErrorKind::invalid_argument, "family_sweep: empty lambda grid");
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > lambdas[i - 1])) {
      throw Error(ErrorKind::invalid_argument, "family_sweep: lambda grid must be increasing");
    }
  }
  if (family != "pinched" && family != "round") {
    throw Error(ErrorKind::invalid_argument, "unknown family '" + family + "'");
  }
  std::vector<SweepRow> rows;
  for (double l : lambdas) rows.push_back(sweep_row(family, l, opts));
  return rows;
}

struct SweepSummary {
  double mu_min = 0.0;
  double mu_max = 0.0;
  // mu(sigma) / min mu_sym over the sweep
  double reduction_factor = 0.0;
  bool theta_monotone = true;
  std::string monotone_check;  // "asserted" or the reason it was skipped
};

inline SweepSummary summarize(const std::vector<SweepRow>& rows) {
  SweepSummary s;
  s.mu_min = inf;
  s.mu_max = -inf;
  for (const auto& r : rows) {
    if (r.flag_string().find("error:") != std::string::npos) continue;
    s.mu_min = std::min(s.mu_min, r.mu_sym);
    s.mu_max = std::max(s.mu_max, r.mu_sym);
  }
  s.reduction_factor = mu_sigma() / s.mu_min;
  // Theta non-decreasing on stretches where mu_sym strictly decreases
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].mu_sym < rows[i - 1].mu_sym && rows[i].theta < rows[i - 1].theta - 1e-8) s.theta_monotone = false;
  }
  s.monotone_check = s.mu_min < 1.0 ? "asserted" : "skipped: mu_sym stays above 1";
  return s;
}

struct ScalingFit {
  double exponent = 0.0;
  double r_squared = 0.0;
  std::size_t used = 0;
};

/// Least-squares slope of log Theta against log a.
inline ScalingFit scaling_fit(const std::vector<double>& a, const std::vector<double>& theta) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < std::min(a.size(), theta.size()); ++i) {
    if (a[i] > 0.0 && theta[i] > 0.0) {
      x.push_back(std::log(a[i]));
      y.push_back(std::log(theta[i]));
    }
  }
  if (x.size() < 4) {
    throw Error(ErrorKind::insufficient_data, "scaling_fit: need at least 4 rows with Theta > 0 and a > 0");
  }
  const auto m = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd V(m, 2);
  Eigen::VectorXd Y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    V(i, 0) = 1.0;
    V(i, 1) = x[i];
    Y[i] = y[i];
  }
  const Eigen::VectorXd c = V.colPivHouseholderQr().solve(Y);
  const double mean = Y.mean();
  const double ss_res = (V * c - Y).squaredNorm(), ss_tot = (Y.array() - mean).square().sum();
  ScalingFit f;
  f.exponent = c[1];
  f.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  f.used = x.size();
  return f;
}

inline ScalingFit scaling_fit(const std::vector<SweepRow>& rows) {
  std::vector<double> a, t;
  for (const auto& r : rows) {
    a.push_back(r.alpha_mean);
    t.push_back(r.theta);
  }
  return scaling_fit(a, t);
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream o;
  o.precision(17);
  o << "lambda,mu_sym,theta,paper_mass_p,paper_mass_q,alpha_mean,sigma_area,omega_volume,bound_diagnostic,flags\n";
  for (const auto& r : rows) {
    o << r.lambda << ',' << r.mu_sym << ',' << r.theta << ',' << r.paper_mass_p << ',' << r.paper_mass_q << ','
      << r.alpha_mean << ',' << r.sigma_area << ',' << r.omega_volume << ',' << r.bound_diagnostic << ','
      << r.flag_string() << '\n';
  }
  return o.str();
}

inline Json to_json(const SweepRow& r) {
  auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  return {{"lambda", r.lambda},
          {"mu_sym", num(r.mu_sym)},
          {"theta", num(r.theta)},
          {"paper_mass_p", r.paper_mass_p},
          {"paper_mass_q", r.paper_mass_q},
          {"alpha_mean", r.alpha_mean},
          {"sigma_area", r.sigma_area},
          {"omega_volume", r.omega_volume},
          {"bound_diagnostic", num(r.bound_diagnostic)},
          {"beta_ratio", num(r.beta_ratio)},
          {"flags", r.flags}};
}

}  // namespace thetalab
