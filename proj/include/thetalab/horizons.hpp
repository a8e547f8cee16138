#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "thetalab/blowup.hpp"

namespace thetalab {

enum class RootKind { transversal, tangential };

inline const char* to_string(RootKind k) {
  return k == RootKind::transversal ? "transversal" : "tangential";
}

struct HorizonRoot {
  double t = 0.0;
  RootKind kind = RootKind::transversal;
};

struct HorizonOptions {
  double root_tol = 1e-12;
  // on the scale-free mean curvature H sqrt(A / 4 pi)
  double flat_tol = 1e-9;
};

struct HorizonSet {
  std::vector<HorizonRoot> roots;
  int scan_resolution = 0;
  double tol = 0.0;

  std::size_t transversal_count() const {
    return static_cast<std::size_t>(std::count_if(roots.begin(), roots.end(), [](const HorizonRoot& r) {
      return r.kind == RootKind::transversal;
    }));
  }
};

/// Roots of a callable on (a, b) from a scan of `n` uniform cells: sign
/// changes are bracketed and refined to `root_tol`; interior minima of |F|
/// with no sign change are refined and kept when below `flat_tol`.
template <class F>
std::vector<HorizonRoot> scan_roots(F&& f, double a, double b, int n, double root_tol,
                                    double flat_tol) {
  std::vector<double> t(n + 1), v(n + 1);
  for (int i = 0; i <= n; ++i) {
    t[i] = i == n ? b : a + (b - a) * i / n;
    v[i] = f(t[i]);
  }
  std::vector<HorizonRoot> out;
  auto sgn = [](double x) { return (x > 0.0) - (x < 0.0); };
  for (int i = 0; i < n; ++i) {
    if (v[i] == 0.0) {
      if (i > 0 && sgn(v[i - 1]) * sgn(v[i + 1]) < 0) out.push_back({t[i], RootKind::transversal});
      continue;
    }
    if (sgn(v[i]) * sgn(v[i + 1]) < 0) {
      std::uintmax_t iters = 200;
      auto tol = [root_tol](double x, double y) { return std::abs(y - x) < root_tol; };
      const auto br = boost::math::tools::toms748_solve(f, t[i], t[i + 1], v[i], v[i + 1], tol, iters);
      out.push_back({0.5 * (br.first + br.second), RootKind::transversal});
    }
  }
  for (int i = 1; i < n; ++i) {
    const double m = std::abs(v[i]);
    if (v[i] == 0.0 || m > std::abs(v[i - 1]) || m > std::abs(v[i + 1])) continue;
    if (sgn(v[i - 1]) != sgn(v[i]) || sgn(v[i + 1]) != sgn(v[i])) continue;
    const auto mn = boost::math::tools::brent_find_minima(
        [&](double x) { return std::abs(f(x)); }, t[i - 1], t[i + 1], 52);
    if (mn.second < flat_tol) out.push_back({mn.first, RootKind::tangential});
  }
  std::sort(out.begin(), out.end(), [](const HorizonRoot& x, const HorizonRoot& y) { return x.t < y.t; });
  return out;
}

/// Zeros of the blown-up mean curvature over the symmetric spheres.
inline HorizonSet find_horizons(const BlownUpMetric& bm, const HorizonOptions& opts = {}) {
  const auto& g = bm.base().grid();
  HorizonSet hs;
  hs.scan_resolution = g.n;
  hs.tol = opts.flat_tol;
  // the scale-free curvature has the sign of H and is O(1) near both ends,
  // so the flatness test is meaningful everywhere
  hs.roots = scan_roots([&](double t) { return normalized_mean_curvature(bm, t); }, g.node(1),
                        g.node(g.n - 1), g.n - 2, opts.root_tol, opts.flat_tol);
  return hs;
}

struct OutermostPair {
  double t1 = 0.0;
  double t2 = 0.0;
  bool degenerate = false;
};

inline OutermostPair outermost_pair(const HorizonSet& hs, double root_tol = 1e-12) {
  if (hs.roots.empty()) throw Error(ErrorKind::no_horizon, "outermost_pair: no roots");
  OutermostPair p{hs.roots.front().t, hs.roots.back().t, false};
  if (p.t2 - p.t1 < 10.0 * root_tol) {
    p.degenerate = true;
    p.t2 = p.t1;
  }
  return p;
}

struct ThetaReport {
  double t1 = 0.0;
  double t2 = 0.0;
  double sigma_area = 0.0;
  double omega_volume = 0.0;
  double theta = 0.0;
  bool degenerate = false;
  std::size_t root_count = 0;
  std::vector<std::string> caveats{"symmetric-outermost", "bubbles: not searched"};
};

/// Theta = |Omega| / |Sigma|^{3/2} for the outermost symmetric horizons.
inline ThetaReport theta(const BlownUpMetric& bm, const HorizonOptions& opts = {}) {
  const auto hs = find_horizons(bm, opts);
  if (hs.roots.empty()) {
    throw Error(ErrorKind::no_horizon, "theta: no horizon found; resolution too low?");
  }
  const auto pair = outermost_pair(hs, opts.root_tol);
  ThetaReport r;
  r.t1 = pair.t1;
  r.t2 = pair.t2;
  r.degenerate = pair.degenerate;
  r.root_count = hs.roots.size();
  if (pair.degenerate) {
    r.sigma_area = sphere_area(bm, r.t1);
    r.omega_volume = 0.0;
    r.theta = 0.0;
  } else {
    r.sigma_area = sphere_area(bm, r.t1) + sphere_area(bm, r.t2);
    r.omega_volume = shell_volume(bm, r.t1, r.t2);
    r.theta = r.omega_volume / std::pow(r.sigma_area, 1.5);
  }
  return r;
}

}  // namespace thetalab
