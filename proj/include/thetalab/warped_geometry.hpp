#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/interpolators/quintic_hermite.hpp>

#include "thetalab/error.hpp"
#include "thetalab/grid.hpp"

namespace thetalab {

/// phi and its first two t-derivatives at one point.
struct ProfileJet {
  double phi = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// A warping function on [0, T]. Implementations must be exact (or
/// interpolated) everywhere on the closed interval, poles included.
class ProfileModel {
 public:
  virtual ~ProfileModel() = default;
  virtual double T() const = 0;
  virtual ProfileJet jet(double t) const = 0;
  virtual std::string tag() const = 0;
  // cubic series coefficient of phi in the distance to `pole`, when known
  virtual std::optional<double> c3(Pole) const { return std::nullopt; }
};

namespace models {

class Round final : public ProfileModel {
 public:
  double T() const override { return pi; }
  ProfileJet jet(double t) const override {
    return {std::sin(t), std::cos(t), -std::sin(t)};
  }
  std::string tag() const override { return "round"; }
  std::optional<double> c3(Pole) const override { return -1.0 / 6.0; }
};

// phi = sin t (1 + lambda sin^2 t)
class Pinched final : public ProfileModel {
 public:
  explicit Pinched(double lambda) : lambda_(lambda) {}
  double T() const override { return pi; }
  ProfileJet jet(double t) const override {
    const double s = std::sin(t), c = std::cos(t), l = lambda_;
    return {s * (1.0 + l * s * s), c * (1.0 + 3.0 * l * s * s),
            -s * (1.0 + 3.0 * l * s * s) + 6.0 * l * s * c * c};
  }
  std::string tag() const override {
    std::ostringstream os;
    os.precision(17);
    os << "pinched(" << lambda_ << ")";
    return os.str();
  }
  std::optional<double> c3(Pole) const override { return lambda_ - 1.0 / 6.0; }
  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

// Samples on a uniform grid. We interpolate psi = phi / s with
// s = (T/pi) sin(pi t / T); psi is smooth and even at both poles, so the
// quotient in the curvature formula never sees interpolation noise at 0/0.
class Table final : public ProfileModel {
 public:
  Table(std::vector<double> t, std::vector<double> phi, std::string source)
      : source_(std::move(source)) {
    if (t.size() != phi.size() || t.size() < 9) {
      throw Error(ErrorKind::invalid_profile, "table: need at least 9 samples");
    }
    const std::size_t n = t.size() - 1;
    T_ = t.back();
    if (std::abs(t.front()) > 1e-12 || !(T_ > 0.0)) {
      throw Error(ErrorKind::invalid_profile, "table: t must run from 0 to T > 0");
    }
    const double h = T_ / static_cast<double>(n);
    for (std::size_t i = 0; i <= n; ++i) {
      if (std::abs(t[i] - h * static_cast<double>(i)) > 1e-9 * T_) {
        throw Error(ErrorKind::invalid_profile, "table: grid is not uniform");
      }
    }
    for (std::size_t i = 1; i < n; ++i) {
      if (!(phi[i] > 0.0)) {
        throw Error(ErrorKind::invalid_profile,
                    "table: non-positive phi sample at t = " + std::to_string(t[i]));
      }
    }
    if (std::abs(phi.front()) > 1e-8 || std::abs(phi.back()) > 1e-8) {
      throw Error(ErrorKind::invalid_profile, "table: phi must vanish at both ends");
    }
    std::vector<double> psi(n + 1);
    for (std::size_t i = 1; i < n; ++i) psi[i] = phi[i] / s_of(h * static_cast<double>(i));
    for (Pole pole : {Pole::P, Pole::Q}) {
      const auto near = near_pole(psi, pole);
      const double limit = even_pole_limit(near, h);
      if (std::abs(limit - 1.0) > 1e-4) {
        throw Error(ErrorKind::invalid_profile,
                    std::string("table: |phi'| != 1 at pole ") + to_string(pole));
      }
    }
    psi.front() = 1.0;
    psi.back() = 1.0;
    std::vector<double> d1(n + 1), d2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      d1[i] = fd_first(psi, static_cast<long>(i), h);
      d2[i] = fd_second(psi, static_cast<long>(i), h);
    }
    d1.front() = 0.0;
    d1.back() = 0.0;
    std::vector<double> x(n + 1);
    for (std::size_t i = 0; i <= n; ++i) x[i] = h * static_cast<double>(i);
    x.back() = T_;
    psi_ = std::make_shared<Interp>(std::move(x), std::move(psi), std::move(d1), std::move(d2));
  }

  double T() const override { return T_; }

  ProfileJet jet(double t) const override {
    const double x = std::clamp(t, 0.0, T_);
    const double k = pi / T_;
    const double s = std::sin(k * x) / k, s1 = std::cos(k * x),
                 s2 = -k * std::sin(k * x);
    const double p = (*psi_)(x), p1 = psi_->prime(x), p2 = psi_->double_prime(x);
    return {s * p, s1 * p + s * p1, s2 * p + 2.0 * s1 * p1 + s * p2};
  }

  std::string tag() const override { return "table(" + source_ + ")"; }

 private:
  // the cardinal variant's double_prime drops a 1/dx^2 factor in Boost 1.74
  using Interp = boost::math::interpolators::quintic_hermite<std::vector<double>>;

  double s_of(double t) const { return T_ / pi * std::sin(pi * t / T_); }

  double T_ = 0.0;
  std::string source_;
  std::shared_ptr<Interp> psi_;
};

class Reversed final : public ProfileModel {
 public:
  explicit Reversed(std::shared_ptr<const ProfileModel> base) : base_(std::move(base)) {}
  double T() const override { return base_->T(); }
  ProfileJet jet(double t) const override {
    const auto j = base_->jet(base_->T() - t);
    return {j.phi, -j.d1, j.d2};
  }
  std::string tag() const override { return "reverse(" + base_->tag() + ")"; }
  std::optional<double> c3(Pole pole) const override { return base_->c3(opposite(pole)); }

 private:
  std::shared_ptr<const ProfileModel> base_;
};

// The metric c^2 g, written again in unit-speed form: T -> cT and
// phi~(s) = c phi(s/c).
class Homothety final : public ProfileModel {
 public:
  Homothety(std::shared_ptr<const ProfileModel> base, double c)
      : base_(std::move(base)), c_(c) {
    if (!(c > 0.0)) throw Error(ErrorKind::invalid_argument, "homothety: c must be > 0");
  }
  double T() const override { return c_ * base_->T(); }
  ProfileJet jet(double s) const override {
    const auto j = base_->jet(std::min(s / c_, base_->T()));
    return {c_ * j.phi, j.d1, j.d2 / c_};
  }
  std::string tag() const override {
    std::ostringstream os;
    os.precision(17);
    os << "scale(" << base_->tag() << "," << c_ << ")";
    return os.str();
  }
  std::optional<double> c3(Pole pole) const override {
    auto b = base_->c3(pole);
    if (!b) return std::nullopt;
    return *b / (c_ * c_);
  }

 private:
  std::shared_ptr<const ProfileModel> base_;
  double c_;
};

}  // namespace models

/// w(x) = sum_k a_k cos(k pi x / L): smooth, radial, and even at both poles.
struct CosineSeries {
  std::vector<double> coeffs{1.0};
  double L = pi;

  double operator()(double x) const { return eval(x, 0); }
  double d1(double x) const { return eval(x, 1); }
  double d2(double x) const { return eval(x, 2); }

  double eval(double x, int order) const {
    const double k0 = pi / L;
    double sum = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      const double w = k0 * static_cast<double>(k);
      switch (order) {
        case 0: sum += coeffs[k] * std::cos(w * x); break;
        case 1: sum -= coeffs[k] * w * std::sin(w * x); break;
        default: sum -= coeffs[k] * w * w * std::cos(w * x); break;
      }
    }
    return sum;
  }

  // exact antiderivative of w^2 from 0
  double square_integral(double x) const {
    const double k0 = pi / L;
    double sum = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double ajk = 0.5 * coeffs[j] * coeffs[k];
        for (long m : {static_cast<long>(j) - static_cast<long>(k),
                       static_cast<long>(j + k)}) {
          if (m == 0) {
            sum += ajk * x;
          } else {
            sum += ajk * std::sin(k0 * m * x) / (k0 * m);
          }
        }
      }
    }
    return sum;
  }

  double min_on(double a, double b, int samples = 4096) const {
    double m = (*this)(a);
    for (int i = 1; i <= samples; ++i) m = std::min(m, (*this)(a + (b - a) * i / samples));
    return m;
  }
};

namespace models {

// The conformal metric w^4 g in unit-speed form: ds = w^2 dt, phi~ = w^2 phi.
class Conformal final : public ProfileModel {
 public:
  Conformal(std::shared_ptr<const ProfileModel> base, CosineSeries w)
      : base_(std::move(base)), w_(std::move(w)) {
    w_.L = base_->T();
    if (!(w_.min_on(0.0, base_->T()) > 0.0)) {
      throw Error(ErrorKind::invalid_argument, "conformal: w must be positive");
    }
    T_ = w_.square_integral(base_->T());
  }

  double T() const override { return T_; }

  /// Base coordinate t for the new arclength s.
  double base_coordinate(double s) const {
    const double Tb = base_->T();
    if (s <= 0.0) return 0.0;
    if (s >= T_) return Tb;
    double lo = 0.0, hi = Tb, t = s / T_ * Tb;
    for (int it = 0; it < 100; ++it) {
      const double f = w_.square_integral(t) - s;
      if (f > 0.0) hi = t; else lo = t;
      const double w = w_(t);
      double next = t - f / (w * w);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - t) <= 1e-16 * std::max(1.0, Tb)) return next;
      t = next;
    }
    return t;
  }

  ProfileJet jet(double s) const override {
    const double t = base_coordinate(s);
    const auto j = base_->jet(t);
    const double w = w_(t), r1 = w_.d1(t) / w, r2 = w_.d2(t) / w;
    return {w * w * j.phi, 2.0 * r1 * j.phi + j.d1,
            (2.0 * (r2 - r1 * r1) * j.phi + 2.0 * r1 * j.d1 + j.d2) / (w * w)};
  }

  std::string tag() const override { return "conformal(" + base_->tag() + ")"; }

  const CosineSeries& factor() const { return w_; }
  const ProfileModel& base() const { return *base_; }

 private:
  std::shared_ptr<const ProfileModel> base_;
  CosineSeries w_;
  double T_ = 0.0;
};

}  // namespace models

/// Rotationally symmetric metric dt^2 + phi(t)^2 sigma_2 on S^3 together with
/// the uniform grid every nodal computation uses.
class WarpProfile {
 public:
  WarpProfile(std::shared_ptr<const ProfileModel> model, int n)
      : model_(std::move(model)), grid_{model_->T(), n} {
    if (n < 64) throw Error(ErrorKind::invalid_argument, "grid: need n >= 64");
    if (n % 2 != 0) throw Error(ErrorKind::invalid_argument, "grid: n must be even");
    phi_.resize(grid_.size());
    d1_.resize(grid_.size());
    d2_.resize(grid_.size());
    for (int i = 0; i <= n; ++i) {
      const auto j = model_->jet(grid_.node(i));
      phi_[i] = j.phi;
      d1_[i] = j.d1;
      d2_[i] = j.d2;
      if (i > 0 && i < n && !(j.phi > 0.0)) {
        throw Error(ErrorKind::invalid_profile, "phi must be positive inside (0,T)");
      }
    }
  }

  double T() const { return grid_.T; }
  int n() const { return grid_.n; }
  const Grid& grid() const { return grid_; }
  std::string family_tag() const { return model_->tag(); }
  const ProfileModel& model() const { return *model_; }
  std::shared_ptr<const ProfileModel> model_ptr() const { return model_; }

  ProfileJet jet(double t) const { return model_->jet(t); }
  double phi(double t) const { return model_->jet(t).phi; }

  const std::vector<double>& phi_nodes() const { return phi_; }
  const std::vector<double>& d1_nodes() const { return d1_; }
  const std::vector<double>& d2_nodes() const { return d2_; }

  WarpProfile with_grid(int n) const { return WarpProfile(model_, n); }

 private:
  std::shared_ptr<const ProfileModel> model_;
  Grid grid_;
  std::vector<double> phi_, d1_, d2_;
};

inline WarpProfile round_profile(int n) {
  return WarpProfile(std::make_shared<models::Round>(), n);
}

inline WarpProfile pinched_profile(double lambda, int n) {
  if (!(lambda >= 0.0)) throw Error(ErrorKind::invalid_argument, "pinched: lambda must be >= 0");
  return WarpProfile(std::make_shared<models::Pinched>(lambda), n);
}

inline WarpProfile table_profile(std::vector<double> t, std::vector<double> phi, int n,
                                 std::string source = "inline") {
  return WarpProfile(
      std::make_shared<models::Table>(std::move(t), std::move(phi), std::move(source)), n);
}

/// Reads a `t,phi` CSV (header required).
inline WarpProfile table_profile(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_argument, "cannot open table " + path);
  std::string line;
  std::getline(in, line);
  line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
  if (line != "t,phi") {
    throw Error(ErrorKind::invalid_profile, "table: expected header t,phi");
  }
  std::vector<double> t, phi;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a, b;
    if (!(row >> a >> b)) throw Error(ErrorKind::invalid_profile, "table: bad row: " + line);
    t.push_back(a);
    phi.push_back(b);
  }
  return table_profile(std::move(t), std::move(phi), n, path);
}

inline WarpProfile reverse(const WarpProfile& p) {
  return WarpProfile(std::make_shared<models::Reversed>(p.model_ptr()), p.n());
}

inline WarpProfile homothety(const WarpProfile& p, double c) {
  return WarpProfile(std::make_shared<models::Homothety>(p.model_ptr(), c), p.n());
}

inline WarpProfile conformal(const WarpProfile& p, CosineSeries w) {
  return WarpProfile(std::make_shared<models::Conformal>(p.model_ptr(), std::move(w)), p.n());
}

/// Scal = -4 phi''/phi + 2 (1 - phi'^2)/phi^2 at an interior point.
inline double scalar_curvature_at(const ProfileJet& j) {
  return -4.0 * j.d2 / j.phi + 2.0 * (1.0 - j.d1 * j.d1) / (j.phi * j.phi);
}

inline RadialField scalar_curvature(const WarpProfile& p) {
  const int n = p.n();
  const double h = p.grid().h();
  RadialField f{p.grid(), std::vector<double>(p.grid().size()), 0, Pole::P};
  for (int i = 1; i < n; ++i) {
    f.values[i] = scalar_curvature_at({p.phi_nodes()[i], p.d1_nodes()[i], p.d2_nodes()[i]});
  }
  for (Pole pole : {Pole::P, Pole::Q}) {
    const auto near = near_pole(f.values, pole);
    const double limit = even_pole_limit(near, h);
    // same fit shifted one node inward; disagreement means the grid cannot
    // resolve the pole series
    std::array<double, 4> shifted{};
    for (std::size_t k = 0; k < 4; ++k) {
      shifted[k] = pole == Pole::P ? f.values[k + 2] : f.values[n - k - 2];
    }
    std::array<double, 4> x{};
    for (std::size_t k = 0; k < 4; ++k) x[k] = std::pow((k + 2) * h, 2);
    const double check = detail::lagrange_at_zero(x, shifted);
    const double scale = std::max({1.0, std::abs(limit), std::abs(near[0])});
    if (!std::isfinite(limit) || std::abs(limit - check) > 1e-4 * scale) {
      throw Error(ErrorKind::coarse_grid,
                  std::string("scalar_curvature: grid too coarse at pole ") + to_string(pole));
    }
    (pole == Pole::P ? f.values.front() : f.values.back()) = limit;
  }
  return f;
}

/// Trace mean curvature 2 phi'/phi of the t-sphere, normal +d/dt.
inline double mean_curvature_base(const WarpProfile& p, double t) {
  if (!(t > 0.0 && t < p.T())) {
    throw Error(ErrorKind::invalid_argument, "mean_curvature_base: t outside (0,T)");
  }
  const auto j = p.jet(t);
  return 2.0 * j.d1 / j.phi;
}

/// Integral of f * 4 pi phi^weight dt over [0,T], Simpson on the profile grid.
/// A field singular like 1/t is accepted when weight >= 1.
inline QuadratureResult integrate_radial(const WarpProfile& p, const RadialField& f,
                                         int weight) {
  if (f.grid != p.grid()) {
    throw Error(ErrorKind::invalid_argument, "integrate_radial: grid mismatch");
  }
  if (weight < 0) throw Error(ErrorKind::invalid_argument, "integrate_radial: weight < 0");
  const int n = p.n();
  const double h = p.grid().h();
  std::vector<double> g(p.grid().size());
  for (int i = 1; i < n; ++i) g[i] = 4.0 * pi * f.values[i] * std::pow(p.phi_nodes()[i], weight);
  for (Pole pole : {Pole::P, Pole::Q}) {
    double& end = pole == Pole::P ? g.front() : g.back();
    const std::size_t idx = pole == Pole::P ? 0 : static_cast<std::size_t>(n);
    if (!f.singular_at(pole)) {
      end = weight == 0 ? 4.0 * pi * f.values[idx] : 0.0;
      continue;
    }
    if (weight == 0) {
      throw Error(ErrorKind::non_integrable, "integrate_radial: 1/t singularity with weight 0");
    }
    if (weight > 1) {
      end = 0.0;
    } else {
      // limit of 4 pi phi f = 4 pi (d f) (phi/d)
      std::array<double, 4> df{};
      for (std::size_t k = 0; k < 4; ++k) {
        const std::size_t i = pole == Pole::P ? k + 1 : n - k - 1;
        df[k] = (k + 1) * h * f.values[i];
      }
      end = 4.0 * pi * plain_pole_limit(df, h);
    }
  }
  return simpson_with_error(g, h);
}

/// Nodal samples of a regular callable on the profile grid, poles included.
template <class F>
RadialField sample(const WarpProfile& p, F&& f) {
  RadialField r{p.grid(), std::vector<double>(p.grid().size()), 0, Pole::P};
  for (int i = 0; i <= p.n(); ++i) r.values[i] = f(p.grid().node(i));
  return r;
}

}  // namespace thetalab
