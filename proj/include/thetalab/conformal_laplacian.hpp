#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <boost/math/quadrature/gauss.hpp>

#include "thetalab/error.hpp"
#include "thetalab/grid.hpp"
#include "thetalab/warped_geometry.hpp"

namespace thetalab {

/// L u = 8 Delta u + Scal u on a radial function, with the positive Laplacian
/// Delta u = -u'' - 2 (phi'/phi) u'. Fourth-order differences, even ghosts.
inline RadialField apply_L(const WarpProfile& p, const RadialField& u) {
  if (u.singular_order != 0) {
    throw Error(ErrorKind::singular_field, "apply_L: u must be regular");
  }
  if (u.grid != p.grid()) throw Error(ErrorKind::invalid_argument, "apply_L: grid mismatch");
  const auto scal = scalar_curvature(p);
  const int n = p.n();
  const double h = p.grid().h();
  RadialField out{p.grid(), std::vector<double>(p.grid().size()), 0, Pole::P};
  for (int i = 1; i < n; ++i) {
    const double u1 = fd_first(u.values, i, h), u2 = fd_second(u.values, i, h);
    const double lap = -u2 - 2.0 * p.d1_nodes()[i] / p.phi_nodes()[i] * u1;
    out.values[i] = 8.0 * lap + scal[i] * u[i];
  }
  out.values.front() = even_pole_limit(near_pole(out.values, Pole::P), h);
  out.values.back() = even_pole_limit(near_pole(out.values, Pole::Q), h);
  return out;
}

/// Pointwise L u from exact derivatives of u.
inline double apply_L_at(const ProfileJet& j, double u, double u1, double u2) {
  return 8.0 * (-u2 - 2.0 * j.d1 / j.phi * u1) + scalar_curvature_at(j) * u;
}

/// sup |L u| / sup |u| over nodes with t in [a, b].
inline double window_residual(const WarpProfile& p, const RadialField& Lu,
                              const RadialField& u, double a, double b) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i <= p.n(); ++i) {
    const double t = p.grid().node(i);
    if (t < a || t > b) continue;
    num = std::max(num, std::abs(Lu[i]));
    den = std::max(den, std::abs(u[i]));
  }
  return den > 0.0 ? num / den : num;
}

/// Quadratic finite elements on pairs of grid cells. Nodal values of a radial
/// function are the element coefficients, so a RadialField is a discrete
/// test function directly.
class YamabeDiscretization {
 public:
  static constexpr int kQuad = 7;

  explicit YamabeDiscretization(const WarpProfile& p) : grid_(p.grid()) {
    const int n = p.n();
    const double h = p.grid().h();
    const auto& ab = boost::math::quadrature::gauss<double, kQuad>::abscissa();
    const auto& wt = boost::math::quadrature::gauss<double, kQuad>::weights();
    std::array<double, kQuad> x{}, w{};
    int q = 0;
    for (std::size_t k = 0; k < ab.size(); ++k) {
      if (ab[k] == 0.0) {
        x[q] = 0.0; w[q++] = wt[k];
      } else {
        x[q] = -ab[k]; w[q++] = wt[k];
        x[q] = ab[k]; w[q++] = wt[k];
      }
    }
    for (int k = 0; k < kQuad; ++k) {
      const double xi = x[k];
      basis_[k] = {0.5 * xi * (xi - 1.0), 1.0 - xi * xi, 0.5 * xi * (xi + 1.0)};
      dbasis_[k] = {(xi - 0.5) / h, -2.0 * xi / h, (xi + 0.5) / h};
    }
    const int ne = n / 2;
    mass_.resize(static_cast<std::size_t>(ne) * kQuad);
    pot_.resize(mass_.size());
    for (int e = 0; e < ne; ++e) {
      const double tm = p.grid().node(2 * e + 1);
      for (int k = 0; k < kQuad; ++k) {
        const auto j = p.jet(tm + h * x[k]);
        const double dv = 4.0 * pi * w[k] * h * j.phi * j.phi;
        mass_[e * kQuad + k] = dv;
        pot_[e * kQuad + k] = dv * scalar_curvature_at(j);
      }
    }
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(ne) * 9);
    for (int e = 0; e < ne; ++e) {
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          double kab = 0.0, mab = 0.0;
          for (int k = 0; k < kQuad; ++k) {
            const double m = mass_[e * kQuad + k];
            kab += 8.0 * m * dbasis_[k][a] * dbasis_[k][b] +
                   pot_[e * kQuad + k] * basis_[k][a] * basis_[k][b];
            mab += m * basis_[k][a] * basis_[k][b];
          }
          trip.emplace_back(2 * e + a, 2 * e + b, kab);
          mtrip_.emplace_back(2 * e + a, 2 * e + b, mab);
        }
      }
    }
    K_.resize(n + 1, n + 1);
    K_.setFromTriplets(trip.begin(), trip.end());
  }

  const Eigen::SparseMatrix<double>& stiffness() const { return K_; }

  Eigen::SparseMatrix<double> mass_matrix() const {
    Eigen::SparseMatrix<double> M(grid_.n + 1, grid_.n + 1);
    M.setFromTriplets(mtrip_.begin(), mtrip_.end());
    return M;
  }

  /// 4 pi int (8 phi^2 u'^2 + Scal phi^2 u^2) dt
  double energy(const Eigen::VectorXd& u) const { return u.dot(K_ * u); }

  /// 4 pi int phi^2 u^6 dt, and optionally its gradient / 6.
  double sextic(const Eigen::VectorXd& u, Eigen::VectorXd* grad = nullptr) const {
    const int ne = grid_.n / 2;
    if (grad) grad->setZero(u.size());
    double sum = 0.0;
    for (int e = 0; e < ne; ++e) {
      for (int k = 0; k < kQuad; ++k) {
        const auto& N = basis_[k];
        const double v = N[0] * u[2 * e] + N[1] * u[2 * e + 1] + N[2] * u[2 * e + 2];
        const double v2 = v * v, m = mass_[e * kQuad + k];
        sum += m * v2 * v2 * v2;
        if (grad) {
          const double g = m * v2 * v2 * v;
          for (int a = 0; a < 3; ++a) (*grad)[2 * e + a] += g * N[a];
        }
      }
    }
    return sum;
  }

  double quotient(const Eigen::VectorXd& u) const {
    const double d = sextic(u);
    if (!(d > 0.0)) throw Error(ErrorKind::invalid_argument, "yamabe_quotient: u is zero");
    return energy(u) / std::cbrt(d);
  }

 private:
  Grid grid_;
  std::array<std::array<double, 3>, kQuad> basis_{}, dbasis_{};
  std::vector<double> mass_, pot_;
  std::vector<Eigen::Triplet<double>> mtrip_;
  Eigen::SparseMatrix<double> K_;
};

inline Eigen::VectorXd to_vector(const RadialField& u) {
  return Eigen::Map<const Eigen::VectorXd>(u.values.data(), static_cast<Eigen::Index>(u.size()));
}

inline double yamabe_quotient(const WarpProfile& p, const RadialField& u) {
  if (u.singular_order != 0) {
    throw Error(ErrorKind::singular_field, "yamabe_quotient: u must be regular");
  }
  if (u.grid != p.grid()) throw Error(ErrorKind::invalid_argument, "yamabe_quotient: grid mismatch");
  return YamabeDiscretization(p).quotient(to_vector(u));
}

/// True when the discrete Yamabe operator is positive definite on radial
/// functions (equivalently the symmetric Yamabe constant is positive).
inline bool yamabe_positive(const WarpProfile& p) {
  YamabeDiscretization disc(p);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(disc.stiffness());
  if (ldlt.info() != Eigen::Success) return false;
  return (ldlt.vectorD().array() > 0.0).all();
}

struct YamabeOptions {
  double tol = 1e-10;
  int max_iter = 100000;
  double floor = 1e-12;
};

struct YamabeReport {
  double value = 0.0;
  RadialField minimizer;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  bool nonpositive = false;
  std::vector<double> history;
};

/// Projected, preconditioned gradient descent on the quotient over positive
/// radial functions with Armijo backtracking. The preconditioner is the
/// stiffness matrix (shifted when indefinite); the unit Armijo trial step is
/// then the inverse-power update u <- N K^{-1} u^5.
inline YamabeReport minimize_yamabe_sym(const WarpProfile& p, const YamabeOptions& opts = {}) {
  if (!(opts.tol > 0.0)) throw Error(ErrorKind::invalid_argument, "minimize_yamabe_sym: tol <= 0");
  YamabeDiscretization disc(p);
  const auto& K = disc.stiffness();
  Eigen::SparseMatrix<double> P = K;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> pre(P);
  if (pre.info() != Eigen::Success || !(pre.vectorD().array() > 0.0).all()) {
    const auto scal = scalar_curvature(p);
    const double lo = *std::min_element(scal.values.begin(), scal.values.end());
    P = K + (std::abs(lo) + 1.0) * disc.mass_matrix();
    pre.compute(P);
    if (pre.info() != Eigen::Success) {
      throw Error(ErrorKind::integration_failure, "minimize_yamabe_sym: preconditioner failed");
    }
  }

  const Eigen::Index m = K.rows();
  auto normalize = [&](Eigen::VectorXd& u) {
    u = u.cwiseMax(opts.floor);
    u /= std::pow(disc.sextic(u), 1.0 / 6.0);
  };

  YamabeReport rep;
  Eigen::VectorXd u = Eigen::VectorXd::Ones(m);
  normalize(u);
  double Q = disc.energy(u);
  rep.history.push_back(Q);
  Eigen::VectorXd B(m);
  for (int it = 1; it <= opts.max_iter; ++it) {
    if (Q <= 0.0) {
      rep.nonpositive = true;
      break;
    }
    disc.sextic(u, &B);
    // gradient of N / D^{1/3} at D = 1
    const Eigen::VectorXd grad = 2.0 * (K * u) - 2.0 * Q * B;
    const Eigen::VectorXd dir = -pre.solve(grad);
    const double slope = grad.dot(dir);
    double alpha = 0.5, Qn = Q;
    Eigen::VectorXd un;
    bool accepted = false;
    while (alpha > 1e-20) {
      un = u + alpha * dir;
      normalize(un);
      Qn = disc.energy(un);
      if (Qn <= Q + 1e-4 * alpha * slope || Qn <= Q) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    rep.iterations = it;
    if (!accepted) {
      rep.residual = 0.0;
      rep.converged = true;
      break;
    }
    const double change = std::abs(Q - Qn) / std::abs(Qn);
    u = un;
    Q = Qn;
    rep.history.push_back(Q);
    rep.residual = change;
    if (change < opts.tol) {
      rep.converged = true;
      break;
    }
  }
  if (Q <= 0.0) rep.nonpositive = true;
  rep.value = Q;
  rep.minimizer = RadialField{p.grid(), std::vector<double>(u.data(), u.data() + m), 0, Pole::P};
  return rep;
}

/// 6 (2 pi^2)^{2/3}, the Yamabe constant of the round 3-sphere.
inline double mu_sigma() { return 6.0 * std::pow(2.0 * pi * pi, 2.0 / 3.0); }

}  // namespace thetalab
