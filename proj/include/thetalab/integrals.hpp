#pragma once

#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "thetalab/grid.hpp"

namespace thetalab {

// The two constants behind the Schwarzschild test function
// f(t) = 1/sqrt(2 e^t - e^{t/2}):
//   I = int_0^inf f'(t)^2 sqrt(e^t - e^{t/2}) dt          = 3 pi / 32
//   J = int_0^inf f(t)^6 e^{2t} / sqrt(e^t - e^{t/2}) dt  = pi / 2

namespace integrands {

// e^t - e^{t/2} without cancellation near 0
inline double gap(double t) { return std::exp(t / 2) * std::expm1(t / 2); }

// written in x = e^{-t/2} so nothing overflows for large t
inline double f(double t) {
  const double x = std::exp(-t / 2);
  return x / std::sqrt(2.0 - x);
}

inline double f_prime(double t) {
  const double x = std::exp(-t / 2), q = 2.0 - x;
  return -0.5 * x * (2.0 - 0.5 * x) / (q * std::sqrt(q));
}

// f'^2 sqrt(e^t - e^{t/2}) = x (2 - x/2)^2 sqrt(1 - x) / (4 (2 - x)^3)
inline double I_raw(double t) {
  const double x = std::exp(-t / 2), q = 2.0 - x, a = 2.0 - 0.5 * x;
  return 0.25 * x * a * a * std::sqrt(-std::expm1(-t / 2)) / (q * q * q);
}

// f^6 e^{2t} / sqrt(e^t - e^{t/2}) = x^3 / ((2 - x)^3 sqrt(1 - x))
inline double J_raw(double t) {
  const double x = std::exp(-t / 2), q = 2.0 - x;
  return x * x * x / (q * q * q * std::sqrt(-std::expm1(-t / 2)));
}

// after s = sqrt((e^{t/2} - 1)/e^{t/2}), s in (0, 1)
inline double I_sub(double s) {
  const double s2 = s * s, a = 3.0 + s2, b = s2 + 1.0;
  return 0.25 * a * a * s2 / (b * b * b);
}

// after s = sqrt(e^{t/2}/(e^{t/2} - 1)), s in (1, inf)
inline double J_sub(double s) {
  const double a = s * s - 1.0, b = s * s + 1.0;
  return 4.0 * a * a / (b * b * b);
}

}  // namespace integrands

struct IntegralValue {
  double value = 0.0;
  double error = 0.0;
};

/// I by Gauss-Kronrod on the substituted integrand.
inline IntegralValue integral_I() {
  IntegralValue r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrands::I_sub, 0.0, 1.0, 15, 1e-14, &r.error);
  return r;
}

/// J by Gauss-Kronrod on the substituted integrand (x = 1/s maps the tail to
/// a finite interval: 4 (1 - x^2)^2 / (1 + x^2)^3 on (0, 1)).
inline IntegralValue integral_J() {
  IntegralValue r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [](double x) {
        const double a = 1.0 - x * x, b = 1.0 + x * x;
        return 4.0 * a * a / (b * b * b);
      },
      0.0, 1.0, 15, 1e-14, &r.error);
  return r;
}

/// The same integrals on the raw t-form: tanh-sinh on [0, 1] (endpoint
/// degeneracy of sqrt(e^t - e^{t/2})) plus exp-sinh on [1, inf).
inline IntegralValue integral_raw(double (*g)(double)) {
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  IntegralValue r;
  double e1 = 0.0, e2 = 0.0;
  r.value = ts.integrate(g, 0.0, 1.0, 1e-13, &e1) + es.integrate(g, 1.0, inf, 1e-13, &e2);
  r.error = e1 + e2;
  return r;
}

inline IntegralValue integral_I_raw() { return integral_raw(integrands::I_raw); }
inline IntegralValue integral_J_raw() { return integral_raw(integrands::J_raw); }

}  // namespace thetalab
