#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "thetalab/error.hpp"

namespace thetalab {

/// The two poles of the radial coordinate: P sits at t = 0, Q at t = T.
enum class Pole { P, Q };

inline const char* to_string(Pole pole) { return pole == Pole::P ? "P" : "Q"; }
inline Pole opposite(Pole pole) { return pole == Pole::P ? Pole::Q : Pole::P; }

/// Uniform grid t_i = i*T/n, i = 0..n. Nodes 0 and n are the poles.
struct Grid {
  double T = 0.0;
  int n = 0;

  double h() const { return T / n; }
  double node(int i) const { return i == n ? T : T * static_cast<double>(i) / n; }
  std::size_t size() const { return static_cast<std::size_t>(n) + 1; }
  bool operator==(const Grid&) const = default;
};

/// Nodal samples of a radial function. Entries at a singular pole hold +inf;
/// regular pole entries hold the extrapolated limit.
struct RadialField {
  Grid grid;
  std::vector<double> values;
  int singular_order = 0;  // 0 or -1
  Pole singular_pole = Pole::P;

  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }

  bool singular_at(Pole pole) const {
    return singular_order == -1 && singular_pole == pole;
  }
};

namespace detail {

inline double lagrange_at_zero(std::span<const double, 4> x,
                               std::span<const double, 4> y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < 4; ++j) {
      if (j != i) w *= (0.0 - x[j]) / (x[i] - x[j]);
    }
    sum += w * y[i];
  }
  return sum;
}

}  // namespace detail

/// Limit at the pole of a function that is even in the distance d from that
/// pole, from samples at d = h, 2h, 3h, 4h (cubic in d^2).
inline double even_pole_limit(std::span<const double, 4> samples, double h) {
  std::array<double, 4> x{};
  for (std::size_t k = 0; k < 4; ++k) x[k] = std::pow((k + 1) * h, 2);
  return detail::lagrange_at_zero(x, samples);
}

/// Limit at the pole from samples at d = h..4h with no parity assumed.
inline double plain_pole_limit(std::span<const double, 4> samples, double h) {
  std::array<double, 4> x{};
  for (std::size_t k = 0; k < 4; ++k) x[k] = (k + 1) * h;
  return detail::lagrange_at_zero(x, samples);
}

/// The four interior samples nearest to `pole`, ordered by distance.
inline std::array<double, 4> near_pole(std::span<const double> values,
                                       Pole pole) {
  const std::size_t n = values.size() - 1;
  std::array<double, 4> out{};
  for (std::size_t k = 0; k < 4; ++k) {
    out[k] = pole == Pole::P ? values[k + 1] : values[n - k - 1];
  }
  return out;
}

/// Parity of a function under reflection through a pole (+1 even, -1 odd).
struct Parity {
  int at_p = 1;
  int at_q = 1;
};

namespace detail {

inline double reflected(std::span<const double> v, long i, Parity parity) {
  const long n = static_cast<long>(v.size()) - 1;
  if (i < 0) return parity.at_p * v[static_cast<std::size_t>(-i)];
  if (i > n) return parity.at_q * v[static_cast<std::size_t>(2 * n - i)];
  return v[static_cast<std::size_t>(i)];
}

}  // namespace detail

/// Fourth-order central first derivative at node i; ghost nodes past the
/// poles come from the given reflection parity.
inline double fd_first(std::span<const double> v, long i, double h,
                       Parity parity = {}) {
  using detail::reflected;
  return (-reflected(v, i + 2, parity) + 8.0 * reflected(v, i + 1, parity) -
          8.0 * reflected(v, i - 1, parity) + reflected(v, i - 2, parity)) /
         (12.0 * h);
}

/// Fourth-order central second derivative at node i.
inline double fd_second(std::span<const double> v, long i, double h,
                        Parity parity = {}) {
  using detail::reflected;
  return (-reflected(v, i + 2, parity) + 16.0 * reflected(v, i + 1, parity) -
          30.0 * v[static_cast<std::size_t>(i)] +
          16.0 * reflected(v, i - 1, parity) - reflected(v, i - 2, parity)) /
         (12.0 * h * h);
}

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Composite Simpson over uniform nodes (even number of intervals).
inline double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size() - 1;
  if (n < 2 || n % 2 != 0) {
    throw Error(ErrorKind::invalid_argument,
                "simpson: need an even number of intervals");
  }
  double sum = f[0] + f[n];
  for (std::size_t i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
  return sum * h / 3.0;
}

/// Simpson with a Richardson error estimate against the half-resolution rule.
inline QuadratureResult simpson_with_error(std::span<const double> f, double h) {
  QuadratureResult r;
  r.value = simpson(f, h);
  const std::size_t n = f.size() - 1;
  if (n % 4 == 0) {
    std::vector<double> coarse;
    coarse.reserve(n / 2 + 1);
    for (std::size_t i = 0; i <= n; i += 2) coarse.push_back(f[i]);
    r.error = std::abs(r.value - simpson(coarse, 2.0 * h)) / 15.0;
  } else {
    double trap = 0.5 * (f[0] + f[n]);
    for (std::size_t i = 1; i < n; ++i) trap += f[i];
    r.error = std::abs(r.value - trap * h);
  }
  return r;
}

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double inf = std::numeric_limits<double>::infinity();

}  // namespace thetalab
