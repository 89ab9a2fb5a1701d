#pragma once

// Special functions on the positive real line: log-gamma and friends, the
// first two polygamma functions, the unit-argument 3F2 series and adaptive
// quadrature on (0,1). Every function here is pure and reentrant.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "ys/error.hpp"

namespace ys {

struct SeriesControl {
  double rel_tol = 1e-12;
  std::uint64_t max_terms = 10'000'000;

  void validate() const {
    detail::require(rel_tol > 0.0, "SeriesControl: rel_tol must be positive");
    detail::require(max_terms >= 1, "SeriesControl: max_terms must be >= 1");
  }
};

struct QuadratureControl {
  double abs_tol = 1e-9;
  int max_subdivisions = 4000;

  void validate() const {
    detail::require(abs_tol > 0.0, "QuadratureControl: abs_tol must be positive");
    detail::require(max_subdivisions >= 1,
                    "QuadratureControl: max_subdivisions must be >= 1");
  }
};

struct QuadratureResult {
  double value;
  double error;
};

// ln Gamma(x) for x > 0. Backed by the C library's reentrant lgamma.
inline double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma: x must be positive and finite");
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

namespace detail {

// Stirling remainder: ln Gamma(z) - [(z - 1/2) ln z - z + ln(2 pi)/2].
inline double stirling_remainder(double z) {
  static constexpr std::array<double, 8> kCoef = {
      1.0 / 12.0,       -1.0 / 360.0,      1.0 / 1260.0, -1.0 / 1680.0,
      1.0 / 1188.0,     -691.0 / 360360.0, 1.0 / 156.0,  -3617.0 / 122400.0};
  const double inv = 1.0 / z;
  const double inv2 = inv * inv;
  double acc = 0.0;
  for (auto it = kCoef.rbegin(); it != kCoef.rend(); ++it) acc = acc * inv2 + *it;
  return acc * inv;
}

inline constexpr double kStirlingThreshold = 10.0;

}  // namespace detail

// ln Gamma(x + d) - ln Gamma(x) for x > 0, d >= 0, without the cancellation
// that the plain difference suffers once x is large (e.g. k ~ 1e7).
inline double log_gamma_ratio(double x, double d) {
  if (!(x > 0.0) || !(d >= 0.0) || !std::isfinite(x) || !std::isfinite(d))
    throw DomainError("log_gamma_ratio: need x > 0 and d >= 0");
  if (d == 0.0) return 0.0;
  if (x < detail::kStirlingThreshold) return log_gamma(x + d) - log_gamma(x);
  const double y = x + d;
  return (x - 0.5) * std::log1p(d / x) + d * std::log(y) - d +
         detail::stirling_remainder(y) - detail::stirling_remainder(x);
}

// ln B(a, b). Arguments are ordered internally so log_beta(a,b) and
// log_beta(b,a) are bit-identical.
inline double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("log_beta: arguments must be positive");
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  return log_gamma(lo) - log_gamma_ratio(hi, lo);
}

inline double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("digamma: x must be positive and finite");
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  // -sum B_{2k} / (2k x^{2k}), k = 1..7
  const double series =
      inv2 * (-1.0 / 12.0 +
              inv2 * (1.0 / 120.0 +
                      inv2 * (-1.0 / 252.0 +
                              inv2 * (1.0 / 240.0 +
                                      inv2 * (-1.0 / 132.0 +
                                              inv2 * (691.0 / 32760.0 +
                                                      inv2 * (-1.0 / 12.0)))))));
  return shift + std::log(x) - 0.5 / x + series;
}

inline double trigamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("trigamma: x must be positive and finite");
  double shift = 0.0;
  while (x < 10.0) {
    shift += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // sum B_{2k} / x^{2k+1}, k = 1..7
  const double series =
      inv * inv2 *
      (1.0 / 6.0 +
       inv2 * (-1.0 / 30.0 +
               inv2 * (1.0 / 42.0 +
                       inv2 * (-1.0 / 30.0 +
                               inv2 * (5.0 / 66.0 +
                                       inv2 * (-691.0 / 2730.0 + inv2 * (7.0 / 6.0)))))));
  return shift + inv + 0.5 * inv2 + series;
}

// 3F2(1, a, 1; b, b; 1) = sum_l l! (a)_l / ((b)_l)^2.
//
// Terms follow t_{l+1} = t_l (l+1)(a+l)/(b+l)^2 and decay like
// l^{-(2b-a-1)}, so the plain series is slow when b - a is small. The tail is
// bracketed in closed form: with g(m) = m/(2b-a-2) + beta, one has
// t_m (1 + e0/(b+m)^2) = u_m - u_{m+1} for u_m = t_m g(m), which pins
// sum_{m>=L} t_m between u_L and u_L / (1 - |e0|/(b+L)^2). Summation stops
// once that bracket is narrower than rel_tol times the total.
inline double hyp3f2_unit(double a, double b, const SeriesControl& ctrl = {}) {
  ctrl.validate();
  if (!(a > 0.0) || !(b > a) || !std::isfinite(b))
    throw DomainError("hyp3f2_unit: need a > 0 and b > a");
  const double tail_exp = 2.0 * b - a - 2.0;
  if (!(tail_exp > 0.0)) throw DomainError("hyp3f2_unit: series diverges (2b - a - 2 <= 0)");

  const double g_slope = 1.0 / tail_exp;
  const double g_icpt = (2.0 * b - g_slope * (b * b - 2.0 * a - 1.0)) / (2.0 * b - a - 1.0);
  const double e0 = b * b * g_icpt - (g_slope + g_icpt) * a - b * b;

  double sum = 0.0;
  double term = 1.0;
  double estimate = 1.0;
  double half_width = std::numeric_limits<double>::infinity();
  for (std::uint64_t l = 0; l < ctrl.max_terms; ++l) {
    sum += term;
    const double lf = static_cast<double>(l);
    const double m = lf + 1.0;
    const double next = term * m * (a + lf) / ((b + lf) * (b + lf));
    const double g = g_slope * m + g_icpt;
    const double delta = e0 / ((b + m) * (b + m));
    if (g > 0.0 && std::abs(delta) < 0.5) {
      const double u = next * g;
      const double lo = e0 <= 0.0 ? u : u / (1.0 + delta);
      const double hi = e0 <= 0.0 ? u / (1.0 - std::abs(delta)) : u;
      estimate = sum + 0.5 * (lo + hi);
      half_width = 0.5 * (hi - lo);
      if (half_width <= ctrl.rel_tol * estimate) return estimate;
    }
    term = next;
  }
  throw NumericalError("hyp3f2_unit: max_terms reached before rel_tol", estimate, half_width);
}

namespace detail {

struct GkSegment {
  double lo;
  double hi;
  double value;
  double error;
};

template <class F>
GkSegment gauss_kronrod15(const F& f, double lo, double hi) {
  static constexpr std::array<double, 8> kNodes = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.0};
  static constexpr std::array<double, 8> kKronrod = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  // Gauss weights for nodes 1, 3, 5 and the centre.
  static constexpr std::array<double, 4> kGauss = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(mid);
  double kronrod = fc * kKronrod[7];
  double gauss = fc * kGauss[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    const double pair = f(mid - dx) + f(mid + dx);
    kronrod += kKronrod[i] * pair;
    if (i % 2 == 1) gauss += kGauss[i / 2] * pair;
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) on [lo, hi]. Never evaluates f at
// the endpoints.
template <class F>
QuadratureResult integrate(const F& f, double lo, double hi, const QuadratureControl& ctrl) {
  ctrl.validate();
  if (!(hi > lo)) throw DomainError("integrate: need hi > lo");
  std::vector<detail::GkSegment> segments{detail::gauss_kronrod15(f, lo, hi)};
  auto totals = [&segments] {
    double v = 0.0, e = 0.0;
    for (const auto& s : segments) {
      v += s.value;
      e += s.error;
    }
    return QuadratureResult{v, e};
  };
  for (int iter = 0;; ++iter) {
    const QuadratureResult now = totals();
    if (!std::isfinite(now.value))
      throw NumericalError("integrate: integrand produced a non-finite value");
    if (now.error <= ctrl.abs_tol) return now;
    if (iter >= ctrl.max_subdivisions)
      throw NumericalError("integrate: tolerance not met within max_subdivisions", now.value,
                           now.error);
    auto worst = std::max_element(segments.begin(), segments.end(),
                                  [](const auto& x, const auto& y) { return x.error < y.error; });
    const double a = worst->lo;
    const double b = worst->hi;
    const double m = 0.5 * (a + b);
    if (!(m > a && m < b)) {
      throw NumericalError("integrate: interval cannot be bisected further", now.value,
                           now.error);
    }
    *worst = detail::gauss_kronrod15(f, a, m);
    segments.push_back(detail::gauss_kronrod15(f, m, b));
  }
}

// Integral of f over (0,1). On (1 - 0.1, 1) the substitution alpha = 1 - u^2
// turns a (1 - alpha)^{-1/2} endpoint singularity into a bounded integrand.
template <class F>
QuadratureResult integrate_unit_interval(const F& f, const QuadratureControl& ctrl = {}) {
  ctrl.validate();
  constexpr double kSplit = 0.1;
  QuadratureControl half = ctrl;
  half.abs_tol = 0.5 * ctrl.abs_tol;
  const QuadratureResult body = integrate(f, 0.0, 1.0 - kSplit, half);
  const QuadratureResult edge = integrate(
      [&f](double u) { return 2.0 * u * f(1.0 - u * u); }, 0.0, std::sqrt(kSplit), half);
  return {body.value + edge.value, body.error + edge.error};
}

}  // namespace ys
