#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace hv {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Standard normal density.
inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

/// Standard normal CDF, accurate in both tails.
inline double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

/// Upper tail 1 - Phi(z) without cancellation.
inline double normal_sf(double z) {
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

/// Owen's T function T(h, a) = 1/(2 pi) int_0^a exp(-h^2 (1+x^2)/2) / (1+x^2) dx.
///
/// Arguments with |a| > 1 are folded onto [0, 1] with the standard reflection
/// identity; the remaining integral is evaluated by adaptive Gauss-Kronrod
/// quadrature to an absolute tolerance of 1e-10 or better.
double owens_t(double h, double a);

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_depth = 40;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature on a finite interval [lo, hi].
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 QuadratureOptions options = {});

/// Value of a monotone function together with its slope, when known.
/// A NaN slope means "unavailable" and forces a bisection step.
struct SlopedValue {
  double value;
  double slope = std::numeric_limits<double>::quiet_NaN();
};

/// Edges of the zero set of a continuous nondecreasing function on a bracket.
struct ZeroSet {
  double lo;
  double hi;
};

/// Locates {u : |f(u)| <= ftol} for nondecreasing f with f(lo) < -ftol and
/// f(hi) > ftol. Returns the left edge sup{u : f(u) < -ftol} and right edge
/// inf{u : f(u) > ftol}, each to within xtol. Steps are Newton proposals kept
/// inside the current bracket, falling back to bisection, so convergence is
/// unconditional.
ZeroSet solve_monotone(const std::function<SlopedValue(double)>& f, double lo,
                       double hi, double xtol, double ftol);

struct Bracket {
  double lo;
  double hi;
};

/// Widens [lo, hi] until f(lo) < -ftol and f(hi) > ftol, doubling the step
/// outward from each endpoint (from `seed` when an endpoint is infinite).
/// Throws NumericError when no sign change is found.
Bracket bracket_monotone(const std::function<double(double)>& f, double lo,
                         double hi, double seed, double step, double ftol);

}  // namespace hv
