#pragma once

#include <optional>

#include "hv/distribution.hpp"

namespace hv {

/// Asymmetry level alpha in (0, 1) and caps a, b > 0 of a Huber functional.
class HuberParams {
 public:
  HuberParams(double alpha, double a, double b);
  /// The a = b case.
  static HuberParams symmetric(double alpha, double a) { return {alpha, a, a}; }

  double alpha() const { return alpha_; }
  double a() const { return a_; }
  double b() const { return b_; }

 private:
  double alpha_;
  double a_;
  double b_;
};

/// A closed interval [lo, hi]; lo == hi for single-valued functionals.
struct IntervalResult {
  double lo;
  double hi;

  double midpoint() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

/// G(u) = (1 - alpha) int_{u-b}^u F - alpha int_u^{u+a} (1 - F).
/// Continuous and nondecreasing; its zero set is the Huber functional.
double g_value(const Distribution& dist, const HuberParams& params, double u);

/// Slope of G from the right: (1-alpha)(F(u) - F(u-b)) + alpha(F(u+a) - F(u)).
double g_slope(const Distribution& dist, const HuberParams& params, double u);

/// The Huber quantile H^alpha_{a,b}(F) as the zero interval of G.
///
/// `tol` is an argument-domain tolerance; it defaults to
/// 1e-9 * max(1, width) where width is the support width, or the width of the
/// initial sign-change bracket for unbounded support.
IntervalResult huber_functional(const Distribution& dist, const HuberParams& params,
                                std::optional<double> tol = std::nullopt);

/// The closed interval of alpha-quantiles {x : F(x-) <= alpha <= F(x)}.
IntervalResult quantile(const Distribution& dist, double alpha);

/// The alpha-expectile: unique root of alpha E(Y-x)+ = (1-alpha) E(x-Y)+.
double expectile(const Distribution& dist, double alpha, std::optional<double> tol = std::nullopt);

}  // namespace hv
