#include "hv/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hv/errors.hpp"
#include "hv/numerics.hpp"

namespace hv {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Probability slack when comparing cumulative weights with alpha.
constexpr double kProbSlack = 1e-12;

void require_level(double alpha, const char* what) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ArgumentError(std::string(what) + ": alpha must lie in (0, 1)");
  }
}

bool exact_integrals(const Distribution& dist) {
  return std::holds_alternative<EmpiricalSample>(dist.variant()) ||
         std::holds_alternative<PiecewiseLinearCdf>(dist.variant());
}

SlopedValue g_sloped(const Distribution& dist, const HuberParams& p, double u) {
  const double alpha = p.alpha();
  if (exact_integrals(dist)) {
    const double value = (1.0 - alpha) * dist.cdf_integral(u - p.b(), u) -
                         alpha * dist.complement_integral(u, u + p.a());
    return {value, g_slope(dist, p, u)};
  }
  const auto left = dist.lower_partial_point(u - p.b());
  const auto mid = dist.lower_partial_point(u);
  const auto right = dist.lower_partial_point(u + p.a());
  const double below = std::clamp(mid.lower - left.lower, 0.0, p.b());
  const double above = std::clamp(right.lower - mid.lower, 0.0, p.a());
  const double value = (1.0 - alpha) * below - alpha * (p.a() - above);
  const double slope = (1.0 - alpha) * (mid.cdf - left.cdf) + alpha * (right.cdf - mid.cdf);
  return {value, slope};
}

double default_tol(const SupportRange& support, const Bracket& bracket) {
  const double width = support.bounded() ? support.width() : bracket.hi - bracket.lo;
  return 1e-9 * std::max(1.0, width);
}

}  // namespace

HuberParams::HuberParams(double alpha, double a, double b) : alpha_(alpha), a_(a), b_(b) {
  require_level(alpha, "HuberParams");
  if (!(a > 0.0) || !std::isfinite(a) || !(b > 0.0) || !std::isfinite(b)) {
    throw ArgumentError("HuberParams: caps a and b must be positive and finite");
  }
}

double g_value(const Distribution& dist, const HuberParams& params, double u) {
  if (!std::isfinite(u)) throw DomainError("g_value: u must be finite");
  return g_sloped(dist, params, u).value;
}

double g_slope(const Distribution& dist, const HuberParams& params, double u) {
  const double f0 = dist.cdf(u);
  return (1.0 - params.alpha()) * (f0 - dist.cdf(u - params.b())) +
         params.alpha() * (dist.cdf(u + params.a()) - f0);
}

IntervalResult huber_functional(const Distribution& dist, const HuberParams& params,
                                std::optional<double> tol) {
  if (tol && !(*tol > 0.0)) throw ArgumentError("huber_functional: tol must be positive");
  const SupportRange support = dist.support();
  if (support.lo == support.hi) return {support.lo, support.lo};

  const double lo = std::isfinite(support.lo) ? support.lo - params.a() - 1.0 : -kInf;
  const double hi = std::isfinite(support.hi) ? support.hi + params.b() + 1.0 : kInf;
  const double magnitude = std::max({std::abs(std::isfinite(lo) ? lo : 0.0),
                                     std::abs(std::isfinite(hi) ? hi : 0.0),
                                     std::abs(dist.mean())});
  // Floor for rounding noise in G; values inside it count as zero.
  const double ftol = 256.0 * kEps * (params.a() + params.b() + magnitude);

  auto g = [&](double u) { return g_sloped(dist, params, u); };
  const Bracket bracket = bracket_monotone([&](double u) { return g(u).value; }, lo, hi,
                                           dist.mean(), std::max(1.0, params.a() + params.b()),
                                           ftol);
  const double xtol = tol.value_or(default_tol(support, bracket));
  const ZeroSet zero = solve_monotone(g, bracket.lo, bracket.hi, xtol, ftol);
  return {zero.lo, zero.hi};
}

IntervalResult quantile(const Distribution& dist, double alpha) {
  require_level(alpha, "quantile");
  if (const auto* e = std::get_if<EmpiricalSample>(&dist.variant())) {
    const auto& cum = e->cumulative;
    const auto lo = std::find_if(cum.begin(), cum.end(),
                                 [alpha](double c) { return c >= alpha - kProbSlack; });
    const auto hi = std::find_if(cum.begin(), cum.end(),
                                 [alpha](double c) { return c > alpha + kProbSlack; });
    const auto index = [&](auto it) {
      return it == cum.end() ? e->values.size() - 1 : static_cast<std::size_t>(it - cum.begin());
    };
    return {e->values[index(lo)], e->values[index(hi)]};
  }
  if (const auto* p = std::get_if<PiecewiseLinearCdf>(&dist.variant())) {
    // inf{t : F(t) >= alpha} and inf{t : F(t) > alpha}, by linear inversion on each segment.
    auto invert = [&](auto reached) {
      for (std::size_t k = 1; k < p->t.size(); ++k) {
        if (reached(p->cdf[k])) {
          const double rise = p->cdf[k] - p->cdf[k - 1];
          const double frac = rise > 0.0 ? (alpha - p->cdf[k - 1]) / rise : 0.0;
          return p->t[k - 1] + std::clamp(frac, 0.0, 1.0) * (p->t[k] - p->t[k - 1]);
        }
      }
      return p->t.back();
    };
    return {invert([alpha](double c) { return c >= alpha; }),
            invert([alpha](double c) { return c > alpha; })};
  }

  const SupportRange support = dist.support();
  const double lo = std::isfinite(support.lo) ? support.lo - 1.0 : -kInf;
  const double hi = std::isfinite(support.hi) ? support.hi + 1.0 : kInf;
  const double ftol = 4.0 * kEps;
  const Bracket bracket = bracket_monotone([&](double x) { return dist.cdf(x) - alpha; }, lo, hi,
                                           dist.mean(), 1.0, ftol);
  const double xtol = default_tol(support, bracket);
  const ZeroSet zero = solve_monotone(
      [&](double x) { return SlopedValue{dist.cdf(x) - alpha, dist.pdf(x)}; }, bracket.lo,
      bracket.hi, xtol, ftol);
  return {std::max(zero.lo, support.lo), std::min(zero.hi, support.hi)};
}

double expectile(const Distribution& dist, double alpha, std::optional<double> tol) {
  require_level(alpha, "expectile");
  if (tol && !(*tol > 0.0)) throw ArgumentError("expectile: tol must be positive");
  const SupportRange support = dist.support();
  if (support.lo == support.hi) return support.lo;
  const double mean = dist.mean();
  if (!std::isfinite(mean)) throw NumericError("expectile: first moment is not finite");

  const bool exact = exact_integrals(dist);
  auto g = [&](double x) -> SlopedValue {
    if (exact) {
      const double f = dist.cdf(x);
      return {(1.0 - alpha) * dist.lower_partial(x) - alpha * dist.upper_partial(x),
              (1.0 - alpha) * f + alpha * (1.0 - f)};
    }
    const auto point = dist.lower_partial_point(x);
    const double upper = point.lower + mean - x;
    return {(1.0 - alpha) * point.lower - alpha * upper,
            (1.0 - alpha) * point.cdf + alpha * (1.0 - point.cdf)};
  };
  const double lo = std::isfinite(support.lo) ? support.lo : -kInf;
  const double hi = std::isfinite(support.hi) ? support.hi : kInf;
  const double ftol = 64.0 * kEps * (1.0 + std::abs(mean));
  const Bracket bracket = bracket_monotone([&](double x) { return g(x).value; }, lo, hi, mean,
                                           1.0, ftol);
  const double xtol = tol.value_or(default_tol(support, bracket));
  const ZeroSet zero = solve_monotone(g, bracket.lo, bracket.hi, xtol, ftol);
  return 0.5 * (zero.lo + zero.hi);
}

}  // namespace hv
