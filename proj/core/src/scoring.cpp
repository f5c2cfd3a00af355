#include "hv/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hv/errors.hpp"
#include "hv/numerics.hpp"

namespace hv {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// e^z - 1 - z without cancellation near zero.
double exp_remainder(double z) {
  if (std::abs(z) < 0.1) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 3; k <= 14; ++k) {
      term *= z / k;
      sum += term;
    }
    return 0.5 * z * z * sum;
  }
  return std::expm1(z) - z;
}

double level(double alpha, double x, double y) { return x >= y ? 1.0 - alpha : alpha; }

// Mass and centred first moment of c0 + c1 * theta over [l, u], u >= l.
ConvexSpec::Moments linear_density_moments(double c0, double c1, double l, double u,
                                           double origin) {
  if (!(u > l)) return {0.0, 0.0};
  const double w = u - l;
  const double sl = l - origin;
  const double su = u - origin;
  // Rewrite the density about the origin: d(s) = e0 + c1 s with s = theta - origin.
  const double e0 = c0 + c1 * origin;
  const double s1 = 0.5 * w * (su + sl);
  const double s2 = w * (su * su + su * sl + sl * sl) / 3.0;
  return {e0 * w + c1 * s1, e0 * s1 + c1 * s2};
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ArgumentError(std::string(what) + " must be finite");
}

}  // namespace

ConvexSpec ConvexSpec::quadratic() { return ConvexSpec(QuadraticPhi{}); }

ConvexSpec ConvexSpec::exponential(double lambda) {
  require_finite(lambda, "lambda");
  if (lambda == 0.0) throw ArgumentError("exponential phi needs lambda != 0");
  return ConvexSpec(ExponentialPhi{lambda});
}

ConvexSpec ConvexSpec::piecewise_density(std::vector<double> grid, std::vector<double> density) {
  if (grid.size() < 2) throw ArgumentError("density grid needs at least two points");
  if (density.size() != grid.size() - 1)
    throw ArgumentError("density needs one weight per grid interval");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require_finite(grid[i], "density grid");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw ArgumentError("density grid must be strictly increasing");
  }
  for (double d : density) {
    require_finite(d, "density weight");
    if (d < 0.0) throw ArgumentError("density weights must be nonnegative");
  }
  return ConvexSpec(PiecewiseDensityPhi{std::move(grid), std::move(density)});
}

ConvexSpec ConvexSpec::point_masses(std::vector<double> locations, std::vector<double> masses) {
  if (locations.empty()) throw ArgumentError("point masses need at least one location");
  if (locations.size() != masses.size())
    throw ArgumentError("point masses need one mass per location");
  std::vector<std::size_t> order(locations.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < locations.size(); ++i) {
    require_finite(locations[i], "location");
    require_finite(masses[i], "mass");
    if (!(masses[i] > 0.0)) throw ArgumentError("point masses must be positive");
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return locations[i] < locations[j]; });
  PointMassesPhi p;
  for (std::size_t i : order) {
    if (!p.locations.empty() && p.locations.back() == locations[i]) {
      p.masses.back() += masses[i];
    } else {
      p.locations.push_back(locations[i]);
      p.masses.push_back(masses[i]);
    }
  }
  return ConvexSpec(std::move(p));
}

ConvexSpec ConvexSpec::extremes(double lo_knee, double hi_knee) {
  require_finite(lo_knee, "lo_knee");
  require_finite(hi_knee, "hi_knee");
  if (lo_knee > hi_knee) throw ArgumentError("lo_knee must not exceed hi_knee");
  return ConvexSpec(ExtremesPhi{lo_knee, hi_knee});
}

double ConvexSpec::phi(double t) const {
  return std::visit(
      Overloaded{
          [&](const QuadraticPhi&) { return t * t; },
          [&](const ExponentialPhi& e) {
            return 2.0 * std::exp(e.lambda * t) / (e.lambda * e.lambda);
          },
          [&](const PiecewiseDensityPhi& p) {
            double s = 0.0;
            for (std::size_t k = 0; k < p.density.size(); ++k) {
              const double l = p.grid[k];
              const double u = p.grid[k + 1];
              if (t <= l) break;
              if (t <= u) {
                s += p.density[k] * 0.5 * (t - l) * (t - l);
              } else {
                s += p.density[k] * (u - l) * (0.5 * (u - l) + (t - u));
              }
            }
            return s;
          },
          [&](const PointMassesPhi& p) {
            double s = 0.0;
            for (std::size_t k = 0; k < p.locations.size(); ++k)
              s += p.masses[k] * std::max(t - p.locations[k], 0.0);
            return s;
          },
          [&](const ExtremesPhi& e) {
            double s = 0.5 * t * t;
            if (t <= e.lo_knee) s += std::pow(e.lo_knee - t, 3) / 6.0;
            if (t >= e.hi_knee) s += std::pow(t - e.hi_knee, 3) / 6.0;
            return s;
          },
      },
      v_);
}

double ConvexSpec::phi_left_deriv(double t) const {
  return std::visit(
      Overloaded{
          [&](const QuadraticPhi&) { return 2.0 * t; },
          [&](const ExponentialPhi& e) { return 2.0 * std::exp(e.lambda * t) / e.lambda; },
          [&](const PiecewiseDensityPhi& p) {
            double s = 0.0;
            for (std::size_t k = 0; k < p.density.size(); ++k) {
              const double l = p.grid[k];
              if (t <= l) break;
              s += p.density[k] * (std::min(t, p.grid[k + 1]) - l);
            }
            return s;
          },
          [&](const PointMassesPhi& p) {
            double s = 0.0;
            for (std::size_t k = 0; k < p.locations.size() && p.locations[k] < t; ++k)
              s += p.masses[k];
            return s;
          },
          [&](const ExtremesPhi& e) {
            double s = t;
            if (t <= e.lo_knee) s -= 0.5 * (e.lo_knee - t) * (e.lo_knee - t);
            if (t >= e.hi_knee) s += 0.5 * (t - e.hi_knee) * (t - e.hi_knee);
            return s;
          },
      },
      v_);
}

double ConvexSpec::mixing_density(double theta) const {
  return std::visit(
      Overloaded{
          [&](const QuadraticPhi&) { return 2.0; },
          [&](const ExponentialPhi& e) { return 2.0 * std::exp(e.lambda * theta); },
          [&](const PiecewiseDensityPhi& p) {
            if (theta < p.grid.front() || theta >= p.grid.back()) return 0.0;
            const auto it = std::upper_bound(p.grid.begin(), p.grid.end(), theta);
            return p.density[static_cast<std::size_t>(it - p.grid.begin()) - 1];
          },
          [&](const PointMassesPhi&) { return std::numeric_limits<double>::quiet_NaN(); },
          [&](const ExtremesPhi& e) {
            if (theta <= e.lo_knee) return e.lo_knee - theta + 1.0;
            if (theta >= e.hi_knee) return theta - e.hi_knee + 1.0;
            return 1.0;
          },
      },
      v_);
}

ConvexSpec::Moments ConvexSpec::moments(double l, double u, double origin) const {
  if (!(u > l)) return {0.0, 0.0};
  return std::visit(
      Overloaded{
          [&](const QuadraticPhi&) { return linear_density_moments(2.0, 0.0, l, u, origin); },
          [&](const ExponentialPhi& e) {
            const double lam = e.lambda;
            QuadratureOptions opts{1e-14, 1e-13, 40};
            const double mass =
                integrate([&](double th) { return 2.0 * std::exp(lam * th); }, l, u, opts);
            const double first = integrate(
                [&](double th) { return (th - origin) * 2.0 * std::exp(lam * th); }, l, u, opts);
            return Moments{mass, first};
          },
          [&](const PiecewiseDensityPhi& p) {
            Moments m{0.0, 0.0};
            for (std::size_t k = 0; k < p.density.size(); ++k) {
              const double lo = std::max(l, p.grid[k]);
              const double hi = std::min(u, p.grid[k + 1]);
              const Moments piece = linear_density_moments(p.density[k], 0.0, lo, hi, origin);
              m.mass += piece.mass;
              m.first += piece.first;
            }
            return m;
          },
          [&](const PointMassesPhi& p) {
            Moments m{0.0, 0.0};
            for (std::size_t k = 0; k < p.locations.size(); ++k) {
              const double th = p.locations[k];
              if (th >= l && th < u) {
                m.mass += p.masses[k];
                m.first += p.masses[k] * (th - origin);
              }
            }
            return m;
          },
          [&](const ExtremesPhi& e) {
            const Moments below =
                linear_density_moments(e.lo_knee + 1.0, -1.0, l, std::min(u, e.lo_knee), origin);
            const Moments mid = linear_density_moments(1.0, 0.0, std::max(l, e.lo_knee),
                                                       std::min(u, e.hi_knee), origin);
            const Moments above =
                linear_density_moments(1.0 - e.hi_knee, 1.0, std::max(l, e.hi_knee), u, origin);
            return Moments{below.mass + mid.mass + above.mass,
                           below.first + mid.first + above.first};
          },
      },
      v_);
}

double capped(double a, double b, double x) { return std::max(std::min(x, b), -a); }

double generalized_huber_loss(const HuberParams& params, double u) {
  const double a = params.a();
  const double b = params.b();
  const double alpha = params.alpha();
  if (u > b) return (1.0 - alpha) * b * (u - 0.5 * b);
  if (u < -a) return -alpha * a * (u + 0.5 * a);
  return (u >= 0.0 ? 1.0 - alpha : alpha) * 0.5 * u * u;
}

double generalized_huber_loss_derivative(const HuberParams& params, double u) {
  return (u >= 0.0 ? 1.0 - params.alpha() : params.alpha()) * capped(params.a(), params.b(), u);
}

double consistent_huber_score(const ConvexSpec& spec, const HuberParams& params, double x,
                              double y) {
  if (x == y) return 0.0;
  const double d = x - y;
  const double k = capped(params.a(), params.b(), d);
  const double w = level(params.alpha(), x, y);
  return std::visit(
      Overloaded{
          [&](const QuadraticPhi&) { return w * k * (2.0 * d - k); },
          [&](const ExponentialPhi& e) {
            // 2 e^{ly}/l^2 (lk e^{ld} - expm1(lk)), arranged so both terms are O(l^2).
            const double lam = e.lambda;
            const double zk = lam * k;
            const double core = zk * std::expm1(lam * d) - exp_remainder(zk);
            return w * 2.0 * std::exp(lam * y) / (lam * lam) * core;
          },
          [&](const auto&) {
            return consistent_huber_score([&](double t) { return spec.phi(t); },
                                          [&](double t) { return spec.phi_left_deriv(t); },
                                          params, x, y);
          },
      },
      spec.variant());
}

double exponential_family_score(double lambda, double a, double x, double y) {
  if (lambda == 0.0 || !std::isfinite(lambda)) throw ArgumentError("lambda must be finite and nonzero");
  if (!(a > 0.0)) throw ArgumentError("a must be positive");
  if (x == y) return 0.0;
  const double l2 = lambda * lambda;
  const double ex = std::exp(lambda * x);
  if (std::abs(x - y) <= a) return ex * exp_remainder(lambda * (y - x)) / l2;
  const double ey = std::exp(lambda * y);
  if (x - y > a) return a * ex / lambda - ey * std::expm1(lambda * a) / l2;
  return ey * -std::expm1(-lambda * a) / l2 - a * ex / lambda;
}

double consistent_quantile_score(const ConvexSpec& spec, double alpha, double x, double y) {
  if (x == y) return 0.0;
  return level(alpha, x, y) * std::abs(spec.phi_left_deriv(x) - spec.phi_left_deriv(y));
}

double consistent_expectile_score(const ConvexSpec& spec, double alpha, double x, double y) {
  if (x == y) return 0.0;
  const double w = level(alpha, x, y);
  if (std::holds_alternative<QuadraticPhi>(spec.variant())) return w * (x - y) * (x - y);
  return w * (spec.phi(y) - spec.phi(x) + spec.phi_left_deriv(x) * (x - y));
}

namespace {

// Right-continuous branches y <= theta < x and x <= theta < y, or their left limits.
bool over_branch(double theta, double x, double y, ThetaSide side) {
  return side == ThetaSide::kAt ? (y <= theta && theta < x) : (y < theta && theta <= x);
}
bool under_branch(double theta, double x, double y, ThetaSide side) {
  return side == ThetaSide::kAt ? (x <= theta && theta < y) : (x < theta && theta <= y);
}

}  // namespace

double elementary_huber_score(const HuberParams& params, double theta, double x, double y,
                              ThetaSide side) {
  if (over_branch(theta, x, y, side)) return (1.0 - params.alpha()) * std::min(theta - y, params.b());
  if (under_branch(theta, x, y, side)) return params.alpha() * std::min(y - theta, params.a());
  return 0.0;
}

double elementary_quantile_score(double alpha, double theta, double x, double y, ThetaSide side) {
  if (over_branch(theta, x, y, side)) return 1.0 - alpha;
  if (under_branch(theta, x, y, side)) return alpha;
  return 0.0;
}

double elementary_expectile_score(double alpha, double theta, double x, double y, ThetaSide side) {
  if (over_branch(theta, x, y, side)) return (1.0 - alpha) * std::abs(theta - y);
  if (under_branch(theta, x, y, side)) return alpha * std::abs(theta - y);
  return 0.0;
}

double mixture_quadrature_score(const ConvexSpec& spec, const HuberParams& params, double x,
                                double y) {
  if (x == y) return 0.0;
  const double alpha = params.alpha();
  if (x > y) {
    const double knee = std::min(x, y + params.b());
    const ConvexSpec::Moments ramp = spec.moments(y, knee, y);
    const ConvexSpec::Moments flat = spec.moments(knee, x, y);
    return (1.0 - alpha) * (ramp.first + params.b() * flat.mass);
  }
  const double knee = std::max(x, y - params.a());
  const ConvexSpec::Moments flat = spec.moments(x, knee, y);
  const ConvexSpec::Moments ramp = spec.moments(knee, y, y);
  return alpha * (params.a() * flat.mass - ramp.first);
}

double identification_value(const HuberParams& params, double x, double y) {
  return level(params.alpha(), x, y) * capped(params.a(), params.b(), x - y);
}

double tax_rates_to_alpha(double r_gain, double r_loss) {
  const auto in_range = [](double r) { return r >= 0.0 && r < 1.0; };
  if (!in_range(r_gain) || !in_range(r_loss)) throw ArgumentError("tax rates must lie in [0, 1)");
  return (1.0 - r_gain) / (2.0 - r_loss - r_gain);
}

ConvexSpec extremes_convex_spec(double lo_knee, double hi_knee) {
  return ConvexSpec::extremes(lo_knee, hi_knee);
}

ScoringRule ScoringRule::classical_huber(double a) {
  if (!(a >= 0.0)) throw ArgumentError("Huber cap must be nonnegative");
  return ScoringRule(ClassicalHuber{a});
}

double ScoringRule::operator()(double x, double y) const {
  return std::visit(
      Overloaded{
          [&](const ClassicalHuber& r) {
            const double d = std::abs(x - y);
            if (r.a == 0.0) return d;
            if (std::isinf(r.a)) return d * d;
            return d <= r.a ? 0.5 * d * d : r.a * (d - 0.5 * r.a);
          },
          [&](const HuberLossRule& r) { return generalized_huber_loss(r.params, x - y); },
          [&](const ConsistentHuberRule& r) { return consistent_huber_score(r.spec, r.params, x, y); },
          [&](const ConsistentQuantileRule& r) {
            return consistent_quantile_score(r.spec, r.alpha, x, y);
          },
          [&](const ConsistentExpectileRule& r) {
            return consistent_expectile_score(r.spec, r.alpha, x, y);
          },
          [&](const ElementaryHuberRule& r) {
            return elementary_huber_score(r.params, r.theta, x, y, r.side);
          },
      },
      v_);
}

std::string ScoringRule::name() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const ClassicalHuber& r) {
                   if (r.a == 0.0) {
                     os << "absolute";
                   } else if (std::isinf(r.a)) {
                     os << "squared";
                   } else {
                     os << "huber(a=" << r.a << ")";
                   }
                 },
                 [&](const HuberLossRule& r) {
                   os << "huber_loss(alpha=" << r.params.alpha() << ",a=" << r.params.a()
                      << ",b=" << r.params.b() << ")";
                 },
                 [&](const ConsistentHuberRule& r) {
                   os << "consistent_huber(alpha=" << r.params.alpha() << ",a=" << r.params.a()
                      << ",b=" << r.params.b() << ")";
                 },
                 [&](const ConsistentQuantileRule& r) {
                   os << "consistent_quantile(alpha=" << r.alpha << ")";
                 },
                 [&](const ConsistentExpectileRule& r) {
                   os << "consistent_expectile(alpha=" << r.alpha << ")";
                 },
                 [&](const ElementaryHuberRule& r) {
                   os << "elementary_huber(theta=" << r.theta << ")";
                 },
             },
             v_);
  return os.str();
}

}  // namespace hv
