#include "hv/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/special_functions/beta.hpp>

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

void require_finite(double t, const char* what) {
  if (!std::isfinite(t)) throw DomainError(std::string(what) + ": argument must be finite");
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ArgumentError(std::string(what) + " must be positive and finite");
  }
}

// Spike sizes are integrated over w = rate * v on [0, kSpikeTail]; exp(-40) ~ 4e-18.
constexpr double kSpikeTail = 40.0;

// ---- empirical ------------------------------------------------------------

double empirical_cdf(const EmpiricalSample& e, double t) {
  const auto it = std::upper_bound(e.values.begin(), e.values.end(), t);
  if (it == e.values.begin()) return 0.0;
  return e.cumulative[static_cast<std::size_t>(it - e.values.begin()) - 1];
}

double empirical_cdf_left(const EmpiricalSample& e, double t) {
  const auto it = std::lower_bound(e.values.begin(), e.values.end(), t);
  if (it == e.values.begin()) return 0.0;
  return e.cumulative[static_cast<std::size_t>(it - e.values.begin()) - 1];
}

// int_l^u F = sum_i w_i (u - max(l, v_i))+ ; exact over the step function.
double empirical_integral(const EmpiricalSample& e, double l, double u) {
  double total = 0.0;
  for (std::size_t i = 0; i < e.values.size() && e.values[i] < u; ++i) {
    total += e.weights[i] * (u - std::max(l, e.values[i]));
  }
  return total;
}

double empirical_lower(const EmpiricalSample& e, double x) {
  double total = 0.0;
  for (std::size_t i = 0; i < e.values.size() && e.values[i] < x; ++i) {
    total += e.weights[i] * (x - e.values[i]);
  }
  return total;
}

double empirical_upper(const EmpiricalSample& e, double x) {
  double total = 0.0;
  for (std::size_t i = e.values.size(); i-- > 0 && e.values[i] > x;) {
    total += e.weights[i] * (e.values[i] - x);
  }
  return total;
}

// ---- piecewise linear -----------------------------------------------------

double pwl_cdf(const PiecewiseLinearCdf& p, double t) {
  if (t <= p.t.front()) return t < p.t.front() ? 0.0 : p.cdf.front();
  if (t >= p.t.back()) return 1.0;
  const auto it = std::upper_bound(p.t.begin(), p.t.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - p.t.begin()) - 1;
  const double frac = (t - p.t[k]) / (p.t[k + 1] - p.t[k]);
  return p.cdf[k] + frac * (p.cdf[k + 1] - p.cdf[k]);
}

double pwl_integral(const PiecewiseLinearCdf& p, double l, double u) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < p.t.size(); ++k) {
    const double a = std::max(l, p.t[k]);
    const double b = std::min(u, p.t[k + 1]);
    if (b > a) total += 0.5 * (pwl_cdf(p, a) + pwl_cdf(p, b)) * (b - a);
  }
  if (u > p.t.back()) total += u - std::max(l, p.t.back());
  return total;
}

double pwl_pdf(const PiecewiseLinearCdf& p, double t) {
  if (t < p.t.front() || t >= p.t.back()) return 0.0;
  const auto it = std::upper_bound(p.t.begin(), p.t.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - p.t.begin()) - 1;
  return (p.cdf[k + 1] - p.cdf[k]) / (p.t[k + 1] - p.t[k]);
}

// ---- normal / skew normal -------------------------------------------------

double normal_lower(const Normal& n, double x) {
  const double z = (x - n.mean) / n.sd;
  return n.sd * (z * normal_cdf(z) + normal_pdf(z));
}

double normal_upper(const Normal& n, double x) {
  const double z = (x - n.mean) / n.sd;
  return n.sd * (normal_pdf(z) - z * normal_sf(z));
}

double skew_delta(double shape) { return shape / std::sqrt(1.0 + shape * shape); }

double skew_cdf_std(double z, double shape) {
  const double value = normal_cdf(z) - 2.0 * owens_t(z, shape);
  return std::clamp(value, 0.0, 1.0);
}

// Standardised partial moments of Z ~ SN(0, 1, shape):
//   int_{-inf}^z s f(s) ds = -2 phi(z) Phi(shape z) + sqrt(2/pi) delta Phi(z sqrt(1+shape^2)).
struct SkewPieces {
  double cdf;
  double lower;  // E(z - Z)+
  double upper;  // E(Z - z)+
};

SkewPieces skew_pieces(double z, double shape) {
  const double delta = skew_delta(shape);
  const double root = std::sqrt(1.0 + shape * shape);
  const double kernel = 2.0 * normal_pdf(z) * normal_cdf(shape * z);
  const double tilt = std::sqrt(2.0 / std::numbers::pi) * delta;
  const double two_t = 2.0 * owens_t(z, shape);
  const double cdf = std::clamp(normal_cdf(z) - two_t, 0.0, 1.0);
  const double survival = std::clamp(normal_sf(z) + two_t, 0.0, 1.0);
  const double lower = z * cdf + kernel - tilt * normal_cdf(z * root);
  const double upper = kernel + tilt * normal_sf(z * root) - z * survival;
  return {cdf, std::max(lower, 0.0), std::max(upper, 0.0)};
}

// ---- beta -----------------------------------------------------------------

double beta_cdf(const Beta& b, double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return boost::math::ibeta(b.r, b.s, t);
}

double beta_lower(const Beta& b, double x) {
  const double mean = b.r / (b.r + b.s);
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return x - mean;
  return x * boost::math::ibeta(b.r, b.s, x) - mean * boost::math::ibeta(b.r + 1.0, b.s, x);
}

double beta_upper(const Beta& b, double x) {
  const double mean = b.r / (b.r + b.s);
  if (x >= 1.0) return 0.0;
  if (x <= 0.0) return mean - x;
  return mean * boost::math::ibetac(b.r + 1.0, b.s, x) - x * boost::math::ibetac(b.r, b.s, x);
}

// ---- exponential ----------------------------------------------------------

double exp_cdf(const Exponential& e, double t) { return t <= 0.0 ? 0.0 : -std::expm1(-e.rate * t); }

double exp_lower(const Exponential& e, double x) {
  return x <= 0.0 ? 0.0 : x + std::expm1(-e.rate * x) / e.rate;
}

double exp_upper(const Exponential& e, double x) {
  return x <= 0.0 ? 1.0 / e.rate - x : std::exp(-e.rate * x) / e.rate;
}

}  // namespace

bool SupportRange::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

// ---- construction ---------------------------------------------------------

Distribution Distribution::empirical(std::vector<double> values, std::vector<double> weights) {
  if (values.empty()) throw ArgumentError("empirical distribution needs at least one value");
  if (weights.empty()) weights.assign(values.size(), 1.0);
  if (weights.size() != values.size()) {
    throw ArgumentError("empirical distribution: values and weights differ in length");
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < values.size(); ++i) {
    require_finite(values[i], "empirical value");
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw ArgumentError("empirical distribution: weights must be positive and finite");
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  EmpiricalSample e;
  for (std::size_t idx : order) {
    if (!e.values.empty() && e.values.back() == values[idx]) {
      e.weights.back() += weights[idx];
    } else {
      e.values.push_back(values[idx]);
      e.weights.push_back(weights[idx]);
    }
  }
  const double total = std::accumulate(e.weights.begin(), e.weights.end(), 0.0);
  for (double& w : e.weights) w /= total;
  e.cumulative.resize(e.weights.size());
  std::partial_sum(e.weights.begin(), e.weights.end(), e.cumulative.begin());
  e.cumulative.back() = 1.0;
  return Distribution(std::move(e));
}

Distribution Distribution::point_mass(double at) { return empirical({at}); }

Distribution Distribution::piecewise_linear(std::vector<double> t, std::vector<double> cdf) {
  if (t.size() < 2 || t.size() != cdf.size()) {
    throw ArgumentError("piecewise-linear CDF needs at least two (t, F) knots");
  }
  for (std::size_t k = 0; k < t.size(); ++k) {
    require_finite(t[k], "piecewise-linear knot");
    if (!(cdf[k] >= 0.0 && cdf[k] <= 1.0)) throw ArgumentError("CDF values must lie in [0, 1]");
    if (k > 0 && !(t[k] > t[k - 1])) throw ArgumentError("knots must be strictly increasing in t");
    if (k > 0 && cdf[k] < cdf[k - 1]) throw ArgumentError("CDF values must be nondecreasing");
  }
  if (cdf.front() != 0.0 || cdf.back() != 1.0) {
    throw ArgumentError("piecewise-linear CDF must start at 0 and end at 1");
  }
  return Distribution(PiecewiseLinearCdf{std::move(t), std::move(cdf)});
}

Distribution Distribution::normal(double mean, double sd) {
  require_finite(mean, "normal mean");
  require_positive(sd, "normal standard deviation");
  return Distribution(Normal{mean, sd});
}

Distribution Distribution::skew_normal(double location, double scale, double shape) {
  require_finite(location, "skew-normal location");
  require_finite(shape, "skew-normal shape");
  require_positive(scale, "skew-normal scale");
  return Distribution(SkewNormal{location, scale, shape});
}

Distribution Distribution::exponential(double rate) {
  require_positive(rate, "exponential rate");
  return Distribution(Exponential{rate});
}

Distribution Distribution::beta(double r, double s) {
  require_positive(r, "beta shape r");
  require_positive(s, "beta shape s");
  return Distribution(Beta{r, s});
}

Distribution Distribution::contaminated(Distribution base, double prob, double scale, double rate,
                                        double floor) {
  if (!(prob >= 0.0 && prob <= 1.0)) throw ArgumentError("spike probability must lie in [0, 1]");
  require_positive(scale, "spike scale");
  require_positive(rate, "spike rate");
  if (!(floor >= 0.0) || !std::isfinite(floor)) throw ArgumentError("spike floor must be >= 0");
  return Distribution(ContaminatedSum{std::make_shared<const Distribution>(std::move(base)), prob,
                                      scale, rate, floor});
}

// ---- contamination helpers ------------------------------------------------

namespace {

// P(Y + floor + scale V <= t) for the base Y.
double spike_cdf(const ContaminatedSum& c, double t) {
  const double unit = c.scale / c.rate;
  if (const auto* e = std::get_if<EmpiricalSample>(&c.base->variant())) {
    double total = 0.0;
    for (std::size_t i = 0; i < e->values.size(); ++i) {
      const double gap = t - c.floor - e->values[i];
      if (gap > 0.0) total += e->weights[i] * -std::expm1(-gap / unit);
    }
    return total;
  }
  const Distribution& base = *c.base;
  return integrate([&](double w) { return base.cdf(t - c.floor - unit * w) * std::exp(-w); }, 0.0,
                   kSpikeTail, {1e-12, 1e-12, 30});
}

// E(x - Y - floor - scale V)+.
double spike_lower(const ContaminatedSum& c, double x) {
  const double unit = c.scale / c.rate;
  if (const auto* e = std::get_if<EmpiricalSample>(&c.base->variant())) {
    double total = 0.0;
    for (std::size_t i = 0; i < e->values.size(); ++i) {
      const double gap = x - c.floor - e->values[i];
      if (gap > 0.0) total += e->weights[i] * (gap + unit * std::expm1(-gap / unit));
    }
    return total;
  }
  const Distribution& base = *c.base;
  return integrate(
      [&](double w) { return base.lower_partial(x - c.floor - unit * w) * std::exp(-w); }, 0.0,
      kSpikeTail, {1e-12, 1e-12, 30});
}

double spike_pdf(const ContaminatedSum& c, double t) {
  const double unit = c.scale / c.rate;
  const Distribution& base = *c.base;
  return integrate([&](double w) { return base.pdf(t - c.floor - unit * w) * std::exp(-w); }, 0.0,
                   kSpikeTail, {1e-12, 1e-12, 30});
}

}  // namespace

// ---- evaluation -----------------------------------------------------------

double Distribution::cdf(double t) const {
  require_finite(t, "cdf");
  return std::visit(
      Overloaded{
          [t](const EmpiricalSample& e) { return empirical_cdf(e, t); },
          [t](const PiecewiseLinearCdf& p) { return pwl_cdf(p, t); },
          [t](const Normal& n) { return normal_cdf((t - n.mean) / n.sd); },
          [t](const SkewNormal& s) { return skew_cdf_std((t - s.location) / s.scale, s.shape); },
          [t](const Exponential& e) { return exp_cdf(e, t); },
          [t](const Beta& b) { return beta_cdf(b, t); },
          [t](const ContaminatedSum& c) {
            return (1.0 - c.prob) * c.base->cdf(t) + c.prob * spike_cdf(c, t);
          },
      },
      v_);
}

double Distribution::cdf_left(double t) const {
  require_finite(t, "cdf_left");
  if (const auto* e = std::get_if<EmpiricalSample>(&v_)) return empirical_cdf_left(*e, t);
  if (const auto* c = std::get_if<ContaminatedSum>(&v_)) {
    return (1.0 - c->prob) * c->base->cdf_left(t) + c->prob * spike_cdf(*c, t);
  }
  return cdf(t);
}

double Distribution::pdf(double t) const {
  require_finite(t, "pdf");
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  return std::visit(
      Overloaded{
          [](const EmpiricalSample&) { return kNaN; },
          [t](const PiecewiseLinearCdf& p) { return pwl_pdf(p, t); },
          [t](const Normal& n) { return normal_pdf((t - n.mean) / n.sd) / n.sd; },
          [t](const SkewNormal& s) {
            const double z = (t - s.location) / s.scale;
            return 2.0 * normal_pdf(z) * normal_cdf(s.shape * z) / s.scale;
          },
          [t](const Exponential& e) { return t < 0.0 ? 0.0 : e.rate * std::exp(-e.rate * t); },
          [t](const Beta& b) {
            if (t < 0.0 || t > 1.0) return 0.0;
            return boost::math::ibeta_derivative(b.r, b.s, t);
          },
          [t](const ContaminatedSum& c) {
            if (std::holds_alternative<EmpiricalSample>(c.base->variant())) return kNaN;
            return (1.0 - c.prob) * c.base->pdf(t) + c.prob * spike_pdf(c, t);
          },
      },
      v_);
}

double Distribution::lower_partial(double x) const {
  require_finite(x, "lower_partial");
  return std::visit(
      Overloaded{
          [x](const EmpiricalSample& e) { return empirical_lower(e, x); },
          [x](const PiecewiseLinearCdf& p) {
            return x <= p.t.front() ? 0.0 : pwl_integral(p, p.t.front(), x);
          },
          [x](const Normal& n) { return normal_lower(n, x); },
          [x](const SkewNormal& s) {
            return s.scale * skew_pieces((x - s.location) / s.scale, s.shape).lower;
          },
          [x](const Exponential& e) { return exp_lower(e, x); },
          [x](const Beta& b) { return beta_lower(b, x); },
          [x](const ContaminatedSum& c) {
            return (1.0 - c.prob) * c.base->lower_partial(x) + c.prob * spike_lower(c, x);
          },
      },
      v_);
}

Distribution::PartialPoint Distribution::lower_partial_point(double x) const {
  if (const auto* s = std::get_if<SkewNormal>(&v_)) {
    require_finite(x, "lower_partial");
    const SkewPieces pieces = skew_pieces((x - s->location) / s->scale, s->shape);
    return {pieces.cdf, s->scale * pieces.lower};
  }
  return {cdf(x), lower_partial(x)};
}

double Distribution::upper_partial(double x) const {
  require_finite(x, "upper_partial");
  return std::visit(
      Overloaded{
          [x](const EmpiricalSample& e) { return empirical_upper(e, x); },
          [x](const PiecewiseLinearCdf& p) {
            if (x >= p.t.back()) return 0.0;
            const double from = std::max(x, p.t.front());
            return (p.t.back() - from) - pwl_integral(p, from, p.t.back()) +
                   std::max(p.t.front() - x, 0.0);
          },
          [x](const Normal& n) { return normal_upper(n, x); },
          [x](const SkewNormal& s) {
            return s.scale * skew_pieces((x - s.location) / s.scale, s.shape).upper;
          },
          [x](const Exponential& e) { return exp_upper(e, x); },
          [x](const Beta& b) { return beta_upper(b, x); },
          [this, x](const ContaminatedSum&) { return lower_partial(x) + mean() - x; },
      },
      v_);
}

double Distribution::cdf_integral(double l, double u) const {
  require_finite(l, "cdf_integral");
  require_finite(u, "cdf_integral");
  if (l > u) throw ArgumentError("cdf_integral: lower limit exceeds upper limit");
  if (l == u) return 0.0;
  if (const auto* e = std::get_if<EmpiricalSample>(&v_)) return empirical_integral(*e, l, u);
  if (const auto* p = std::get_if<PiecewiseLinearCdf>(&v_)) return pwl_integral(*p, l, u);
  const double direct = lower_partial(u) - lower_partial(l);
  return std::clamp(direct, 0.0, u - l);
}

double Distribution::complement_integral(double l, double u) const {
  return (u - l) - cdf_integral(l, u);
}

double Distribution::mean() const {
  return std::visit(
      Overloaded{
          [](const EmpiricalSample& e) {
            double total = 0.0;
            for (std::size_t i = 0; i < e.values.size(); ++i) total += e.weights[i] * e.values[i];
            return total;
          },
          [](const PiecewiseLinearCdf& p) {
            return p.t.front() + (p.t.back() - p.t.front()) -
                   pwl_integral(p, p.t.front(), p.t.back());
          },
          [](const Normal& n) { return n.mean; },
          [](const SkewNormal& s) { return skew_normal_mean(s.location, s.scale, s.shape); },
          [](const Exponential& e) { return 1.0 / e.rate; },
          [](const Beta& b) { return b.r / (b.r + b.s); },
          [](const ContaminatedSum& c) {
            return c.base->mean() + c.prob * (c.floor + c.scale / c.rate);
          },
      },
      v_);
}

SupportRange Distribution::support() const {
  return std::visit(
      Overloaded{
          [](const EmpiricalSample& e) { return SupportRange{e.values.front(), e.values.back()}; },
          [](const PiecewiseLinearCdf& p) {
            // Flat leading/trailing knots carry no mass.
            std::size_t first = 0;
            while (first + 1 < p.cdf.size() && p.cdf[first + 1] == 0.0) ++first;
            std::size_t last = p.cdf.size() - 1;
            while (last > 0 && p.cdf[last - 1] == 1.0) --last;
            return SupportRange{p.t[first], p.t[last]};
          },
          [](const Normal&) { return SupportRange{-kInf, kInf}; },
          [](const SkewNormal&) { return SupportRange{-kInf, kInf}; },
          [](const Exponential&) { return SupportRange{0.0, kInf}; },
          [](const Beta&) { return SupportRange{0.0, 1.0}; },
          [](const ContaminatedSum& c) {
            const SupportRange base = c.base->support();
            if (c.prob == 0.0) return base;
            const double lo = c.prob == 1.0 ? base.lo + c.floor : base.lo;
            return SupportRange{lo, kInf};
          },
      },
      v_);
}

double Distribution::draw(Rng& rng) const {
  return std::visit(
      Overloaded{
          [&rng](const EmpiricalSample& e) {
            const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            auto it = std::upper_bound(e.cumulative.begin(), e.cumulative.end(), u);
            if (it == e.cumulative.end()) --it;
            return e.values[static_cast<std::size_t>(it - e.cumulative.begin())];
          },
          [&rng](const PiecewiseLinearCdf& p) {
            double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            if (u == 0.0) u = std::numeric_limits<double>::min();
            const auto it = std::lower_bound(p.cdf.begin(), p.cdf.end(), u);
            const std::size_t k = static_cast<std::size_t>(it - p.cdf.begin());
            if (k == 0) return p.t.front();
            const double frac = (u - p.cdf[k - 1]) / (p.cdf[k] - p.cdf[k - 1]);
            return p.t[k - 1] + frac * (p.t[k] - p.t[k - 1]);
          },
          [&rng](const Normal& n) { return std::normal_distribution<double>(n.mean, n.sd)(rng); },
          [&rng](const SkewNormal& s) {
            std::normal_distribution<double> z;
            const double delta = skew_delta(s.shape);
            const double z1 = z(rng);
            const double z2 = z(rng);
            return s.location + s.scale * (delta * std::abs(z1) + std::sqrt(1.0 - delta * delta) * z2);
          },
          [&rng](const Exponential& e) { return std::exponential_distribution<double>(e.rate)(rng); },
          [&rng](const Beta& b) {
            const double x = std::gamma_distribution<double>(b.r, 1.0)(rng);
            const double y = std::gamma_distribution<double>(b.s, 1.0)(rng);
            return x / (x + y);
          },
          [&rng](const ContaminatedSum& c) {
            const double y = c.base->draw(rng);
            if (!std::bernoulli_distribution(c.prob)(rng)) return y;
            return y + c.floor + c.scale * std::exponential_distribution<double>(c.rate)(rng);
          },
      },
      v_);
}

std::vector<double> Distribution::sample(Rng& rng, std::size_t n) const {
  if (n == 0) throw ArgumentError("sample: n must be at least 1");
  std::vector<double> out(n);
  for (double& x : out) x = draw(rng);
  return out;
}

double skew_normal_mean(double location, double scale, double shape) {
  return location + scale * skew_delta(shape) * std::sqrt(2.0 / std::numbers::pi);
}

}  // namespace hv
