#include "hv/numerics.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "hv/errors.hpp"

namespace hv {
namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double kronrod;
  double error;
};

template <class F>
Panel gauss_kronrod15(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

template <class F>
double adaptive(F& f, double lo, double hi, const Panel& whole, double abs_tol,
                double rel_tol, int depth) {
  if (whole.error <= std::max(abs_tol, rel_tol * std::abs(whole.kronrod)) ||
      depth <= 0 || !(hi - lo > 0.0)) {
    return whole.kronrod;
  }
  const double mid = 0.5 * (lo + hi);
  const Panel left = gauss_kronrod15(f, lo, mid);
  const Panel right = gauss_kronrod15(f, mid, hi);
  if (left.error + right.error <= std::max(abs_tol, rel_tol * std::abs(left.kronrod + right.kronrod))) {
    return left.kronrod + right.kronrod;
  }
  return adaptive(f, lo, mid, left, 0.5 * abs_tol, rel_tol, depth - 1) +
         adaptive(f, mid, hi, right, 0.5 * abs_tol, rel_tol, depth - 1);
}

template <class F>
double integrate_impl(F& f, double lo, double hi, const QuadratureOptions& options) {
  if (lo == hi) return 0.0;
  const Panel whole = gauss_kronrod15(f, lo, hi);
  return adaptive(f, lo, hi, whole, options.abs_tol, options.rel_tol, options.max_depth);
}

// T(h, a) for h >= 0 and 0 <= a <= 1 by direct quadrature.
double owens_t_folded(double h, double a) {
  if (a == 0.0) return 0.0;
  const double h2 = 0.5 * h * h;
  const double scale = std::exp(-h2) / (2.0 * std::numbers::pi);
  if (scale == 0.0) return 0.0;
  auto integrand = [h2](double x) { return std::exp(-h2 * x * x) / (1.0 + x * x); };
  // Integrand is bounded by 1 on [0, 1]; absolute 1e-13 keeps T well inside 1e-10.
  return scale * integrate_impl(integrand, 0.0, a, QuadratureOptions{1e-13, 1e-14, 30});
}

}  // namespace

double owens_t(double h, double a) {
  if (std::isnan(h) || std::isnan(a)) throw DomainError("owens_t: NaN argument");
  if (a < 0.0) return -owens_t(h, -a);
  h = std::abs(h);
  if (std::isinf(a)) return 0.5 * normal_sf(h);
  if (a <= 1.0) return owens_t_folded(h, a);
  // T(h,a) = [Phi(h) Q(ah) + Phi(ah) Q(h)] / 2 - T(ah, 1/a) for h >= 0, a > 0.
  const double ah = a * h;
  const double mixed = 0.5 * (normal_cdf(h) * normal_sf(ah) + normal_cdf(ah) * normal_sf(h));
  return mixed - owens_t_folded(ah, 1.0 / a);
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 QuadratureOptions options) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("integrate: bounds must be finite");
  }
  if (lo > hi) return -integrate(f, hi, lo, options);
  return integrate_impl(f, lo, hi, options);
}

namespace {

int classify(double value, double ftol) {
  if (value < -ftol) return -1;
  if (value > ftol) return 1;
  return 0;
}

// Newton steps taken from the outer side of an edge land on it exactly when
// f is linear there, as for empirical distributions; a probe just inside
// confirms the landing. Bisection keeps the worst case bounded.
//
// `outer` is the side where f is strictly beyond ftol (sign `outer_sign`),
// `inner` the side inside the zero band. Returns the edge on the inner side.
double find_edge(const std::function<SlopedValue(double)>& f, double outer, double inner,
                 int outer_sign, double xtol, double ftol) {
  const double toward = inner > outer ? 1.0 : -1.0;
  // Isolated roots are the common case: one probe settles the edge.
  if (std::abs(inner - outer) > xtol &&
      classify(f(inner - toward * xtol).value, ftol) == outer_sign) {
    return inner;
  }
  const double delta = 1e-3 * xtol;
  SlopedValue at_outer = f(outer);
  double width_before = std::abs(inner - outer);
  bool bisect = false;
  for (int i = 0; i < 400 && std::abs(inner - outer) > xtol; ++i) {
    double next = 0.5 * (outer + inner);
    bool newton = false;
    if (!bisect && std::isfinite(at_outer.slope) && at_outer.slope > 0.0) {
      const double cand = outer - at_outer.value / at_outer.slope;
      if ((cand - outer) * toward > 0.0 && (inner - cand) * toward > 0.0) {
        next = cand;
        newton = true;
      }
    }
    const SlopedValue v = f(next);
    if (classify(v.value, ftol) == outer_sign) {
      outer = next;
      at_outer = v;
    } else {
      inner = next;
      if (newton) {
        const double probe = next - toward * delta;
        if ((probe - outer) * toward > 0.0 &&
            classify(f(probe).value, ftol) == outer_sign) {
          return next;
        }
      }
    }
    const double width = std::abs(inner - outer);
    bisect = width > 0.5 * width_before;
    width_before = width;
  }
  return inner;
}

// sup{u : f(u) < -ftol} given f(neg) < -ftol <= f(nonneg).
double left_edge(const std::function<SlopedValue(double)>& f, double neg, double nonneg,
                 double xtol, double ftol) {
  return find_edge(f, neg, nonneg, -1, xtol, ftol);
}

// inf{u : f(u) > ftol} given f(nonpos) <= ftol < f(pos).
double right_edge(const std::function<SlopedValue(double)>& f, double nonpos, double pos,
                  double xtol, double ftol) {
  return find_edge(f, pos, nonpos, 1, xtol, ftol);
}

}  // namespace

ZeroSet solve_monotone(const std::function<SlopedValue(double)>& f, double lo,
                       double hi, double xtol, double ftol) {
  if (!(lo <= hi)) throw ArgumentError("solve_monotone: empty bracket");
  if (!(xtol > 0.0)) throw ArgumentError("solve_monotone: xtol must be positive");
  double left = lo;
  double right = hi;
  double x = 0.5 * (left + right);
  double width_two_back = kInf;
  double width_one_back = kInf;
  bool tiny_last = false;
  for (int iter = 0; iter < 400 && right - left > xtol; ++iter) {
    const SlopedValue v = f(x);
    const int cls = classify(v.value, ftol);
    if (cls == 0) {
      return {left_edge(f, left, x, xtol, ftol), right_edge(f, x, right, xtol, ftol)};
    }
    (cls < 0 ? left : right) = x;

    const double width = right - left;
    double next = 0.5 * (left + right);
    const bool stalled = width > 0.5 * width_two_back;
    width_two_back = width_one_back;
    width_one_back = width;
    if (!stalled && std::isfinite(v.slope) && v.slope > 0.0) {
      const double newton = x - v.value / v.slope;
      if (newton > left && newton < right) {
        next = newton;
        // A second tiny step in a row means rounding keeps f just off zero:
        // probe across the Newton point so the bracket collapses from both sides.
        const bool tiny = std::abs(newton - x) < 0.5 * xtol;
        if (tiny && tiny_last) {
          const double probe = cls < 0 ? newton + 0.5 * xtol : newton - 0.5 * xtol;
          if (probe > left && probe < right) next = probe;
        }
        tiny_last = tiny;
      }
    }
    x = next;
  }
  const double mid = 0.5 * (left + right);
  return {mid, mid};
}

Bracket bracket_monotone(const std::function<double(double)>& f, double lo, double hi,
                         double seed, double step, double ftol) {
  if (!std::isfinite(seed)) throw ArgumentError("bracket_monotone: seed must be finite");
  if (!(step > 0.0)) step = 1.0;
  auto expand = [&](double start, double direction, auto accept) {
    if (std::isfinite(start) && accept(f(start))) return start;
    const double origin = std::isfinite(start) ? start : seed;
    double delta = step;
    for (int i = 0; i < 200; ++i) {
      const double x = origin + direction * delta;
      if (!std::isfinite(x)) break;
      if (accept(f(x))) return x;
      delta *= 2.0;
    }
    throw NumericError("failed to bracket a sign change of a monotone function");
  };
  const double new_lo = expand(lo, -1.0, [ftol](double v) { return v < -ftol; });
  const double new_hi = expand(hi, 1.0, [ftol](double v) { return v > ftol; });
  return {new_lo, new_hi};
}

}  // namespace hv
