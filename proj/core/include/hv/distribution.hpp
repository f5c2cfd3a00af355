#pragma once

#include <cstddef>
#include <memory>
#include <random>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace hv {

using Rng = std::mt19937_64;

/// Smallest closed interval containing the support; endpoints may be infinite.
struct SupportRange {
  double lo;
  double hi;
  bool bounded() const;
  double width() const { return hi - lo; }
};

class Distribution;

/// Weighted point masses. Values are sorted and ties merged on construction.
struct EmpiricalSample {
  std::vector<double> values;
  std::vector<double> weights;  // positive, sums to 1
  std::vector<double> cumulative;  // cumulative[i] = F(values[i])
};

/// Continuous CDF, linear between knots; 0 left of the first knot, 1 right of the last.
struct PiecewiseLinearCdf {
  std::vector<double> t;
  std::vector<double> cdf;
};

struct Normal {
  double mean;
  double sd;
};

/// Skew normal SN(location, scale, shape).
struct SkewNormal {
  double location;
  double scale;
  double shape;
};

struct Exponential {
  double rate;
};

struct Beta {
  double r;
  double s;
};

/// Y + U * (floor + scale * V) with U ~ Bernoulli(prob), V ~ Exponential(rate).
struct ContaminatedSum {
  std::shared_ptr<const Distribution> base;
  double prob;
  double scale;
  double rate;
  double floor = 0.0;
};

/// A univariate probability distribution with exact CDF integrals.
///
/// Instances are immutable after construction and cheap to copy. The
/// integrals `lower_partial(x) = E(x - Y)+ = int_{-inf}^x F` and
/// `upper_partial(x) = E(Y - x)+ = int_x^inf (1 - F)` are evaluated in closed
/// form for every variant except contamination of a non-empirical base,
/// which falls back to adaptive quadrature over the spike size.
class Distribution {
 public:
  using Variant = std::variant<EmpiricalSample, PiecewiseLinearCdf, Normal, SkewNormal,
                               Exponential, Beta, ContaminatedSum>;

  /// Equal weights when `weights` is empty; otherwise positive weights are normalised.
  static Distribution empirical(std::vector<double> values, std::vector<double> weights = {});
  static Distribution point_mass(double at);
  /// Knots must have strictly increasing t and nondecreasing F from 0 to 1.
  static Distribution piecewise_linear(std::vector<double> t, std::vector<double> cdf);
  static Distribution normal(double mean, double sd);
  static Distribution skew_normal(double location, double scale, double shape);
  static Distribution exponential(double rate);
  static Distribution beta(double r, double s);
  static Distribution contaminated(Distribution base, double prob, double scale, double rate,
                                   double floor = 0.0);

  const Variant& variant() const { return v_; }

  /// F(t). Throws DomainError for non-finite t.
  double cdf(double t) const;
  /// F(t-), the left limit.
  double cdf_left(double t) const;
  /// Density where it exists; NaN for distributions with atoms.
  double pdf(double t) const;

  /// int_l^u F(t) dt. Throws ArgumentError when l > u.
  double cdf_integral(double l, double u) const;
  /// int_l^u (1 - F(t)) dt.
  double complement_integral(double l, double u) const;

  /// E(x - Y)+ and E(Y - x)+.
  double lower_partial(double x) const;
  double upper_partial(double x) const;

  struct PartialPoint {
    double cdf;
    double lower;
  };
  /// F(x) and E(x - Y)+ together; shares special-function work where possible.
  PartialPoint lower_partial_point(double x) const;

  double mean() const;
  SupportRange support() const;

  double draw(Rng& rng) const;
  std::vector<double> sample(Rng& rng, std::size_t n) const;

 private:
  explicit Distribution(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Mean of SN(location, scale, shape).
double skew_normal_mean(double location, double scale, double shape);

}  // namespace hv
