#pragma once

#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "hv/functionals.hpp"
#include "hv/numerics.hpp"

namespace hv {

/// phi(t) = t^2; dM = 2 dtheta.
struct QuadraticPhi {};

/// phi(t) = 2 exp(lambda t) / lambda^2; dM = 2 exp(lambda theta) dtheta.
struct ExponentialPhi {
  double lambda;
};

/// phi'' is the step density `density[k]` on [grid[k], grid[k+1]) and zero outside.
struct PiecewiseDensityPhi {
  std::vector<double> grid;
  std::vector<double> density;
};

/// phi(t) = sum_k m_k (t - theta_k)+; dM puts mass m_k at theta_k.
struct PointMassesPhi {
  std::vector<double> locations;
  std::vector<double> masses;
};

/// phi''(theta) = (lo - theta) + 1 below lo, 1 on (lo, hi), (theta - hi) + 1 above hi.
struct ExtremesPhi {
  double lo_knee;
  double hi_knee;
};

/// A convex function phi with left-continuous left derivative phi' and mixing
/// measure dM = dphi'. Parameterises every consistent score of the Huber,
/// quantile and expectile functionals.
class ConvexSpec {
 public:
  using Variant =
      std::variant<QuadraticPhi, ExponentialPhi, PiecewiseDensityPhi, PointMassesPhi, ExtremesPhi>;

  static ConvexSpec quadratic();
  static ConvexSpec exponential(double lambda);
  static ConvexSpec piecewise_density(std::vector<double> grid, std::vector<double> density);
  static ConvexSpec point_masses(std::vector<double> locations, std::vector<double> masses);
  static ConvexSpec extremes(double lo_knee, double hi_knee);

  const Variant& variant() const { return v_; }

  double phi(double t) const;
  /// Left-hand derivative of phi; nondecreasing and left-continuous.
  double phi_left_deriv(double t) const;
  /// phi'' where dM has a density; NaN for point masses.
  double mixing_density(double theta) const;

  struct Moments {
    double mass;   // M([l, u))
    double first;  // int_{[l,u)} (theta - origin) dM(theta)
  };
  /// Mass and origin-centred first moment of dM over the half-open [l, u).
  Moments moments(double l, double u, double origin) const;

 private:
  explicit ConvexSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Which side of theta an elementary score is evaluated on.
enum class ThetaSide { kAt, kLeftLimit };

/// max(min(x, b), -a); a and b may be +infinity.
double capped(double a, double b, double x);

/// Generalised Huber loss h^alpha_{a,b}(u).
double generalized_huber_loss(const HuberParams& params, double u);
/// Its derivative |1{u >= 0} - alpha| kappa_{a,b}(u).
double generalized_huber_loss_derivative(const HuberParams& params, double u);

/// |1{x>=y} - alpha| (phi(y) - phi(kappa(x-y) + y) + kappa(x-y) phi'(x)).
template <class Phi, class DPhi>
double consistent_huber_score(Phi&& phi, DPhi&& dphi, const HuberParams& params, double x,
                              double y) {
  if (x == y) return 0.0;
  const double k = capped(params.a(), params.b(), x - y);
  const double level = x >= y ? 1.0 - params.alpha() : params.alpha();
  return level * (phi(y) - phi(k + y) + k * dphi(x));
}

double consistent_huber_score(const ConvexSpec& spec, const HuberParams& params, double x,
                              double y);

/// The exponential family S_{lambda;a}: the consistent Huber score with
/// alpha = 1/2, a = b and phi(t) = 2 exp(lambda t) / lambda^2, written out in
/// closed form. lambda must be nonzero.
double exponential_family_score(double lambda, double a, double x, double y);

/// |1{x>=y} - alpha| |g(x) - g(y)| with g = phi'.
double consistent_quantile_score(const ConvexSpec& spec, double alpha, double x, double y);

/// |1{x>=y} - alpha| (phi(y) - phi(x) + phi'(x)(x - y)).
double consistent_expectile_score(const ConvexSpec& spec, double alpha, double x, double y);

double elementary_huber_score(const HuberParams& params, double theta, double x, double y,
                              ThetaSide side = ThetaSide::kAt);
double elementary_quantile_score(double alpha, double theta, double x, double y,
                                 ThetaSide side = ThetaSide::kAt);
double elementary_expectile_score(double alpha, double theta, double x, double y,
                                  ThetaSide side = ThetaSide::kAt);

/// int S^H_theta(x, y) dM(theta), integrated exactly piece by piece: the
/// integrand is linear in theta between the breakpoints x, y, y - a and y + b.
double mixture_quadrature_score(const ConvexSpec& spec, const HuberParams& params, double x,
                                double y);

/// V(x, y) = |1{x>=y} - alpha| kappa_{a,b}(x - y).
double identification_value(const HuberParams& params, double x, double y);

/// alpha = (1 - r_gain) / (2 - r_loss - r_gain) for tax rates in [0, 1).
double tax_rates_to_alpha(double r_gain, double r_loss);

/// Mixing measure weighting thresholds below lo_knee and above hi_knee increasingly.
ConvexSpec extremes_convex_spec(double lo_knee, double hi_knee);

struct ClassicalHuber {
  double a;  // 0 gives absolute error, +inf squared error
};
struct HuberLossRule {
  HuberParams params;
};
struct ConsistentHuberRule {
  ConvexSpec spec;
  HuberParams params;
};
struct ConsistentQuantileRule {
  ConvexSpec spec;
  double alpha;
};
struct ConsistentExpectileRule {
  ConvexSpec spec;
  double alpha;
};
struct ElementaryHuberRule {
  HuberParams params;
  double theta;
  ThetaSide side = ThetaSide::kAt;
};

/// A scoring function S(x, y) selected at run time.
class ScoringRule {
 public:
  using Variant = std::variant<ClassicalHuber, HuberLossRule, ConsistentHuberRule,
                               ConsistentQuantileRule, ConsistentExpectileRule, ElementaryHuberRule>;

  template <class Rule>
    requires std::is_constructible_v<Variant, Rule>
  ScoringRule(Rule rule) : v_(std::move(rule)) {}  // NOLINT(google-explicit-constructor)

  /// (x - y)^2 for a = inf, |x - y| for a = 0, 2 h^{1/2}_{a,a}(x - y) otherwise.
  static ScoringRule classical_huber(double a);
  static ScoringRule squared_error() { return classical_huber(kInf); }
  static ScoringRule absolute_error() { return classical_huber(0.0); }

  double operator()(double x, double y) const;
  std::string name() const;
  const Variant& variant() const { return v_; }

 private:
  Variant v_;
};

}  // namespace hv
