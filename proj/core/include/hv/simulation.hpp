#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hv/distribution.hpp"
#include "hv/scoring.hpp"

namespace hv {

/// Measurement spikes: Y^m = Y + U (floor + scale V), U ~ Bernoulli(prob), V ~ Exponential(rate).
struct ContaminationConfig {
  double prob = 0.05;
  double scale = 5.0;
  double rate = 0.8;
  double floor = 0.0;
};

/// Hierarchical skew-normal climate.
///
///   xi ~ SN(xi_location, xi_scale, xi_shape),  m = max(xi_pivot, xi)
///   omega = omega_base + B1 m / omega_divisor,  B1 ~ Beta(b1_r, b1_s)
///   nu = nu_span B2 - nu_span / 2,              B2 ~ Beta(b2_r, b2_r m / xi_pivot)
///   Y ~ SN(xi, omega, nu)
struct EnvironmentConfig {
  double xi_location = 19.0;
  double xi_scale = 6.0;
  double xi_shape = 20.0;
  double xi_pivot = 20.0;
  double omega_base = 1.4;
  double omega_divisor = 10.0;
  double b1_r = 2.0;
  double b1_s = 5.0;
  double b2_r = 1.5;
  double nu_span = 40.0;
  ContaminationConfig contamination;

  /// Throws ArgumentError when a scale is nonpositive or a probability is outside [0, 1].
  void validate() const;
};

struct SampledDay {
  Distribution forecast;  // the day's predictive skew normal
  double y;
  double y_measured;
};

/// Draws one day. The spike variables are drawn even when unused so that
/// runs differing only in contamination settings share their random stream.
SampledDay sample_day(const EnvironmentConfig& cfg, Rng& rng);

enum class CompetitorKind { kIdealMean, kNoisyMean, kDebiasedMean, kMedian, kHuberMean };

struct Competitor {
  std::string name;
  CompetitorKind kind;
  /// Noise sd, mean offset or Huber cap, depending on kind.
  double param = 0.0;
};

/// NoisyMean (sd sqrt(0.5)), DebiasedMean (+0.3), Median, Huber1.5, Huber2.5.
std::vector<Competitor> default_competitors();

/// The point forecast a competitor issues for `forecast`. Only NoisyMean consumes randomness.
double competitor_quote(const Competitor& c, const Distribution& forecast, double ideal_mean,
                        Rng& rng);

struct NamedQuote {
  std::string name;
  double value;
};

/// IdealMean followed by the default competitors.
std::vector<NamedQuote> competitor_quotes(const Distribution& forecast, Rng& rng);

struct SwitchingOptions {
  std::size_t reps = 4000;
  std::size_t days = 730;
  double significance = 0.05;
  std::uint64_t seed = 20210601;
  std::size_t threads = 0;  // 0 selects the hardware concurrency
  std::vector<Competitor> competitors = default_competitors();
  /// Caps of the rules S_a(x, y) = 2 h^{1/2}_{a,a}(x - y); 0 and inf give absolute and squared error.
  std::vector<double> rule_caps = {0.0, 1.5, 2.5, kInf};
};

enum class Observation { kClean, kContaminated };

struct SwitchingCell {
  std::string competitor;
  double rule_cap;
  Observation observation;
  std::size_t rejections;
  std::size_t degenerate;
  double probability;
  double std_error;
};

struct SwitchingReport {
  std::size_t reps;
  std::size_t days;
  std::uint64_t seed;
  double significance;
  std::vector<std::string> competitors;
  std::vector<double> rule_caps;
  /// Ordered by competitor, then rule cap, then clean before contaminated.
  std::vector<SwitchingCell> cells;

  /// Throws ArgumentError when no cell matches.
  const SwitchingCell& cell(const std::string& competitor, double rule_cap, Observation obs) const;
};

/// Monte-Carlo probability that a one-sided test at level `significance`
/// rejects "IdealMean performs at least as well as the competitor".
/// Replication r draws from mt19937_64 seeded by seed_seq{seed, r}; the
/// report does not depend on the thread count.
SwitchingReport switching_experiment(const EnvironmentConfig& cfg, const SwitchingOptions& opts);

}  // namespace hv
