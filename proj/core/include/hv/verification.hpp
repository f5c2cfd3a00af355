#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hv/functionals.hpp"
#include "hv/scoring.hpp"

namespace hv {

/// Observations y_1..y_n with one or more named forecast series of equal length.
class ForecastDataset {
 public:
  using Source = std::pair<std::string, std::vector<double>>;

  /// Throws ArgumentError on empty data, unequal lengths, non-finite values
  /// or duplicate source names.
  ForecastDataset(std::vector<double> observations, std::vector<Source> sources);

  std::size_t size() const { return observations_.size(); }
  const std::vector<double>& observations() const { return observations_; }
  const std::vector<Source>& sources() const { return sources_; }
  std::vector<std::string> source_names() const;
  bool has_source(const std::string& name) const;
  /// Throws ArgumentError for an unknown name.
  const std::vector<double>& forecasts(const std::string& name) const;

 private:
  std::vector<double> observations_;
  std::vector<Source> sources_;
};

/// (1/n) sum_i S(x_i, y_i), summed in index order.
double mean_score(const ForecastDataset& data, const std::string& source, const ScoringRule& rule);

enum class Sidedness { kOne, kTwo };

struct DmTestResult {
  double t_n;
  double p_value;
  Sidedness sidedness;
  /// Name of the source favoured on rejection, "none" otherwise.
  std::string preferred;
  double mean_a;
  double mean_b;
  std::size_t n;
};

/// t_n = sqrt(n) (mean S_A - mean S_B) / sigma_n with sigma_n^2 = (1/n) sum d_i^2.
///
/// Two-sided: p = 2 Phi(-|t_n|). One-sided: the null is that A performs at
/// least as well as B, p = Phi(-t_n), and rejection favours B.
/// Throws DegenerateTestError when every score differential is zero.
DmTestResult dm_test(const ForecastDataset& data, const std::string& source_a,
                     const std::string& source_b, const ScoringRule& rule, Sidedness sidedness,
                     double significance = 0.05);

struct ThetaPoint {
  double theta;
  ThetaSide side;

  friend bool operator==(const ThetaPoint&, const ThetaPoint&) = default;
};

/// Every threshold at which mean elementary Huber scores can change slope or
/// jump: forecasts, observations, y - a and y + b (side `at`), plus each
/// forecast again as a left limit. Sorted by theta with left limits first.
std::vector<ThetaPoint> murphy_theta_grid(const ForecastDataset& data, const HuberParams& params);

struct MurphyCurve {
  std::vector<ThetaPoint> grid;
  std::vector<std::string> sources;
  /// scores[s][j] is the mean elementary score of source s at grid[j].
  std::vector<std::vector<double>> scores;

  /// Integral over theta of the curve for source index s, exact for the
  /// piecewise-linear interpolation between grid points.
  double area(std::size_t s) const;
  std::size_t source_index(const std::string& name) const;
};

MurphyCurve murphy_diagram(const ForecastDataset& data, const HuberParams& params);

struct DominanceResult {
  bool dominates;
  std::vector<ThetaPoint> violations;
};

inline constexpr double kDominanceTolerance = 1e-12;

/// A dominates B when its mean elementary score is no larger at every grid entry.
DominanceResult dominance_check(const ForecastDataset& data, const std::string& source_a,
                                const std::string& source_b, const HuberParams& params);

/// 1 - mean S(source) / mean S(reference).
double skill_score(const ForecastDataset& data, const std::string& source,
                   const std::string& reference, const ScoringRule& rule);

}  // namespace hv
