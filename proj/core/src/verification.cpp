#include "hv/verification.hpp"

#include <algorithm>
#include <cmath>

#include "hv/errors.hpp"
#include "hv/numerics.hpp"

namespace hv {

ForecastDataset::ForecastDataset(std::vector<double> observations, std::vector<Source> sources)
    : observations_(std::move(observations)), sources_(std::move(sources)) {
  if (observations_.empty()) throw ArgumentError("dataset needs at least one observation");
  if (sources_.empty()) throw ArgumentError("dataset needs at least one forecast source");
  for (double y : observations_)
    if (!std::isfinite(y)) throw ArgumentError("observations must be finite");
  for (std::size_t s = 0; s < sources_.size(); ++s) {
    const auto& [name, xs] = sources_[s];
    if (xs.size() != observations_.size())
      throw ArgumentError("source '" + name + "' length differs from observations");
    for (double x : xs)
      if (!std::isfinite(x)) throw ArgumentError("source '" + name + "' has non-finite values");
    for (std::size_t t = 0; t < s; ++t)
      if (sources_[t].first == name) throw ArgumentError("duplicate source '" + name + "'");
  }
}

std::vector<std::string> ForecastDataset::source_names() const {
  std::vector<std::string> names;
  for (const auto& s : sources_) names.push_back(s.first);
  return names;
}

bool ForecastDataset::has_source(const std::string& name) const {
  return std::any_of(sources_.begin(), sources_.end(),
                     [&](const Source& s) { return s.first == name; });
}

const std::vector<double>& ForecastDataset::forecasts(const std::string& name) const {
  for (const auto& s : sources_)
    if (s.first == name) return s.second;
  throw ArgumentError("unknown source '" + name + "'");
}

double mean_score(const ForecastDataset& data, const std::string& source, const ScoringRule& rule) {
  const auto& xs = data.forecasts(source);
  const auto& ys = data.observations();
  double sum = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) sum += rule(xs[i], ys[i]);
  return sum / static_cast<double>(ys.size());
}

DmTestResult dm_test(const ForecastDataset& data, const std::string& source_a,
                     const std::string& source_b, const ScoringRule& rule, Sidedness sidedness,
                     double significance) {
  if (!(significance > 0.0 && significance < 1.0))
    throw ArgumentError("significance must lie in (0, 1)");
  const std::size_t n = data.size();
  if (n < 2) throw ArgumentError("dm_test needs at least two cases");
  const auto& xa = data.forecasts(source_a);
  const auto& xb = data.forecasts(source_b);
  const auto& ys = data.observations();

  double sum_a = 0.0;
  double sum_b = 0.0;
  double sum_d = 0.0;
  double sum_d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sa = rule(xa[i], ys[i]);
    const double sb = rule(xb[i], ys[i]);
    const double d = sa - sb;
    sum_a += sa;
    sum_b += sb;
    sum_d += d;
    sum_d2 += d * d;
  }
  if (sum_d2 == 0.0)
    throw DegenerateTestError("score differentials are all zero; the sources perform identically");

  const double nn = static_cast<double>(n);
  const double sigma = std::sqrt(sum_d2 / nn);
  const double t = std::sqrt(nn) * (sum_d / nn) / sigma;

  DmTestResult r{t, 0.0, sidedness, "none", sum_a / nn, sum_b / nn, n};
  if (sidedness == Sidedness::kTwo) {
    r.p_value = std::min(1.0, 2.0 * normal_cdf(-std::abs(t)));
    if (r.p_value < significance) r.preferred = t > 0.0 ? source_b : source_a;
  } else {
    r.p_value = normal_sf(t);
    if (r.p_value < significance) r.preferred = source_b;
  }
  return r;
}

namespace {

std::vector<ThetaPoint> theta_grid(const std::vector<double>& ys,
                                   const std::vector<const std::vector<double>*>& forecasts,
                                   const HuberParams& params) {
  std::vector<double> at;
  std::vector<double> left;
  for (double y : ys) {
    at.push_back(y);
    at.push_back(y - params.a());
    at.push_back(y + params.b());
  }
  for (const auto* xs : forecasts) {
    at.insert(at.end(), xs->begin(), xs->end());
    left.insert(left.end(), xs->begin(), xs->end());
  }
  const auto uniq = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  uniq(at);
  uniq(left);

  std::vector<ThetaPoint> grid;
  grid.reserve(at.size() + left.size());
  std::size_t j = 0;
  for (double theta : at) {
    while (j < left.size() && left[j] <= theta) grid.push_back({left[j++], ThetaSide::kLeftLimit});
    grid.push_back({theta, ThetaSide::kAt});
  }
  return grid;
}

std::vector<double> mean_elementary_scores(const std::vector<ThetaPoint>& grid,
                                           const std::vector<double>& xs,
                                           const std::vector<double>& ys,
                                           const HuberParams& params) {
  const auto before = [&](double theta) {
    return static_cast<std::size_t>(
        std::lower_bound(grid.begin(), grid.end(), theta,
                         [](const ThetaPoint& p, double t) { return p.theta < t; }) -
        grid.begin());
  };
  const auto after = [&](double theta) {
    return static_cast<std::size_t>(
        std::upper_bound(grid.begin(), grid.end(), theta,
                         [](double t, const ThetaPoint& p) { return t < p.theta; }) -
        grid.begin());
  };
  std::vector<double> sums(grid.size(), 0.0);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double x = xs[i];
    const double y = ys[i];
    if (x == y) continue;
    // Elementary scores vanish outside [min(x, y), max(x, y)].
    const std::size_t first = before(std::min(x, y));
    const std::size_t last = after(std::max(x, y));
    for (std::size_t j = first; j < last; ++j)
      sums[j] += elementary_huber_score(params, grid[j].theta, x, y, grid[j].side);
  }
  const double inv_n = 1.0 / static_cast<double>(ys.size());
  for (double& s : sums) s *= inv_n;
  return sums;
}

}  // namespace

std::vector<ThetaPoint> murphy_theta_grid(const ForecastDataset& data, const HuberParams& params) {
  std::vector<const std::vector<double>*> forecasts;
  for (const auto& s : data.sources()) forecasts.push_back(&s.second);
  return theta_grid(data.observations(), forecasts, params);
}

double MurphyCurve::area(std::size_t s) const {
  const auto& v = scores.at(s);
  double total = 0.0;
  // Walk `at` entries; the curve is linear on [theta_j, theta_{j+1}) and its
  // left end value at theta_{j+1} is the left-limit entry when one exists.
  std::size_t prev = grid.size();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (grid[j].side != ThetaSide::kAt) continue;
    if (prev < grid.size()) {
      const double end = (j > 0 && grid[j - 1].side == ThetaSide::kLeftLimit &&
                          grid[j - 1].theta == grid[j].theta)
                             ? v[j - 1]
                             : v[j];
      total += 0.5 * (v[prev] + end) * (grid[j].theta - grid[prev].theta);
    }
    prev = j;
  }
  return total;
}

std::size_t MurphyCurve::source_index(const std::string& name) const {
  for (std::size_t s = 0; s < sources.size(); ++s)
    if (sources[s] == name) return s;
  throw ArgumentError("unknown source '" + name + "'");
}

MurphyCurve murphy_diagram(const ForecastDataset& data, const HuberParams& params) {
  MurphyCurve curve;
  curve.grid = murphy_theta_grid(data, params);
  curve.sources = data.source_names();
  for (const auto& s : data.sources())
    curve.scores.push_back(
        mean_elementary_scores(curve.grid, s.second, data.observations(), params));
  return curve;
}

DominanceResult dominance_check(const ForecastDataset& data, const std::string& source_a,
                                const std::string& source_b, const HuberParams& params) {
  const auto& xa = data.forecasts(source_a);
  const auto& xb = data.forecasts(source_b);
  const auto& ys = data.observations();
  const auto grid = theta_grid(ys, {&xa, &xb}, params);
  const auto sa = mean_elementary_scores(grid, xa, ys, params);
  const auto sb = mean_elementary_scores(grid, xb, ys, params);
  DominanceResult r{true, {}};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (sa[j] > sb[j] + kDominanceTolerance) {
      r.dominates = false;
      r.violations.push_back(grid[j]);
    }
  }
  return r;
}

double skill_score(const ForecastDataset& data, const std::string& source,
                   const std::string& reference, const ScoringRule& rule) {
  const double ref = mean_score(data, reference, rule);
  if (ref == 0.0) throw DegenerateTestError("reference forecast has zero mean score");
  return 1.0 - mean_score(data, source, rule) / ref;
}

}  // namespace hv
