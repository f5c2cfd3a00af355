#include "hv/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "hv/errors.hpp"
#include "hv/functionals.hpp"
#include "hv/verification.hpp"

namespace hv {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ArgumentError(std::string(what) + " must be positive");
}

const char* observation_name(Observation o) {
  return o == Observation::kClean ? "clean" : "contaminated";
}

}  // namespace

void EnvironmentConfig::validate() const {
  if (!std::isfinite(xi_location)) throw ArgumentError("xi_location must be finite");
  if (!std::isfinite(xi_shape)) throw ArgumentError("xi_shape must be finite");
  require_positive(xi_scale, "xi_scale");
  require_positive(xi_pivot, "xi_pivot");
  require_positive(omega_base, "omega_base");
  require_positive(omega_divisor, "omega_divisor");
  require_positive(b1_r, "b1_r");
  require_positive(b1_s, "b1_s");
  require_positive(b2_r, "b2_r");
  if (!(nu_span >= 0.0) || !std::isfinite(nu_span)) throw ArgumentError("nu_span must be nonnegative");
  const auto& c = contamination;
  if (!(c.prob >= 0.0 && c.prob <= 1.0)) throw ArgumentError("contamination prob must lie in [0, 1]");
  if (!(c.scale >= 0.0) || !std::isfinite(c.scale))
    throw ArgumentError("contamination scale must be nonnegative");
  require_positive(c.rate, "contamination rate");
  if (!(c.floor >= 0.0) || !std::isfinite(c.floor))
    throw ArgumentError("contamination floor must be nonnegative");
}

SampledDay sample_day(const EnvironmentConfig& cfg, Rng& rng) {
  const double xi =
      Distribution::skew_normal(cfg.xi_location, cfg.xi_scale, cfg.xi_shape).draw(rng);
  const double m = std::max(cfg.xi_pivot, xi);
  const double omega = cfg.omega_base + Distribution::beta(cfg.b1_r, cfg.b1_s).draw(rng) * m / cfg.omega_divisor;
  const double b2 = Distribution::beta(cfg.b2_r, cfg.b2_r * m / cfg.xi_pivot).draw(rng);
  const double nu = cfg.nu_span * b2 - 0.5 * cfg.nu_span;
  Distribution forecast = Distribution::skew_normal(xi, omega, nu);
  const double y = forecast.draw(rng);

  const auto& c = cfg.contamination;
  const bool spike = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < c.prob;
  const double v = std::exponential_distribution<double>(c.rate)(rng);
  const double y_measured = spike ? y + c.floor + c.scale * v : y;
  return {std::move(forecast), y, y_measured};
}

std::vector<Competitor> default_competitors() {
  return {
      {"NoisyMean", CompetitorKind::kNoisyMean, std::sqrt(0.5)},
      {"DebiasedMean", CompetitorKind::kDebiasedMean, 0.3},
      {"Median", CompetitorKind::kMedian, 0.0},
      {"Huber1.5", CompetitorKind::kHuberMean, 1.5},
      {"Huber2.5", CompetitorKind::kHuberMean, 2.5},
  };
}

double competitor_quote(const Competitor& c, const Distribution& forecast, double ideal_mean,
                        Rng& rng) {
  switch (c.kind) {
    case CompetitorKind::kIdealMean:
      return ideal_mean;
    case CompetitorKind::kNoisyMean:
      return ideal_mean + c.param * std::normal_distribution<double>(0.0, 1.0)(rng);
    case CompetitorKind::kDebiasedMean:
      return ideal_mean + c.param;
    case CompetitorKind::kMedian:
      return quantile(forecast, 0.5).midpoint();
    case CompetitorKind::kHuberMean:
      return huber_functional(forecast, HuberParams::symmetric(0.5, c.param)).midpoint();
  }
  throw ArgumentError("unknown competitor kind");
}

std::vector<NamedQuote> competitor_quotes(const Distribution& forecast, Rng& rng) {
  const double ideal = expectile(forecast, 0.5);
  std::vector<NamedQuote> out{{"IdealMean", ideal}};
  for (const auto& c : default_competitors())
    out.push_back({c.name, competitor_quote(c, forecast, ideal, rng)});
  return out;
}

const SwitchingCell& SwitchingReport::cell(const std::string& competitor, double rule_cap,
                                           Observation obs) const {
  for (const auto& c : cells)
    if (c.competitor == competitor && c.rule_cap == rule_cap && c.observation == obs) return c;
  throw ArgumentError("no switching cell for " + competitor + " / " + observation_name(obs));
}

SwitchingReport switching_experiment(const EnvironmentConfig& cfg, const SwitchingOptions& opts) {
  cfg.validate();
  if (opts.reps < 1) throw ArgumentError("reps must be at least 1");
  if (opts.days < 2) throw ArgumentError("days must be at least 2");
  if (!(opts.significance > 0.0 && opts.significance < 1.0))
    throw ArgumentError("significance must lie in (0, 1)");
  if (opts.competitors.empty()) throw ArgumentError("at least one competitor is required");
  if (opts.rule_caps.empty()) throw ArgumentError("at least one scoring rule is required");
  for (const auto& c : opts.competitors)
    if (c.name == "IdealMean") throw ArgumentError("competitor name IdealMean is reserved");

  std::vector<ScoringRule> rules;
  for (double a : opts.rule_caps) rules.push_back(ScoringRule::classical_huber(a));

  const std::size_t n_comp = opts.competitors.size();
  const std::size_t n_rule = rules.size();
  const std::size_t n_cell = n_comp * n_rule * 2;
  // outcome[r * n_cell + k]: 0 no rejection, 1 rejection, 2 degenerate.
  std::vector<unsigned char> outcome(opts.reps * n_cell, 0);

  const auto run_rep = [&](std::size_t rep) {
    std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                      static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32)};
    Rng rng(seq);
    std::vector<double> clean(opts.days);
    std::vector<double> measured(opts.days);
    std::vector<double> ideal(opts.days);
    std::vector<std::vector<double>> quotes(n_comp, std::vector<double>(opts.days));
    for (std::size_t d = 0; d < opts.days; ++d) {
      SampledDay day = sample_day(cfg, rng);
      clean[d] = day.y;
      measured[d] = day.y_measured;
      ideal[d] = expectile(day.forecast, 0.5);
      for (std::size_t c = 0; c < n_comp; ++c)
        quotes[c][d] = competitor_quote(opts.competitors[c], day.forecast, ideal[d], rng);
    }
    for (int o = 0; o < 2; ++o) {
      std::vector<ForecastDataset::Source> sources{{"IdealMean", ideal}};
      for (std::size_t c = 0; c < n_comp; ++c)
        sources.push_back({opts.competitors[c].name, quotes[c]});
      const ForecastDataset data(o == 0 ? clean : measured, std::move(sources));
      for (std::size_t c = 0; c < n_comp; ++c) {
        for (std::size_t r = 0; r < n_rule; ++r) {
          unsigned char result = 0;
          try {
            const DmTestResult t = dm_test(data, "IdealMean", opts.competitors[c].name, rules[r],
                                           Sidedness::kOne, opts.significance);
            result = t.p_value < opts.significance ? 1 : 0;
          } catch (const DegenerateTestError&) {
            result = 2;
          }
          outcome[rep * n_cell + (c * n_rule + r) * 2 + static_cast<std::size_t>(o)] = result;
        }
      }
    }
  };

  std::size_t threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, opts.reps);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t rep; (rep = next.fetch_add(1)) < opts.reps;) {
      try {
        run_rep(rep);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(opts.reps);
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  SwitchingReport report{opts.reps, opts.days, opts.seed, opts.significance, {}, opts.rule_caps, {}};
  const double reps = static_cast<double>(opts.reps);
  for (std::size_t c = 0; c < n_comp; ++c) {
    report.competitors.push_back(opts.competitors[c].name);
    for (std::size_t r = 0; r < n_rule; ++r) {
      for (std::size_t o = 0; o < 2; ++o) {
        const std::size_t k = (c * n_rule + r) * 2 + o;
        std::size_t rejections = 0;
        std::size_t degenerate = 0;
        for (std::size_t rep = 0; rep < opts.reps; ++rep) {
          const unsigned char v = outcome[rep * n_cell + k];
          rejections += v == 1;
          degenerate += v == 2;
        }
        const double p = static_cast<double>(rejections) / reps;
        report.cells.push_back({opts.competitors[c].name, opts.rule_caps[r],
                                o == 0 ? Observation::kClean : Observation::kContaminated,
                                rejections, degenerate, p, std::sqrt(p * (1.0 - p) / reps)});
      }
    }
  }
  return report;
}

}  // namespace hv
