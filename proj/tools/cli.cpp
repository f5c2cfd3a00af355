#include "cli.hpp"

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <memory>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "hv/errors.hpp"
#include "hv/io.hpp"

namespace hv::cli {
namespace {

struct Options {
  double alpha = 0.5;
  std::optional<double> a;
  std::optional<double> b;
  std::string phi = R"({"kind":"quadratic"})";
  std::string input;
  std::string cdf;
  std::string dist;
  std::string output;
  std::string summary;
  std::string kind = "huber";
  std::string source_a;
  std::string source_b;
  std::string reference;
  std::string sidedness = "two";
  double significance = 0.05;
  std::optional<double> tol;
  std::uint64_t seed = 20210601;
  long long reps = 4000;
  long long days = 730;
  std::size_t threads = 0;
  double contamination = 0.05;
  double spike_floor = 0.0;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("hubervf", sink);
  logger->set_pattern("[%l] %v");
  const char* env = std::getenv("HV_LOG");
  logger->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
  return logger;
}

HuberParams huber_params(const Options& o) {
  if (!o.a) throw ArgumentError("--a is required");
  return HuberParams(o.alpha, *o.a, o.b.value_or(*o.a));
}

ScoringRule make_rule(const Options& o) {
  if (o.kind == "huber") return ConsistentHuberRule{load_convex_spec(o.phi), huber_params(o)};
  if (o.kind == "quantile") return ConsistentQuantileRule{load_convex_spec(o.phi), o.alpha};
  if (o.kind == "expectile") return ConsistentExpectileRule{load_convex_spec(o.phi), o.alpha};
  if (o.kind == "loss") return HuberLossRule{huber_params(o)};
  if (o.kind == "classical") {
    if (!o.a) throw ArgumentError("--a is required");
    return ScoringRule::classical_huber(*o.a);
  }
  throw ArgumentError("unknown --kind '" + o.kind + "'");
}

Sidedness parse_sidedness(const std::string& s) {
  if (s == "one") return Sidedness::kOne;
  if (s == "two") return Sidedness::kTwo;
  throw ArgumentError("--sidedness must be 'one' or 'two'");
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
  } else {
    write_text_file(o.output, text);
  }
}

int cmd_functional(const Options& o, std::ostream& out, spdlog::logger& log) {
  const int sources = !o.input.empty() + !o.cdf.empty() + !o.dist.empty();
  if (sources != 1) throw ArgumentError("give exactly one of --input, --cdf or --dist");
  if (o.kind != "huber" && o.kind != "quantile" && o.kind != "expectile")
    throw ArgumentError("--kind must be huber, quantile or expectile");
  if (o.kind == "huber") huber_params(o);
  const Distribution dist = !o.input.empty() ? Distribution::empirical(read_sample_csv(o.input))
                            : !o.cdf.empty() ? read_piecewise_linear_csv(o.cdf)
                                             : load_distribution(o.dist);
  IntervalResult r{};
  if (o.kind == "huber") {
    r = huber_functional(dist, huber_params(o), o.tol);
  } else if (o.kind == "quantile") {
    r = quantile(dist, o.alpha);
  } else {
    const double e = expectile(dist, o.alpha, o.tol);
    r = {e, e};
  }
  log.info("{} functional: [{}, {}]", o.kind, r.lo, r.hi);
  emit(o, interval_to_json(r), out);
  return kOk;
}

int cmd_score(const Options& o, std::ostream& out, spdlog::logger& log) {
  const ScoringRule rule = make_rule(o);
  const ForecastDataset data = read_dataset_csv(o.input);
  if (!o.reference.empty()) data.forecasts(o.reference);
  log.info("scoring {} cases from {} sources", data.size(), data.sources().size());
  JsonWriter w;
  w.begin_object().key("rule").value(rule.name()).key("n").value(data.size());
  if (!o.reference.empty()) w.key("reference").value(o.reference);
  w.key("scores").begin_array();
  for (const auto& name : data.source_names()) {
    w.begin_object().key("source").value(name).key("mean").value(mean_score(data, name, rule));
    if (!o.reference.empty()) w.key("skill").value(skill_score(data, name, o.reference, rule));
    w.end_object();
  }
  w.end_array().end_object();
  emit(o, w.str(), out);
  return kOk;
}

int cmd_murphy(const Options& o, std::ostream& out, spdlog::logger& log) {
  const HuberParams params = huber_params(o);
  const ForecastDataset data = read_dataset_csv(o.input);
  const MurphyCurve curve = murphy_diagram(data, params);
  log.info("Murphy grid has {} entries", curve.grid.size());

  JsonWriter w;
  w.begin_object().key("grid_points").value(curve.grid.size()).key("sources").begin_array();
  for (std::size_t s = 0; s < curve.sources.size(); ++s)
    w.begin_object().key("source").value(curve.sources[s]).key("area").value(curve.area(s)).end_object();
  w.end_array().key("dominance").begin_array();
  for (const auto& a : curve.sources) {
    for (const auto& b : curve.sources) {
      if (a == b) continue;
      const DominanceResult d = dominance_check(data, a, b, params);
      w.begin_object().key("a").value(a).key("b").value(b).key("dominates").value(d.dominates).end_object();
    }
  }
  w.end_array().end_object();

  const std::string csv = murphy_to_csv(curve);
  if (o.output.empty()) {
    out << csv;
    if (!o.summary.empty()) write_text_file(o.summary, w.str());
  } else {
    write_text_file(o.output, csv);
    if (o.summary.empty()) {
      out << w.str();
    } else {
      write_text_file(o.summary, w.str());
    }
  }
  return kOk;
}

int cmd_dm_test(const Options& o, std::ostream& out, spdlog::logger& log) {
  const ScoringRule rule = make_rule(o);
  const Sidedness side = parse_sidedness(o.sidedness);
  const ForecastDataset data = read_dataset_csv(o.input);
  log.info("dm-test {} vs {} on {} cases", o.source_a, o.source_b, data.size());
  const DmTestResult r = dm_test(data, o.source_a, o.source_b, rule, side, o.significance);
  emit(o, dm_test_to_json(r, o.source_a, o.source_b), out);
  return kOk;
}

int cmd_dominance(const Options& o, std::ostream& out, spdlog::logger&) {
  const HuberParams params = huber_params(o);
  const ForecastDataset data = read_dataset_csv(o.input);
  const DominanceResult r = dominance_check(data, o.source_a, o.source_b, params);
  JsonWriter w;
  w.begin_object().key("source_a").value(o.source_a).key("source_b").value(o.source_b);
  w.key("dominates").value(r.dominates).key("violations").begin_array();
  for (const auto& v : r.violations)
    w.begin_object()
        .key("theta").value(v.theta)
        .key("side").value(v.side == ThetaSide::kAt ? "at" : "left")
        .end_object();
  w.end_array().end_object();
  emit(o, w.str(), out);
  return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out, spdlog::logger& log) {
  if (o.reps < 1) throw ArgumentError("--reps must be at least 1");
  if (o.days < 2) throw ArgumentError("--days must be at least 2");
  EnvironmentConfig cfg;
  cfg.contamination.prob = o.contamination;
  cfg.contamination.floor = o.spike_floor;
  SwitchingOptions opts;
  opts.reps = static_cast<std::size_t>(o.reps);
  opts.days = static_cast<std::size_t>(o.days);
  opts.seed = o.seed;
  opts.threads = o.threads;
  opts.significance = o.significance;
  const auto start = std::chrono::steady_clock::now();
  const SwitchingReport report = switching_experiment(cfg, opts);
  log.info("simulated {} replications in {:.1f}s", report.reps,
           std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  out << switching_report_to_json(report);
  if (!o.output.empty()) write_text_file(o.output, switching_report_to_csv(report));
  return kOk;
}

void add_huber_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--alpha", o.alpha, "Asymmetry level in (0, 1)");
  cmd->add_option("--a", o.a, "Lower cap a (inf allowed for --kind classical)");
  cmd->add_option("--b", o.b, "Upper cap b; defaults to a");
}

void add_rule_flags(CLI::App* cmd, Options& o) {
  add_huber_flags(cmd, o);
  cmd->add_option("--kind", o.kind, "huber | quantile | expectile | loss | classical")
      ->check(CLI::IsMember({"huber", "quantile", "expectile", "loss", "classical"}));
  cmd->add_option("--phi", o.phi, "Convex function as inline JSON or a JSON file path");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Huber functionals, consistent scores and forecast verification"};
  app.name(args.empty() ? "hubervf" : args.front());
  app.require_subcommand(1);

  auto* functional = app.add_subcommand("functional", "Huber quantile, quantile or expectile");
  add_huber_flags(functional, o);
  functional->add_option("--kind", o.kind, "huber | quantile | expectile")
      ->check(CLI::IsMember({"huber", "quantile", "expectile"}));
  functional->add_option("--input", o.input, "One-column sample CSV");
  functional->add_option("--cdf", o.cdf, "Two-column piecewise-linear CDF CSV");
  functional->add_option("--dist", o.dist, "Parametric distribution as JSON or a JSON file path");
  functional->add_option("--tol", o.tol, "Argument tolerance");
  functional->add_option("--output", o.output, "Write JSON here instead of stdout");

  auto* score = app.add_subcommand("score", "Mean score of every source");
  add_rule_flags(score, o);
  score->add_option("--input", o.input, "Dataset CSV with column y")->required();
  score->add_option("--reference", o.reference, "Reference source for skill scores");
  score->add_option("--output", o.output, "Write JSON here instead of stdout");

  auto* murphy = app.add_subcommand("murphy", "Murphy diagram of elementary Huber scores");
  add_huber_flags(murphy, o);
  murphy->add_option("--input", o.input, "Dataset CSV with column y")->required();
  murphy->add_option("--output", o.output, "Write the curve CSV here; summary goes to stdout");
  murphy->add_option("--summary", o.summary, "Write the JSON summary here");

  auto* dm = app.add_subcommand("dm-test", "Test of equal predictive performance");
  add_rule_flags(dm, o);
  dm->add_option("--input", o.input, "Dataset CSV with column y")->required();
  dm->add_option("--source-a", o.source_a, "First source")->required();
  dm->add_option("--source-b", o.source_b, "Second source")->required();
  dm->add_option("--sidedness", o.sidedness, "one | two")->check(CLI::IsMember({"one", "two"}));
  dm->add_option("--significance", o.significance, "Test level");
  dm->add_option("--output", o.output, "Write JSON here instead of stdout");

  auto* dom = app.add_subcommand("dominance", "Empirical dominance of A over B");
  add_huber_flags(dom, o);
  dom->add_option("--input", o.input, "Dataset CSV with column y")->required();
  dom->add_option("--source-a", o.source_a, "Candidate dominating source")->required();
  dom->add_option("--source-b", o.source_b, "Compared source")->required();
  dom->add_option("--output", o.output, "Write JSON here instead of stdout");

  auto* sim = app.add_subcommand("simulate", "Switching study on the synthetic climate");
  sim->add_option("--reps", o.reps, "Replications");
  sim->add_option("--days", o.days, "Days per replication");
  sim->add_option("--seed", o.seed, "Base seed");
  sim->add_option("--threads", o.threads, "Worker threads; 0 uses all cores");
  sim->add_option("--contamination", o.contamination, "Spike probability");
  sim->add_option("--spike-floor", o.spike_floor, "Constant added to every spike");
  sim->add_option("--significance", o.significance, "Test level");
  sim->add_option("--output", o.output, "Write the CSV table here");

  auto logger = make_logger(err);
  try {
    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*functional) return cmd_functional(o, out, *logger);
    if (*score) return cmd_score(o, out, *logger);
    if (*murphy) return cmd_murphy(o, out, *logger);
    if (*dm) return cmd_dm_test(o, out, *logger);
    if (*dom) return cmd_dominance(o, out, *logger);
    if (*sim) return cmd_simulate(o, out, *logger);
  } catch (const DegenerateTestError& e) {
    err << "degenerate: " << e.what() << '\n';
    return kDegenerate;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const ArgumentError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kValidation;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace hv::cli
