#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include "json.hpp"
#include <sstream>

#include "cli.hpp"
#include "hv/io.hpp"
#include "hv/verification.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kFixtures = HV_FIXTURE_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  args.insert(args.begin(), "hubervf");
  const int code = hv::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("hv_cli_" + std::to_string(counter_++) + "_" +
                                                 std::to_string(::testing::UnitTest::GetInstance()->random_seed()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

TEST(CliFunctional, TwoPointSample) {
  const auto r = run({"functional", "--input", fixture("two_point.csv"), "--alpha", "0.5", "--a", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["lo"].get<double>(), 1.0, 1e-6);
  EXPECT_NEAR(j["hi"].get<double>(), 9.0, 1e-6);
  EXPECT_NEAR(j["midpoint"].get<double>(), 5.0, 1e-6);
}

TEST(CliFunctional, ParametricAndCdfInputs) {
  auto r = run({"functional", "--dist", R"({"kind":"exponential","rate":1})", "--kind", "expectile", "--alpha", "0.7"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["lo"].get<double>(), 1.3467714458860467, 1e-8);

  r = run({"functional", "--cdf", fixture("cdf.csv"), "--kind", "quantile", "--alpha", "0.25"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["lo"].get<double>(), 1.0, 1e-9);
}

TEST(CliFunctional, InvalidAlphaIsAValidationError) {
  EXPECT_EQ(run({"functional", "--input", fixture("two_point.csv"), "--alpha", "1.2", "--a", "1"}).code, 2);
  EXPECT_EQ(run({"functional"}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
}

TEST(CliFunctional, MissingFileIsAnIoError) {
  EXPECT_EQ(run({"functional", "--input", "/nonexistent/x.csv", "--alpha", "0.5", "--a", "1"}).code, 4);
  EXPECT_EQ(run({"score", "--input", "/nonexistent/x.csv", "--alpha", "0.5", "--a", "1"}).code, 4);
}

TEST(CliScore, MatchesLibrary) {
  const auto r = run({"score", "--input", fixture("dm.csv"), "--alpha", "0.5", "--a", "1", "--reference", "B"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  const auto data = hv::read_dataset_csv(fixture("dm.csv"));
  const hv::ScoringRule rule =
      hv::ConsistentHuberRule{hv::ConvexSpec::quadratic(), hv::HuberParams(0.5, 1.0, 1.0)};
  EXPECT_EQ(j["scores"][0]["mean"].get<double>(), hv::mean_score(data, "A", rule));
  EXPECT_EQ(j["scores"][0]["skill"].get<double>(), hv::skill_score(data, "A", "B", rule));
}

TEST(CliMurphy, PerfectSourceAndByteStableCsv) {
  TempDir tmp;
  const auto r = run({"murphy", "--input", fixture("murphy.csv"), "--alpha", "0.5", "--a", "1.5",
                      "--output", tmp.file("m.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = hv::read_text_file(tmp.file("m.csv"));
  std::istringstream in(csv);
  const auto curve = hv::parse_murphy_csv(in);
  EXPECT_EQ(hv::murphy_to_csv(curve), csv);
  const auto perfect = curve.source_index("Perfect");
  for (double v : curve.scores[perfect]) EXPECT_EQ(v, 0.0);

  const auto data = hv::read_dataset_csv(fixture("murphy.csv"));
  const hv::HuberParams p(0.5, 1.5, 1.5);
  EXPECT_EQ(csv, hv::murphy_to_csv(hv::murphy_diagram(data, p)));

  const auto summary = json::parse(r.out);
  for (const auto& d : summary["dominance"]) {
    const auto lib = hv::dominance_check(data, d["a"].get<std::string>(), d["b"].get<std::string>(), p);
    EXPECT_EQ(d["dominates"].get<bool>(), lib.dominates);
  }
}

TEST(CliMurphy, SummaryFile) {
  TempDir tmp;
  const auto r = run({"murphy", "--input", fixture("murphy.csv"), "--alpha", "0.5", "--a", "1.5",
                      "--summary", tmp.file("s.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("theta,side,", 0), 0u);
  const auto s = json::parse(hv::read_text_file(tmp.file("s.json")));
  EXPECT_EQ(s["sources"].size(), 3u);
}

TEST(CliDm, FixtureAndSidedness) {
  const auto two = run({"dm-test", "--input", fixture("dm.csv"), "--source-a", "A", "--source-b", "B",
                        "--alpha", "0.5", "--a", "inf", "--kind", "classical"});
  ASSERT_EQ(two.code, 0) << two.err;
  const auto one = run({"dm-test", "--input", fixture("dm.csv"), "--source-a", "A", "--source-b", "B",
                        "--alpha", "0.5", "--a", "inf", "--kind", "classical", "--sidedness", "one"});
  ASSERT_EQ(one.code, 0) << one.err;
  const auto jt = json::parse(two.out);
  const auto jo = json::parse(one.out);
  const auto data = hv::read_dataset_csv(fixture("dm.csv"));
  const auto lib = hv::dm_test(data, "A", "B", hv::ScoringRule::squared_error(), hv::Sidedness::kTwo);
  EXPECT_EQ(jt["t_n"].get<double>(), lib.t_n);
  EXPECT_NEAR(jo["p_value"].get<double>(), 0.5 * jt["p_value"].get<double>(), 1e-15);
  EXPECT_EQ(two.out, hv::dm_test_to_json(lib, "A", "B"));
}

TEST(CliDm, IdenticalColumnsAreDegenerate) {
  EXPECT_EQ(run({"dm-test", "--input", fixture("identical.csv"), "--source-a", "A", "--source-b", "B",
                 "--alpha", "0.5", "--a", "1"})
                .code,
            3);
  EXPECT_EQ(run({"dm-test", "--input", fixture("dm.csv"), "--source-a", "A", "--source-b", "Z",
                 "--alpha", "0.5", "--a", "1"})
                .code,
            2);
}

TEST(CliDominance, MatchesLibrary) {
  const auto r = run({"dominance", "--input", fixture("murphy.csv"), "--source-a", "Perfect", "--source-b", "A",
                      "--alpha", "0.5", "--a", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(json::parse(r.out)["dominates"].get<bool>());
}

TEST(CliSimulate, DeterministicBytes) {
  TempDir tmp;
  const std::vector<std::string> base = {"simulate", "--reps", "1", "--days", "30", "--seed", "7"};
  auto args1 = base;
  args1.insert(args1.end(), {"--output", tmp.file("a.csv")});
  auto args2 = base;
  args2.insert(args2.end(), {"--output", tmp.file("b.csv"), "--threads", "2"});
  const auto r1 = run(args1);
  const auto r2 = run(args2);
  ASSERT_EQ(r1.code, 0) << r1.err;
  ASSERT_EQ(r2.code, 0) << r2.err;
  EXPECT_EQ(r1.out, r2.out);
  EXPECT_EQ(hv::read_text_file(tmp.file("a.csv")), hv::read_text_file(tmp.file("b.csv")));

  hv::SwitchingOptions opts;
  opts.reps = 1;
  opts.days = 30;
  opts.seed = 7;
  const auto report = hv::switching_experiment(hv::EnvironmentConfig{}, opts);
  EXPECT_EQ(r1.out, hv::switching_report_to_json(report));
  EXPECT_EQ(hv::read_text_file(tmp.file("a.csv")), hv::switching_report_to_csv(report));
}

TEST(CliSimulate, NoContaminationColumnsAgree) {
  const auto r = run({"simulate", "--reps", "2", "--days", "40", "--contamination", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  const auto& cells = j["cells"];
  for (std::size_t k = 0; k + 1 < cells.size(); k += 2)
    EXPECT_EQ(cells[k]["rejections"], cells[k + 1]["rejections"]);
}

TEST(CliSimulate, Validation) {
  EXPECT_EQ(run({"simulate", "--reps", "0"}).code, 2);
  EXPECT_EQ(run({"simulate", "--reps", "1", "--contamination", "2"}).code, 2);
}

}  // namespace
