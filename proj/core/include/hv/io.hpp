#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hv/distribution.hpp"
#include "hv/functionals.hpp"
#include "hv/scoring.hpp"
#include "hv/simulation.hpp"
#include "hv/verification.hpp"

namespace hv {

/// 17 significant digits; non-finite values render as inf, -inf or nan.
std::string format_double(double v);

/// Streaming JSON text with fixed formatting: two-space indent, keys in call order.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);
  /// Non-finite numbers are written as the strings "inf", "-inf" and "nan".
  JsonWriter& value(double v);
  JsonWriter& value(long long v);
  JsonWriter& value(std::size_t v) { return value(static_cast<long long>(v)); }
  JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& null();
  /// Finished document followed by a newline.
  std::string str() const;

 private:
  void before_value();
  JsonWriter& close(char c);
  void newline();
  std::string out_;
  std::vector<bool> first_;  // per open container: no element written yet
  bool after_key_ = false;
};

/// CSV with a header row; one numeric column.
std::vector<double> read_sample_csv(const std::string& path);
std::vector<double> parse_sample_csv(std::istream& in);

/// CSV with header and two numeric columns (t, F(t)).
Distribution read_piecewise_linear_csv(const std::string& path);
Distribution parse_piecewise_linear_csv(std::istream& in);

/// CSV with header; column `y` holds observations, every other column is a source.
ForecastDataset read_dataset_csv(const std::string& path);
ForecastDataset parse_dataset_csv(std::istream& in);

/// {"kind":"quadratic"} | {"kind":"exp","lambda":..} | {"kind":"density","grid":[..],"density":[..]}
/// | {"kind":"points","locations":[..],"masses":[..]} | {"kind":"extremes","lo":..,"hi":..}
ConvexSpec parse_convex_spec(std::string_view json);
/// Inline JSON when the argument starts with '{', otherwise a path to a JSON file.
ConvexSpec load_convex_spec(const std::string& json_or_path);
std::string convex_spec_to_json(const ConvexSpec& spec);

/// {"kind":"normal","mean":..,"sd":..} | {"kind":"skew_normal","location":..,"scale":..,"shape":..}
/// | {"kind":"exponential","rate":..} | {"kind":"beta","r":..,"s":..}
/// | {"kind":"empirical","values":[..],"weights":[..]}
Distribution parse_distribution(std::string_view json);
Distribution load_distribution(const std::string& json_or_path);

/// theta,side,<source>... with side in {at, left}.
std::string murphy_to_csv(const MurphyCurve& curve);
MurphyCurve parse_murphy_csv(std::istream& in);

std::string interval_to_json(const IntervalResult& r);
std::string dm_test_to_json(const DmTestResult& r, const std::string& source_a,
                            const std::string& source_b);
std::string switching_report_to_json(const SwitchingReport& r);
/// Rows are competitors; columns are rejection probabilities per (rule cap, observation).
std::string switching_report_to_csv(const SwitchingReport& r);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace hv
