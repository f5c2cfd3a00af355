#include "hv/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hv/errors.hpp"
#include "json.hpp"

namespace hv {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_number(const std::string& cell, std::size_t line_no) {
  if (cell.empty()) throw IoError("line " + std::to_string(line_no) + ": empty field");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || errno == ERANGE)
    throw IoError("line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
  return v;
}

// Header plus rows of numbers, all rows as wide as the header.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

Table parse_table(std::istream& in) {
  Table t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    t.header = split_row(line);
    break;
  }
  if (t.header.empty()) throw IoError("CSV input is empty");
  t.columns.resize(t.header.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != t.header.size())
      throw IoError("line " + std::to_string(line_no) + ": expected " +
                    std::to_string(t.header.size()) + " fields, found " +
                    std::to_string(cells.size()));
    for (std::size_t c = 0; c < cells.size(); ++c)
      t.columns[c].push_back(parse_number(cells[c], line_no));
  }
  if (t.columns.front().empty()) throw IoError("CSV input has no data rows");
  return t;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

std::vector<double> number_array(const json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_array())
    throw ArgumentError(std::string("JSON field '") + field + "' must be an array of numbers");
  std::vector<double> v;
  for (const auto& e : j.at(field)) {
    if (!e.is_number()) throw ArgumentError(std::string("JSON field '") + field + "' must hold numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

double number_field(const json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_number())
    throw ArgumentError(std::string("JSON field '") + field + "' must be a number");
  return j.at(field).get<double>();
}

json parse_object(std::string_view text, const char* what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ArgumentError(std::string(what) + ": invalid JSON: " + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ArgumentError(std::string(what) + ": expected an object with a string 'kind'");
  return j;
}

std::string inline_or_file(const std::string& arg) {
  const std::string t = trim(arg);
  if (!t.empty() && t.front() == '{') return t;
  return read_text_file(arg);
}

void write_number_array(JsonWriter& w, const std::vector<double>& v) {
  w.begin_array();
  for (double x : v) w.value(x);
  w.end_array();
}

std::string cap_label(double a) {
  if (std::isinf(a)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", a);
  return buf;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0 as well
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void JsonWriter::newline() {
  out_ += '\n';
  out_.append(2 * first_.size(), ' ');
}

void JsonWriter::before_value() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (!first_.empty()) {
    if (!first_.back()) out_ += ',';
    first_.back() = false;
    newline();
  }
}

JsonWriter& JsonWriter::begin_object() {
  before_value();
  out_ += '{';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::close(char c) {
  const bool empty = first_.back();
  first_.pop_back();
  if (!empty) newline();
  out_ += c;
  return *this;
}

JsonWriter& JsonWriter::end_object() { return close('}'); }

JsonWriter& JsonWriter::begin_array() {
  before_value();
  out_ += '[';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() { return close(']'); }

JsonWriter& JsonWriter::key(std::string_view k) {
  before_value();
  out_ += json(std::string(k)).dump();
  out_ += ": ";
  after_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  if (!std::isfinite(v)) return value(std::string_view(format_double(v)));
  before_value();
  out_ += format_double(v);
  return *this;
}

JsonWriter& JsonWriter::value(long long v) {
  before_value();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  before_value();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
  before_value();
  out_ += json(std::string(v)).dump();
  return *this;
}

JsonWriter& JsonWriter::null() {
  before_value();
  out_ += "null";
  return *this;
}

std::string JsonWriter::str() const { return out_ + '\n'; }

std::vector<double> parse_sample_csv(std::istream& in) {
  Table t = parse_table(in);
  if (t.columns.size() != 1) throw IoError("sample CSV must have exactly one column");
  return std::move(t.columns.front());
}

std::vector<double> read_sample_csv(const std::string& path) {
  auto in = open_input(path);
  return parse_sample_csv(in);
}

Distribution parse_piecewise_linear_csv(std::istream& in) {
  Table t = parse_table(in);
  if (t.columns.size() != 2) throw IoError("piecewise-linear CSV must have two columns (t, cdf)");
  return Distribution::piecewise_linear(std::move(t.columns[0]), std::move(t.columns[1]));
}

Distribution read_piecewise_linear_csv(const std::string& path) {
  auto in = open_input(path);
  return parse_piecewise_linear_csv(in);
}

ForecastDataset parse_dataset_csv(std::istream& in) {
  Table t = parse_table(in);
  std::vector<double> ys;
  std::vector<ForecastDataset::Source> sources;
  bool found = false;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (t.header[c] == "y") {
      if (found) throw IoError("dataset CSV has more than one 'y' column");
      ys = std::move(t.columns[c]);
      found = true;
    } else {
      if (t.header[c].empty()) throw IoError("dataset CSV has an unnamed column");
      sources.emplace_back(t.header[c], std::move(t.columns[c]));
    }
  }
  if (!found) throw IoError("dataset CSV needs a 'y' column");
  return ForecastDataset(std::move(ys), std::move(sources));
}

ForecastDataset read_dataset_csv(const std::string& path) {
  auto in = open_input(path);
  return parse_dataset_csv(in);
}

ConvexSpec parse_convex_spec(std::string_view text) {
  const json j = parse_object(text, "convex spec");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "quadratic") return ConvexSpec::quadratic();
  if (kind == "exp") return ConvexSpec::exponential(number_field(j, "lambda"));
  if (kind == "density")
    return ConvexSpec::piecewise_density(number_array(j, "grid"), number_array(j, "density"));
  if (kind == "points")
    return ConvexSpec::point_masses(number_array(j, "locations"), number_array(j, "masses"));
  if (kind == "extremes") return ConvexSpec::extremes(number_field(j, "lo"), number_field(j, "hi"));
  throw ArgumentError("convex spec: unknown kind '" + kind + "'");
}

ConvexSpec load_convex_spec(const std::string& json_or_path) {
  return parse_convex_spec(inline_or_file(json_or_path));
}

std::string convex_spec_to_json(const ConvexSpec& spec) {
  JsonWriter w;
  w.begin_object();
  std::visit(Overloaded{
                 [&](const QuadraticPhi&) { w.key("kind").value("quadratic"); },
                 [&](const ExponentialPhi& e) {
                   w.key("kind").value("exp").key("lambda").value(e.lambda);
                 },
                 [&](const PiecewiseDensityPhi& p) {
                   w.key("kind").value("density").key("grid");
                   write_number_array(w, p.grid);
                   w.key("density");
                   write_number_array(w, p.density);
                 },
                 [&](const PointMassesPhi& p) {
                   w.key("kind").value("points").key("locations");
                   write_number_array(w, p.locations);
                   w.key("masses");
                   write_number_array(w, p.masses);
                 },
                 [&](const ExtremesPhi& e) {
                   w.key("kind").value("extremes").key("lo").value(e.lo_knee).key("hi").value(
                       e.hi_knee);
                 },
             },
             spec.variant());
  w.end_object();
  return w.str();
}

Distribution parse_distribution(std::string_view text) {
  const json j = parse_object(text, "distribution");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "normal") return Distribution::normal(number_field(j, "mean"), number_field(j, "sd"));
  if (kind == "skew_normal")
    return Distribution::skew_normal(number_field(j, "location"), number_field(j, "scale"),
                                     number_field(j, "shape"));
  if (kind == "exponential") return Distribution::exponential(number_field(j, "rate"));
  if (kind == "beta") return Distribution::beta(number_field(j, "r"), number_field(j, "s"));
  if (kind == "empirical") {
    std::vector<double> weights;
    if (j.contains("weights")) weights = number_array(j, "weights");
    return Distribution::empirical(number_array(j, "values"), std::move(weights));
  }
  throw ArgumentError("distribution: unknown kind '" + kind + "'");
}

Distribution load_distribution(const std::string& json_or_path) {
  return parse_distribution(inline_or_file(json_or_path));
}

std::string murphy_to_csv(const MurphyCurve& curve) {
  std::string out = "theta,side";
  for (const auto& s : curve.sources) out += ',' + s;
  out += '\n';
  for (std::size_t j = 0; j < curve.grid.size(); ++j) {
    out += format_double(curve.grid[j].theta);
    out += curve.grid[j].side == ThetaSide::kAt ? ",at" : ",left";
    for (const auto& col : curve.scores) out += ',' + format_double(col[j]);
    out += '\n';
  }
  return out;
}

MurphyCurve parse_murphy_csv(std::istream& in) {
  MurphyCurve curve;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line) && trim(line).empty()) ++line_no;
  ++line_no;
  const auto header = split_row(line);
  if (header.size() < 2 || header[0] != "theta" || header[1] != "side")
    throw IoError("Murphy CSV header must start with theta,side");
  curve.sources.assign(header.begin() + 2, header.end());
  curve.scores.resize(curve.sources.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != header.size())
      throw IoError("line " + std::to_string(line_no) + ": wrong number of fields");
    ThetaSide side;
    if (cells[1] == "at") {
      side = ThetaSide::kAt;
    } else if (cells[1] == "left") {
      side = ThetaSide::kLeftLimit;
    } else {
      throw IoError("line " + std::to_string(line_no) + ": side must be 'at' or 'left'");
    }
    curve.grid.push_back({parse_number(cells[0], line_no), side});
    for (std::size_t s = 0; s < curve.sources.size(); ++s)
      curve.scores[s].push_back(parse_number(cells[s + 2], line_no));
  }
  return curve;
}

std::string interval_to_json(const IntervalResult& r) {
  JsonWriter w;
  w.begin_object().key("lo").value(r.lo).key("hi").value(r.hi).key("midpoint").value(r.midpoint());
  w.end_object();
  return w.str();
}

std::string dm_test_to_json(const DmTestResult& r, const std::string& source_a,
                            const std::string& source_b) {
  JsonWriter w;
  w.begin_object()
      .key("source_a").value(source_a)
      .key("source_b").value(source_b)
      .key("n").value(r.n)
      .key("mean_a").value(r.mean_a)
      .key("mean_b").value(r.mean_b)
      .key("t_n").value(r.t_n)
      .key("p_value").value(r.p_value)
      .key("sidedness").value(r.sidedness == Sidedness::kOne ? "one" : "two")
      .key("preferred").value(r.preferred)
      .end_object();
  return w.str();
}

std::string switching_report_to_json(const SwitchingReport& r) {
  JsonWriter w;
  w.begin_object()
      .key("reps").value(r.reps)
      .key("days").value(r.days)
      .key("seed").value(static_cast<long long>(r.seed))
      .key("significance").value(r.significance)
      .key("cells")
      .begin_array();
  for (const auto& c : r.cells) {
    w.begin_object()
        .key("competitor").value(c.competitor)
        .key("rule_cap").value(c.rule_cap)
        .key("observation").value(c.observation == Observation::kClean ? "clean" : "contaminated")
        .key("rejections").value(c.rejections)
        .key("degenerate").value(c.degenerate)
        .key("probability").value(c.probability)
        .key("std_error").value(c.std_error)
        .end_object();
  }
  w.end_array().end_object();
  return w.str();
}

std::string switching_report_to_csv(const SwitchingReport& r) {
  std::string out = "competitor";
  for (double a : r.rule_caps) out += ",a" + cap_label(a) + "_clean,a" + cap_label(a) + "_contaminated";
  out += '\n';
  for (const auto& name : r.competitors) {
    out += name;
    for (double a : r.rule_caps) {
      out += ',' + format_double(r.cell(name, a, Observation::kClean).probability);
      out += ',' + format_double(r.cell(name, a, Observation::kContaminated).probability);
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path + "'");
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("cannot write '" + path + "'");
}

}  // namespace hv
