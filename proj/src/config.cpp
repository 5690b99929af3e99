#include "ptscatter/app.hpp"
#include "ptscatter/core.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>

namespace ptscatter::app {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("'" + key + "' expects a number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(value))
    throw InvalidArgument("'" + key + "' expects a finite number, got '" + text + "'");
  return value;
}

int parse_count(const std::string& key, const std::string& text) {
  const double v = parse_real(key, text);
  if (v != std::floor(v) || v < 1 || v > 1e7)
    throw InvalidArgument("'" + key + "' expects a positive integer, got '" + text + "'");
  return static_cast<int>(v);
}

Spacing parse_spacing(const std::string& key, const std::string& text) {
  if (text == "linear") return Spacing::linear;
  if (text == "log") return Spacing::log;
  throw InvalidArgument("'" + key + "' must be 'linear' or 'log', got '" + text + "'");
}

Format parse_format(const std::string& key, const std::string& text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  if (text == "text") return Format::text;
  throw InvalidArgument("'" + key + "' must be csv, json or text, got '" + text + "'");
}

using Setter = std::function<void(SweepConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"v", [](SweepConfig& c, auto& k, auto& s) { c.v = parse_real(k, s); }},
      {"v1", [](SweepConfig& c, auto& k, auto& s) { c.v1 = parse_real(k, s); }},
      {"v2", [](SweepConfig& c, auto& k, auto& s) { c.v2 = parse_real(k, s); }},
      {"eps", [](SweepConfig& c, auto& k, auto& s) { c.eps = parse_real(k, s); }},
      {"length", [](SweepConfig& c, auto& k, auto& s) { c.total_length = parse_real(k, s); }},
      {"k", [](SweepConfig& c, auto& k, auto& s) { c.k = parse_real(k, s); }},
      {"b", [](SweepConfig& c, auto& k, auto& s) { c.b = parse_real(k, s); }},
      {"tolerance", [](SweepConfig& c, auto& k, auto& s) { c.tolerance = parse_real(k, s); }},
      {"n-min", [](SweepConfig& c, auto& k, auto& s) { c.n_range.min = parse_real(k, s); }},
      {"n-max", [](SweepConfig& c, auto& k, auto& s) { c.n_range.max = parse_real(k, s); }},
      {"n-count", [](SweepConfig& c, auto& k, auto& s) { c.n_range.count = parse_count(k, s); }},
      {"n-spacing", [](SweepConfig& c, auto& k, auto& s) { c.n_range.spacing = parse_spacing(k, s); }},
      {"k-min", [](SweepConfig& c, auto& k, auto& s) { c.k_range.min = parse_real(k, s); }},
      {"k-max", [](SweepConfig& c, auto& k, auto& s) { c.k_range.max = parse_real(k, s); }},
      {"k-count", [](SweepConfig& c, auto& k, auto& s) { c.k_range.count = parse_count(k, s); }},
      {"k-spacing", [](SweepConfig& c, auto& k, auto& s) { c.k_range.spacing = parse_spacing(k, s); }},
      {"format", [](SweepConfig& c, auto& k, auto& s) { c.format = parse_format(k, s); }},
      {"output", [](SweepConfig& c, auto&, auto& s) { c.output_path = s; }},
  };
  return table;
}

} // namespace

KeyValues parse_key_value(std::istream& in) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw InvalidArgument("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  return parse_key_value(in);
}

void apply_key_values(const KeyValues& kv, SweepConfig& cfg) {
  const auto& table = setters();
  for (const auto& [key, value] : kv) {
    const auto it = table.find(key);
    if (it == table.end()) throw InvalidArgument("unknown config key '" + key + "'");
    it->second(cfg, key, value);
  }
}

SweepConfig default_config(const std::string& command) {
  SweepConfig c;
  if (command == "cell") {
    c.k = 1;
    c.v = 40;
    c.b = 0.05;
    c.format = Format::text;
  } else if (command == "converge") {
    c.k = 5;
    c.n_range = {100, 100000, 16, Spacing::log};
  } else if (command == "general") {
    c.k = 3;
    c.n_range = {128, 2048, 5, Spacing::log};
  }
  return c;
}

void apply_fig3_preset(SweepConfig& cfg) {
  cfg.v = 40;
  cfg.total_length = 1;
  cfg.n_range = {500, 2000, 151, Spacing::linear};
  cfg.k_range = {1, 10, 181, Spacing::linear};
}

void validate_range(const Range& r, const std::string& what) {
  if (r.count < 1) throw InvalidArgument(what + " range needs at least one point");
  if (!(r.min <= r.max)) throw InvalidArgument(what + " range needs min <= max");
  if (r.spacing == Spacing::log && !(r.min > 0)) throw InvalidArgument(what + " log range needs min > 0");
  if (r.count == 1 && r.min != r.max) throw InvalidArgument(what + " range with one point needs min == max");
}

std::vector<double> real_grid(const Range& r) {
  validate_range(r, "grid");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(r.count));
  for (int i = 0; i < r.count; ++i) {
    const double f = r.count == 1 ? 0.0 : double(i) / double(r.count - 1);
    if (r.spacing == Spacing::linear)
      out.push_back(i == r.count - 1 ? r.max : r.min + f * (r.max - r.min));
    else
      out.push_back(i == r.count - 1 ? r.max : std::exp(std::log(r.min) + f * (std::log(r.max) - std::log(r.min))));
  }
  return out;
}

std::vector<std::int64_t> integer_grid(const Range& r) {
  validate_range(r, "N");
  if (!(r.min >= 1)) throw InvalidArgument("N range needs min >= 1");
  std::vector<std::int64_t> out;
  for (double v : real_grid(r)) {
    const auto n = static_cast<std::int64_t>(std::llround(v));
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  return out;
}

} // namespace ptscatter::app
