#pragma once

// Command-line front end. Everything the `ptscatter` binary does goes through
// run(), so the commands can be exercised in-process.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace ptscatter::app {

enum ExitCode : int {
  exit_ok = 0,
  exit_invalid_arguments = 1,
  exit_numerical_failure = 2,
  exit_not_converged = 3,
};

enum class Spacing { linear, log };
enum class Format { text, csv, json };

struct Range {
  double min = 1;
  double max = 1;
  int count = 1;
  Spacing spacing = Spacing::linear;
};

struct SweepConfig {
  double v = 40;
  double v1 = 7;
  double v2 = 40;
  double eps = 1;
  double total_length = 1;
  double k = 5;
  double b = 0.05;
  double tolerance = 1e-7;
  Range n_range{1, 1000, 10, Spacing::log};
  Range k_range{1, 10, 10, Spacing::linear};
  Format format = Format::csv;
  std::string output_path = "-";
};

using KeyValues = std::map<std::string, std::string>;

/// Flat `key = value` text: one pair per line, `#` starts a comment, blank
/// lines ignored. Keys are the long flag names without dashes.
KeyValues parse_key_value(std::istream& in);
KeyValues read_config_file(const std::string& path);

/// Applies each pair to `cfg`; throws InvalidArgument on unknown keys or
/// unparsable values.
void apply_key_values(const KeyValues& kv, SweepConfig& cfg);

SweepConfig default_config(const std::string& command);
/// V = 40, L = 1, N = 500..2000 (151 points), k = 1..10 (181 points).
void apply_fig3_preset(SweepConfig& cfg);

/// Validates a range: count >= 1, min <= max, (log) min > 0.
void validate_range(const Range& r, const std::string& what);
std::vector<std::int64_t> integer_grid(const Range& r);
std::vector<double> real_grid(const Range& r);

/// Entry point. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ptscatter::app
