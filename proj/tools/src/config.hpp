#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mollow/errors.hpp"
#include "mollow/spectrum.hpp"
#include "mollow/system_params.hpp"

namespace mollow::cli {

/// Malformed configuration; the message names the key path and its origin.
class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config-error"; }
};

enum class Mode { spectrum, sweep, analytic, mollow, fit, report };

const char* to_string(Mode m);

/// One `key = value` assignment and where it came from.
struct Entry {
  std::string value;
  std::string origin;  // "line 12", "flag --mode", "preset fig3c"
};

/// Flat view of a configuration: section-qualified keys such as "system.g".
using RawConfig = std::map<std::string, Entry>;

/// Parses TOML-style text: `[section]` headers, `key = value` lines, `#`
/// comments, quoted strings and `[a, b]` lists.
RawConfig parse_config_text(const std::string& text);
RawConfig parse_config_file(const std::string& path);

/// Entries of a named preset (fig3a, fig3c, fig4b, mollow).
RawConfig preset_entries(const std::string& name);

/// Later layers win.
RawConfig merge(const RawConfig& base, const RawConfig& over);

struct RunConfig {
  Mode mode = Mode::spectrum;
  std::optional<std::string> preset;
  /// Frequencies exactly as given, in Hz, keyed like "system.g".
  std::map<std::string, double> frequencies_hz;
  SystemParams params;  // rad/s, derived from frequencies_hz
  std::vector<double> powers_dbm;
  std::optional<double> mean_n;
  double grid_half_span = 0.0;  // rad/s
  int grid_points = 0;
  std::optional<double> grid_center;  // rad/s
  double rbw = 0.0;  // rad/s
  SpectrumMethod method = SpectrumMethod::time_domain;
  int workers = 1;
  int n_max_cap = 128;
  std::string out_dir;
  std::string input;  // CSV for fit/report

  std::vector<double> grid() const;
};

/// Validates and converts. Frequencies need a unit suffix (Hz, kHz, MHz,
/// GHz) and become angular via omega = 2 pi f. `default_workers` fills
/// analysis.workers when absent.
RunConfig resolve(const RawConfig& raw, int default_workers = 1);

/// Canonical text of a resolved configuration; parsing it back yields an
/// identical RunConfig.
std::string to_config_text(const RunConfig& c);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);
/// Strict full-string parse; nullopt on any trailing garbage.
std::optional<double> parse_double(const std::string& s);

}  // namespace mollow::cli
