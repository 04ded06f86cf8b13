#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mollow::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

enum class Kind { frequency, integer, real, real_list, text, mode, method };

const std::map<std::string, Kind>& schema() {
  static const std::map<std::string, Kind> keys{
      {"mode", Kind::mode},
      {"preset", Kind::text},
      {"system.omega_r", Kind::frequency},
      {"system.omega_a", Kind::frequency},
      {"system.omega_drive", Kind::frequency},
      {"system.g", Kind::frequency},
      {"system.kappa", Kind::frequency},
      {"system.gamma1", Kind::frequency},
      {"system.rabi_omega", Kind::frequency},
      {"system.n_max", Kind::integer},
      {"drive.power_dbm", Kind::real_list},
      {"drive.mean_n", Kind::real},
      {"grid.half_span", Kind::frequency},
      {"grid.points", Kind::integer},
      {"grid.center", Kind::frequency},
      {"analysis.rbw", Kind::frequency},
      {"analysis.method", Kind::method},
      {"analysis.workers", Kind::integer},
      {"analysis.n_max_cap", Kind::integer},
      {"output.dir", Kind::text},
      {"input.csv", Kind::text},
  };
  return keys;
}

// Device values in Hz.
const std::map<std::string, double>& default_frequencies() {
  static const std::map<std::string, double> f{
      {"system.omega_r", 8.778e9}, {"system.omega_a", 8.778e9}, {"system.omega_drive", 8.778e9},
      {"system.g", 12e6},          {"system.kappa", 5.2e6},     {"system.gamma1", 4.8e6},
      {"system.rabi_omega", 25.2e6}, {"grid.half_span", 250e6}, {"analysis.rbw", 1e6},
  };
  return f;
}

[[noreturn]] void fail(const std::string& key, const Entry& e, const std::string& what) {
  throw ConfigError("key '" + key + "' (" + e.origin + "): " + what);
}

std::string unquote(const std::string& key, const Entry& e) {
  const std::string v = trim(e.value);
  if (v.size() >= 2 && v.front() == '"') {
    if (v.back() != '"') fail(key, e, "unterminated string");
    return v.substr(1, v.size() - 2);
  }
  return v;
}

double parse_frequency(const std::string& key, const Entry& e) {
  const std::string v = unquote(key, e);
  std::size_t split = v.size();
  while (split > 0 && std::isalpha(static_cast<unsigned char>(v[split - 1]))) --split;
  const std::string number = trim(v.substr(0, split));
  const std::string unit = v.substr(split);
  static const std::map<std::string, double> units{{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}};
  if (unit.empty()) fail(key, e, "missing unit suffix (Hz, kHz, MHz or GHz) in '" + v + "'");
  const auto u = units.find(unit);
  if (u == units.end()) fail(key, e, "bad unit '" + unit + "' (expected Hz, kHz, MHz or GHz)");
  const auto x = parse_double(number);
  if (!x || !std::isfinite(*x)) fail(key, e, "not a number: '" + number + "'");
  return *x * u->second;
}

int parse_integer(const std::string& key, const Entry& e) {
  const std::string v = unquote(key, e);
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) fail(key, e, "not an integer: '" + v + "'");
  return out;
}

double parse_real(const std::string& key, const Entry& e, const std::string& text) {
  const auto x = parse_double(trim(text));
  if (!x) fail(key, e, "not a number: '" + trim(text) + "'");
  return *x;
}

std::vector<double> parse_real_list(const std::string& key, const Entry& e) {
  std::string v = unquote(key, e);
  std::vector<double> out;
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') fail(key, e, "unterminated list");
    v = v.substr(1, v.size() - 2);
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (trim(item).empty()) continue;
      out.push_back(parse_real(key, e, item));
    }
  } else {
    out.push_back(parse_real(key, e, v));
  }
  return out;
}

Mode parse_mode(const std::string& key, const Entry& e) {
  const std::string v = unquote(key, e);
  static const std::map<std::string, Mode> modes{{"spectrum", Mode::spectrum}, {"sweep", Mode::sweep},
                                                 {"analytic", Mode::analytic}, {"mollow", Mode::mollow},
                                                 {"fit", Mode::fit},           {"report", Mode::report}};
  const auto it = modes.find(v);
  if (it == modes.end()) fail(key, e, "unknown mode '" + v + "'");
  return it->second;
}

SpectrumMethod parse_method(const std::string& key, const Entry& e) {
  const std::string v = unquote(key, e);
  if (v == "fft") return SpectrumMethod::time_domain;
  if (v == "resolvent") return SpectrumMethod::resolvent;
  fail(key, e, "unknown method '" + v + "' (expected fft or resolvent)");
}

}  // namespace

const char* to_string(Mode m) {
  switch (m) {
    case Mode::spectrum: return "spectrum";
    case Mode::sweep: return "sweep";
    case Mode::analytic: return "analytic";
    case Mode::mollow: return "mollow";
    case Mode::fit: return "fit";
    case Mode::report: return "report";
  }
  return "?";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* first = s.data();
  if (*first == '+') ++first;
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return out;
}

RawConfig parse_config_text(const std::string& text) {
  RawConfig raw;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    const std::string where = "line " + std::to_string(number);
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(where + ": malformed section header '" + body + "'");
      section = trim(body.substr(1, body.size() - 2));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value', got '" + body + "'");
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": empty key");
    const std::string path = section.empty() ? key : section + "." + key;
    if (raw.count(path)) throw ConfigError("key '" + path + "' (" + where + "): duplicate key");
    raw[path] = Entry{trim(body.substr(eq + 1)), where};
  }
  return raw;
}

RawConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse_config_text(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

RawConfig preset_entries(const std::string& name) {
  const std::string origin = "preset " + name;
  RawConfig r;
  auto set = [&](const std::string& k, const std::string& v) { r[k] = Entry{v, origin}; };
  auto power_range = [](double lo, double hi) {
    std::string s = "[";
    for (double p = lo; p <= hi + 1e-9; p += 1.0) s += (s.size() > 1 ? ", " : "") + format_double(p);
    return s + "]";
  };
  set("preset", "\"" + name + "\"");
  if (name == "fig3c") {
    set("mode", "spectrum");
    set("analysis.method", "fft");
  } else if (name == "fig3a") {
    set("mode", "sweep");
    set("drive.power_dbm", power_range(-123.5, -103.5));
    set("analysis.method", "fft");
  } else if (name == "fig4b") {
    set("mode", "sweep");
    set("drive.power_dbm", power_range(-116.5, -109.5));
    set("analysis.method", "fft");
  } else if (name == "mollow") {
    set("mode", "mollow");
    set("system.gamma1", "4.8 MHz");
    set("system.rabi_omega", "25 MHz");
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected fig3a, fig3c, fig4b or mollow)");
  }
  return r;
}

RawConfig merge(const RawConfig& base, const RawConfig& over) {
  RawConfig out = base;
  for (const auto& [k, v] : over) out[k] = v;
  return out;
}

RunConfig resolve(const RawConfig& raw, int default_workers) {
  const auto& keys = schema();
  for (const auto& [k, e] : raw) {
    if (!keys.count(k)) fail(k, e, "unknown key");
  }
  auto find = [&](const std::string& k) -> const Entry* {
    const auto it = raw.find(k);
    return it == raw.end() ? nullptr : &it->second;
  };

  RunConfig c;
  const Entry* mode = find("mode");
  if (!mode) throw ConfigError("missing required field 'mode'");
  c.mode = parse_mode("mode", *mode);
  if (const Entry* e = find("preset")) c.preset = unquote("preset", *e);

  c.frequencies_hz = default_frequencies();
  for (const auto& [k, kind] : keys) {
    if (kind != Kind::frequency) continue;
    if (const Entry* e = find(k)) c.frequencies_hz[k] = parse_frequency(k, *e);
  }
  auto rad = [&](const std::string& k) { return angular(c.frequencies_hz.at(k)); };
  c.params.omega_r = rad("system.omega_r");
  c.params.omega_a = rad("system.omega_a");
  c.params.omega_drive = rad("system.omega_drive");
  c.params.g = rad("system.g");
  c.params.kappa = rad("system.kappa");
  c.params.gamma1 = rad("system.gamma1");
  c.params.rabi_omega = rad("system.rabi_omega");
  c.params.n_max = 64;
  if (const Entry* e = find("system.n_max")) c.params.n_max = parse_integer("system.n_max", *e);
  if (c.params.n_max < 2) fail("system.n_max", *find("system.n_max"), "must be >= 2");
  if (c.frequencies_hz.count("grid.center")) c.grid_center = rad("grid.center");
  c.grid_half_span = rad("grid.half_span");
  if (!(c.grid_half_span > 0.0)) throw ConfigError("key 'grid.half_span': must be > 0");
  c.rbw = rad("analysis.rbw");
  if (!(c.rbw > 0.0)) throw ConfigError("key 'analysis.rbw': must be > 0");

  c.grid_points = kDefaultGridPoints;
  if (const Entry* e = find("grid.points")) {
    c.grid_points = parse_integer("grid.points", *e);
    if (c.grid_points < 5) fail("grid.points", *e, "need at least 5 points");
  }
  if (const Entry* e = find("drive.power_dbm")) c.powers_dbm = parse_real_list("drive.power_dbm", *e);
  if (const Entry* e = find("drive.mean_n")) {
    c.mean_n = parse_real("drive.mean_n", *e, unquote("drive.mean_n", *e));
    if (!(*c.mean_n > 0.0)) fail("drive.mean_n", *e, "must be > 0");
  }
  c.method = c.mode == Mode::sweep ? SpectrumMethod::resolvent : SpectrumMethod::time_domain;
  if (const Entry* e = find("analysis.method")) c.method = parse_method("analysis.method", *e);
  c.workers = default_workers;
  if (const Entry* e = find("analysis.workers")) {
    c.workers = parse_integer("analysis.workers", *e);
    if (c.workers < 1) fail("analysis.workers", *e, "must be >= 1");
  }
  if (const Entry* e = find("analysis.n_max_cap")) c.n_max_cap = parse_integer("analysis.n_max_cap", *e);
  c.out_dir = "out";
  if (const Entry* e = find("output.dir")) c.out_dir = unquote("output.dir", *e);
  if (const Entry* e = find("input.csv")) c.input = unquote("input.csv", *e);

  switch (c.mode) {
    case Mode::sweep:
      if (c.powers_dbm.empty()) throw ConfigError("missing required field 'drive.power_dbm' for mode sweep");
      break;
    case Mode::spectrum:
      if (c.powers_dbm.size() > 1) {
        fail("drive.power_dbm", *find("drive.power_dbm"), "mode spectrum takes a single power");
      }
      break;
    case Mode::fit:
    case Mode::report:
      if (c.input.empty()) throw ConfigError("missing required field 'input.csv' for mode " + std::string(to_string(c.mode)));
      break;
    default:
      break;
  }
  return c;
}

std::vector<double> RunConfig::grid() const {
  return frequency_grid(grid_center.value_or(params.omega_a), grid_half_span, grid_points);
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream o;
  auto hz = [&](const std::string& k) { return format_double(c.frequencies_hz.at(k)) + " Hz"; };
  o << "mode = " << to_string(c.mode) << "\n";
  if (c.preset) o << "preset = \"" << *c.preset << "\"\n";
  o << "\n[system]\n";
  for (const char* k : {"omega_r", "omega_a", "omega_drive", "g", "kappa", "gamma1", "rabi_omega"}) {
    o << k << " = " << hz(std::string("system.") + k) << "\n";
  }
  o << "n_max = " << c.params.n_max << "\n";
  o << "\n[drive]\n";
  if (!c.powers_dbm.empty()) {
    o << "power_dbm = [";
    for (std::size_t i = 0; i < c.powers_dbm.size(); ++i) o << (i ? ", " : "") << format_double(c.powers_dbm[i]);
    o << "]\n";
  }
  if (c.mean_n) o << "mean_n = " << format_double(*c.mean_n) << "\n";
  o << "\n[grid]\n";
  o << "half_span = " << hz("grid.half_span") << "\n";
  o << "points = " << c.grid_points << "\n";
  if (c.frequencies_hz.count("grid.center")) o << "center = " << hz("grid.center") << "\n";
  o << "\n[analysis]\n";
  o << "rbw = " << hz("analysis.rbw") << "\n";
  o << "method = " << (c.method == SpectrumMethod::time_domain ? "fft" : "resolvent") << "\n";
  o << "workers = " << c.workers << "\n";
  o << "n_max_cap = " << c.n_max_cap << "\n";
  o << "\n[output]\n";
  o << "dir = \"" << c.out_dir << "\"\n";
  if (!c.input.empty()) o << "\n[input]\ncsv = \"" << c.input << "\"\n";
  return o.str();
}

}  // namespace mollow::cli
