#include "csv.hpp"

#include <fstream>
#include <sstream>

#include "config.hpp"

namespace mollow::cli {

namespace {

constexpr const char* kColumns = "frequency_hz,psd_per_hz";

struct HeaderKey {
  const char* name;
  double SystemParams::*field;
};

constexpr HeaderKey kFrequencyKeys[] = {
    {"omega_r_hz", &SystemParams::omega_r},     {"omega_a_hz", &SystemParams::omega_a},
    {"omega_drive_hz", &SystemParams::omega_drive}, {"g_hz", &SystemParams::g},
    {"kappa_hz", &SystemParams::kappa},         {"gamma1_hz", &SystemParams::gamma1},
    {"rabi_omega_hz", &SystemParams::rabi_omega},
};

double header_number(const std::map<std::string, std::string>& h, const std::string& key) {
  const auto it = h.find(key);
  if (it == h.end()) throw ConfigError("spectrum CSV: missing header key '" + key + "'");
  const auto v = parse_double(it->second);
  if (!v) throw ConfigError("spectrum CSV: header key '" + key + "' is not a number: '" + it->second + "'");
  return *v;
}

}  // namespace

std::map<std::string, std::string> spectrum_header(const SystemParams& p, const FrequencyDensityTrace& f) {
  std::map<std::string, std::string> h;
  for (const auto& k : kFrequencyKeys) h[k.name] = format_double(ordinary(p.*k.field));
  h["n_max"] = std::to_string(p.n_max);
  h["coherent_weight"] = format_double(f.coherent_weight);
  h["drive_frequency_hz"] = format_double(f.drive_frequency_hz);
  h["frequency_convention"] = "omega=2*pi*f";
  h["psd_units"] = "hbar*omega_a per Hz";
  return h;
}

std::string write_spectrum_csv(const SpectrumCsv& csv) {
  std::ostringstream o;
  for (const auto& [k, v] : csv.header) o << "# " << k << "=" << v << "\n";
  o << kColumns << "\n";
  for (std::size_t i = 0; i < csv.data.frequency_hz.size(); ++i) {
    o << format_double(csv.data.frequency_hz[i]) << "," << format_double(csv.data.psd_per_hz[i]) << "\n";
  }
  return o.str();
}

SpectrumCsv read_spectrum_csv_text(const std::string& text) {
  SpectrumCsv csv;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  bool columns_seen = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "spectrum CSV line " + std::to_string(number);
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError(where + ": header line without '='");
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      csv.header[key] = line.substr(eq + 1);
      continue;
    }
    if (!columns_seen) {
      if (line != kColumns) throw ConfigError(where + ": expected column header '" + kColumns + "'");
      columns_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError(where + ": expected two columns");
    const auto f = parse_double(line.substr(0, comma));
    const auto s = parse_double(line.substr(comma + 1));
    if (!f || !s) throw ConfigError(where + ": malformed number");
    csv.data.frequency_hz.push_back(*f);
    csv.data.psd_per_hz.push_back(*s);
  }
  if (!columns_seen) throw ConfigError("spectrum CSV: no column header");
  csv.data.coherent_weight = csv.header.count("coherent_weight") ? header_number(csv.header, "coherent_weight") : 0.0;
  csv.data.drive_frequency_hz = header_number(csv.header, "drive_frequency_hz");
  return csv;
}

SpectrumCsv read_spectrum_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open spectrum CSV '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return read_spectrum_csv_text(ss.str());
}

SystemParams params_from_header(const std::map<std::string, std::string>& header) {
  SystemParams p = SystemParams::device_defaults();
  for (const auto& k : kFrequencyKeys) {
    if (header.count(k.name)) p.*k.field = angular(header_number(header, k.name));
  }
  if (header.count("n_max")) p.n_max = static_cast<int>(header_number(header, "n_max"));
  return p;
}

SpectrumTrace trace_from_csv(const SpectrumCsv& csv) {
  return from_frequency_density(csv.data, params_from_header(csv.header));
}

}  // namespace mollow::cli
