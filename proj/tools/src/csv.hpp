#pragma once

#include <map>
#include <string>

#include "mollow/spectrum.hpp"

namespace mollow::cli {

/// Spectrum file: `# key=value` header lines, then the column header
/// `frequency_hz,psd_per_hz` and one row per grid point. The elastic
/// component is carried in the header as coherent_weight.
struct SpectrumCsv {
  std::map<std::string, std::string> header;
  FrequencyDensityTrace data;
};

/// Header entries describing `p` in Hz plus the coherent weight and drive frequency.
std::map<std::string, std::string> spectrum_header(const SystemParams& p, const FrequencyDensityTrace& f);

std::string write_spectrum_csv(const SpectrumCsv& csv);
SpectrumCsv read_spectrum_csv_text(const std::string& text);
SpectrumCsv read_spectrum_csv(const std::string& path);

/// System parameters recovered from the header; absent keys fall back to
/// the device defaults.
SystemParams params_from_header(const std::map<std::string, std::string>& header);

/// Angular-frequency trace rebuilt from the file contents.
SpectrumTrace trace_from_csv(const SpectrumCsv& csv);

}  // namespace mollow::cli
