#pragma once

#include <string>

#include "bundle.hpp"
#include "config.hpp"
#include "json.hpp"
#include "mollow/fitting.hpp"

namespace mollow::cli {

/// Executes one configuration and writes its output bundle, manifest last.
Bundle run(const RunConfig& config);

/// Metrics document shared by the spectrum, fit and report modes. All
/// frequencies are in Hz, densities per Hz.
nlohmann::json metrics_json(const TripletMetrics& m);

/// Markdown table of reference values against the computed metrics.
std::string comparison_table(const TripletMetrics& m, const SystemParams& p, double mean_photons);

/// Error document written on failure: {"error": {"kind", "message"}}.
nlohmann::json error_json(const std::string& kind, const std::string& message);

}  // namespace mollow::cli
