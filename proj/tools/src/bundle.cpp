#include "bundle.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <Eigen/Core>
#include "json.hpp"
#include <openssl/evp.h>

#include "config.hpp"

namespace mollow::cli {

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

Bundle::Bundle(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

void Bundle::add(const std::string& name, const std::string& content, std::string description,
                 std::vector<Column> columns) {
  const auto path = dir_ / name;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) throw Error("cannot write '" + path.string() + "'");
  files_.push_back({name, sha256_hex(content), content.size(), std::move(description), std::move(columns)});
}

void Bundle::write_manifest(const std::string& mode, const std::string& config_text) {
  using nlohmann::json;
  json files = json::array();
  for (const auto& r : files_) {
    json cols = json::object();
    for (const auto& c : r.columns) cols[c.name] = c.doc;
    files.push_back({{"name", r.name}, {"sha256", r.sha256}, {"bytes", r.bytes}, {"description", r.description},
                     {"columns", cols}});
  }
  json m = {
      {"format", "mollow-cavity manifest 1"},
      {"mode", mode},
      {"config_text", config_text},
      {"versions",
       {{"mollow-cavity", "0.1.0"},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
        {"compiler", __VERSION__}}},
      {"conventions",
       {{"frequency", "omega = 2*pi*f; file axes are ordinary frequency in Hz, angular frequency is internal only"},
        {"spectral_density", "S(f) = 2*pi*S(omega), in units of hbar*omega_a per Hz"},
        {"coherent_component", "elastic delta at the drive frequency, integrated weight in the CSV header key coherent_weight (hbar*omega_a per s)"},
        {"dissipator", "D(A) = 2 A rho A^dag - A^dag A rho - rho A^dag A with rates gamma1/2 and kappa/2"},
        {"gaussian_width", "sideband width w of height*exp(-2((f-c)/w)^2), i.e. the 1/e^2 half-width"},
        {"lorentzian_width", "full width at half maximum"}}},
      {"files", files},
      {"warnings", warnings_},
  };
  std::ofstream f(dir_ / "manifest.json");
  f << m.dump(2) << "\n";
  if (!f) throw Error("cannot write manifest.json");
}

std::string config_text_from_manifest(const std::string& manifest_path) {
  std::ifstream f(manifest_path);
  if (!f) throw ConfigError("cannot open manifest '" + manifest_path + "'");
  try {
    const auto m = nlohmann::json::parse(f);
    return m.at("config_text").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest '" + manifest_path + "': " + e.what());
  }
}

}  // namespace mollow::cli
