#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "run.hpp"

namespace {

using namespace mollow::cli;

int default_workers() {
  const char* env = std::getenv("MOLLOW_CAVITY_WORKERS");
  if (!env) return 1;
  const auto v = parse_double(env);
  if (!v || *v < 1.0 || *v != static_cast<int>(*v)) {
    throw ConfigError(std::string("MOLLOW_CAVITY_WORKERS must be a positive integer, got '") + env + "'");
  }
  return static_cast<int>(*v);
}

int fail(const std::string& kind, const std::string& message, const std::optional<std::string>& out_dir, int code) {
  const auto doc = error_json(kind, message).dump(2);
  std::cerr << doc << "\n";
  if (out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*out_dir, ec);
    std::ofstream(std::filesystem::path(*out_dir) / "error.json") << doc << "\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven atom-cavity emission spectra: simulation, closed forms and peak fits"};
  std::string config_path, manifest_path, mode, out, preset, method, rbw;
  std::vector<double> powers;
  int workers = 0;
  app.add_option("--config", config_path, "TOML-style configuration file")->check(CLI::ExistingFile);
  app.add_option("--from-manifest", manifest_path, "rerun the configuration stored in a manifest.json")
      ->check(CLI::ExistingFile)
      ->excludes("--config");
  app.add_option("--mode", mode, "spectrum, sweep, analytic, mollow, fit or report");
  app.add_option("--out", out, "output directory");
  app.add_option("--power-dbm", powers, "drive power(s) in dBm; replaces the configured list")->delimiter(',');
  app.add_option("--preset", preset, "fig3a, fig3c, fig4b or mollow");
  app.add_option("--method", method, "spectrum method")->check(CLI::IsMember({"fft", "resolvent"}));
  app.add_option("--rbw", rbw, "resolution bandwidth with unit, e.g. '1 MHz'");
  app.add_option("--workers", workers, "worker budget (default: MOLLOW_CAVITY_WORKERS or 1)")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  std::optional<std::string> out_dir;
  if (!out.empty()) out_dir = out;
  try {
    RawConfig raw;
    if (!preset.empty()) raw = preset_entries(preset);
    if (!config_path.empty()) raw = merge(raw, parse_config_file(config_path));
    if (!manifest_path.empty()) raw = merge(raw, parse_config_text(config_text_from_manifest(manifest_path)));

    RawConfig flags;
    auto flag = [&](const std::string& key, const std::string& value, const std::string& name) {
      flags[key] = Entry{value, "flag --" + name};
    };
    if (!mode.empty()) flag("mode", mode, "mode");
    if (!out.empty()) flag("output.dir", "\"" + out + "\"", "out");
    if (!method.empty()) flag("analysis.method", method, "method");
    if (!rbw.empty()) flag("analysis.rbw", rbw, "rbw");
    if (workers > 0) flag("analysis.workers", std::to_string(workers), "workers");
    if (!powers.empty()) {
      std::string list = "[";
      for (std::size_t i = 0; i < powers.size(); ++i) list += (i ? ", " : "") + format_double(powers[i]);
      flag("drive.power_dbm", list + "]", "power-dbm");
    }
    raw = merge(raw, flags);

    const RunConfig config = resolve(raw, default_workers());
    out_dir = config.out_dir;
    const Bundle bundle = run(config);
    for (const auto& w : bundle.warnings()) std::cerr << "warning: " << w << "\n";
    std::cout << "wrote " << bundle.files().size() + 1 << " files to " << bundle.dir().string() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    return fail(e.kind(), e.what(), out_dir, 2);
  } catch (const mollow::Error& e) {
    return fail(e.kind(), e.what(), out_dir, 1);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), out_dir, 1);
  }
}
