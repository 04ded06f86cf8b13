#include "run.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "csv.hpp"
#include "mollow/analytic.hpp"
#include "mollow/experiment.hpp"
#include "svg.hpp"

namespace mollow::cli {

using nlohmann::json;

namespace {

const std::vector<Column> kSpectrumColumns = {
    {"frequency_hz", "absolute emission frequency f in Hz (omega = 2*pi*f)"},
    {"psd_per_hz", "incoherent power spectral density S(f) = 2*pi*S(omega) in hbar*omega_a per Hz; the elastic "
                   "component is excluded and given by header key coherent_weight"},
};

constexpr const char* kColors[] = {"#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400", "#16a085", "#7f8c8d"};

std::string fixed(double v, int digits) {
  if (!std::isfinite(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

TripletOptions triplet_options(double rbw) {
  TripletOptions t;
  t.rbw = rbw;
  return t;
}

double mhz(double rad_per_s) { return ordinary(rad_per_s) / kMHz; }

json fit_json(const std::optional<FitResult>& f) {
  if (!f) return nullptr;
  return {{"model", f->model == PeakModel::lorentzian ? "lorentzian" : "gaussian"},
          {"center_hz", ordinary(f->center)},
          {"width_hz", ordinary(f->width)},
          {"height_per_hz", kTwoPi * f->height},
          {"baseline_per_hz", kTwoPi * f->baseline},
          {"residual_norm", f->residual_norm},
          {"converged", f->converged},
          {"iterations", f->iterations}};
}

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

SpectrumCsv make_csv(const SpectrumTrace& s, std::map<std::string, std::string> extra) {
  SpectrumCsv csv;
  csv.data = as_frequency_density(s);
  csv.header = spectrum_header(s.params, csv.data);
  for (auto& [k, v] : extra) csv.header[k] = std::move(v);
  return csv;
}

// Incoherent density plus the elastic part re-broadened at the RBW, per Hz.
std::vector<double> displayed_density(const SpectrumTrace& s, double rbw) {
  auto y = s.coherent_weight > 0.0 ? with_coherent_lorentzian(s, rbw) : s.psd;
  for (double& v : y) v *= kTwoPi;
  return y;
}

Plot spectrum_plot(const SpectrumTrace& s, const TripletMetrics& m, double rbw, const std::string& title) {
  Plot plot{.title = title,
            .x_label = "f - f_drive (MHz)",
            .y_label = "S(f) (hbar*omega_a / Hz)",
            .log_y = false,
            .series = {}};
  Series data{.label = "spectrum", .x = {}, .y = displayed_density(s, rbw)};
  for (double w : s.omega) data.x.push_back(mhz(w - s.omega_drive()));
  plot.series.push_back(std::move(data));
  int color = 1;
  for (const auto* fit : {&m.lower, &m.central, &m.upper}) {
    if (!*fit) continue;
    Series overlay{.label = "", .x = {}, .y = {}, .color = kColors[color], .dashed = true};
    const double reach = 3.0 * (*fit)->width;
    for (double w : s.omega) {
      if (std::abs(w - (*fit)->center) > reach) continue;
      overlay.x.push_back(mhz(w - s.omega_drive()));
      overlay.y.push_back(kTwoPi * peak_model(**fit, w));
    }
    overlay.label = (*fit)->model == PeakModel::lorentzian ? "Lorentzian fit" : "Gaussian fit";
    if (color > 1) overlay.label.clear();
    plot.series.push_back(std::move(overlay));
    color = 2;
  }
  return plot;
}

json spectrum_document(const TripletMetrics& m, const SpectrumTrace& s) {
  json j = metrics_json(m);
  j["coherent_weight"] = s.coherent_weight;
  j["total_power"] = total_power(s);
  j["failed_points"] = s.failed_points;
  return j;
}

// Metrics always come from the data as written to the CSV, so the fit mode
// reproduces them exactly.
TripletMetrics metrics_from_csv_text(const std::string& text, double rbw, SpectrumTrace* trace_out = nullptr) {
  const auto trace = trace_from_csv(read_spectrum_csv_text(text));
  auto m = triplet_metrics(trace, triplet_options(rbw));
  if (trace_out) *trace_out = trace;
  return m;
}

SystemParams drive_params(const RunConfig& c, Bundle& out, std::optional<DriveCalibration>* cal) {
  SystemParams p = c.params;
  if (!c.powers_dbm.empty()) {
    const auto k = calibrate(c.powers_dbm.front(), p);
    p.rabi_omega = k.rabi_omega;
    *cal = k;
  } else if (c.mean_n) {
    p.rabi_omega = rabi_from_mean_n(*c.mean_n, p.kappa_prime());
  }
  if (*cal && c.mean_n) out.warn("drive.mean_n ignored because drive.power_dbm is set");
  return p;
}

void run_spectrum(const RunConfig& c, Bundle& out) {
  std::optional<DriveCalibration> cal;
  const SystemParams p = drive_params(c, out, &cal);
  SimulationOptions opt{.spectrum = {.method = c.method, .workers = c.workers}, .grid = c.grid(), .triplet = triplet_options(c.rbw)};
  const PointResult r = simulate_point(p, opt);

  const SpectrumCsv csv = make_csv(r.spectrum, {{"mean_photons", format_double(r.mean_photons)},
                                                {"excited_population", format_double(r.excited_population)},
                                                {"method", c.method == SpectrumMethod::time_domain ? "fft" : "resolvent"}});
  const std::string text = write_spectrum_csv(csv);
  out.add("spectrum.csv", text, "steady-state emission spectrum", kSpectrumColumns);

  SpectrumTrace written;
  const TripletMetrics m = metrics_from_csv_text(text, c.rbw, &written);
  json doc = spectrum_document(m, written);
  doc["mean_photons"] = r.mean_photons;
  doc["excited_population"] = r.excited_population;
  doc["steady_state_residual"] = r.steady_state_residual;
  doc["rabi_omega_hz"] = ordinary(p.rabi_omega);
  doc["mean_n_from_rabi"] = mean_n_from_rabi(p.rabi_omega, p.kappa_prime());
  if (cal) doc["calibration"] = {{"power_dbm", cal->power_dbm}, {"power_watts", cal->power_watts}, {"mean_n", cal->mean_n}};
  out.add("metrics.json", doc.dump(2) + "\n", "triplet metrics of spectrum.csv");

  const double n_rabi = mean_n_from_rabi(p.rabi_omega, p.kappa_prime());
  if (n_rabi > 0.0 && std::abs(r.mean_photons - n_rabi) > 0.1 * n_rabi) {
    out.warn("steady-state photon number " + fixed(r.mean_photons, 2) + " differs from (Omega/kappa')^2 = " +
             fixed(n_rabi, 2) + " by more than 10%");
  }
  if (!r.spectrum.failed_points.empty()) {
    out.warn(std::to_string(r.spectrum.failed_points.size()) + " spectrum points failed and are NaN");
  }
  if (!m.has_sidebands()) out.warn("no separated sidebands detected");

  out.add("spectrum.svg", render_svg(spectrum_plot(r.spectrum, m, c.rbw, "Emission spectrum")),
          "spectrum with the elastic part re-broadened at the RBW, fits dashed");
  out.add("comparison.md", comparison_table(m, p, r.mean_photons), "reference values against computed metrics");
}

std::string power_tag(double dbm) {
  std::string s = format_double(dbm);
  for (char& ch : s) {
    if (ch == '-') ch = 'm';
  }
  return "power_" + s + "dBm";
}

void run_sweep_mode(const RunConfig& c, Bundle& out) {
  SweepOptions opt;
  opt.simulation.spectrum = {.method = c.method, .workers = 1};
  opt.simulation.triplet.rbw = c.rbw;
  opt.simulation.grid = c.grid();
  opt.workers = c.workers;
  opt.n_max_cap = c.n_max_cap;
  const SweepResult sweep = run_sweep(c.params, c.powers_dbm, opt);

  std::ostringstream table;
  table << "power_dbm,mean_n_calibrated,rabi_omega_hz,n_max,mean_photons,excited_population,central_center_hz,"
           "central_fwhm_hz,lower_center_hz,upper_center_hz,sideband_width_hz,sideband_offset_hz,"
           "mean_n_from_sidebands,height_ratio,integrated_ratio,status\n";
  auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  Plot spectra{.title = "Emission spectra versus drive power",
               .x_label = "f - f_drive (MHz)",
               .y_label = "S(f) (hbar*omega_a / Hz)",
               .log_y = true,
               .series = {}};
  Series offsets{.label = "fitted sideband offset", .x = {}, .y = {}, .color = kColors[0], .markers = true};
  Series expected{.label = "2g sqrt((Omega/kappa')^2)", .x = {}, .y = {}, .color = kColors[1], .dashed = true};

  for (std::size_t i = 0; i < sweep.points.size(); ++i) {
    const SweepPoint& pt = sweep.points[i];
    table << format_double(pt.calibration.power_dbm) << "," << format_double(pt.calibration.mean_n) << ","
          << format_double(ordinary(pt.calibration.rabi_omega)) << "," << pt.n_max << ",";
    expected.x.push_back(pt.calibration.power_dbm);
    expected.y.push_back(mhz(2.0 * c.params.g * std::sqrt(pt.calibration.mean_n)));
    if (!pt.result) {
      table << ",,,,,,,,,,," << pt.error_kind << "\n";
      out.warn("sweep point " + format_double(pt.calibration.power_dbm) + " dBm failed (" + pt.error_kind + "): " + pt.error);
      continue;
    }
    const PointResult& r = *pt.result;
    const std::string name = "spectra/" + power_tag(pt.calibration.power_dbm) + ".csv";
    const std::string text = write_spectrum_csv(make_csv(
        r.spectrum, {{"power_dbm", format_double(pt.calibration.power_dbm)}, {"mean_photons", format_double(r.mean_photons)}}));
    out.add(name, text, "emission spectrum at " + format_double(pt.calibration.power_dbm) + " dBm", kSpectrumColumns);

    const TripletMetrics& m = r.metrics;
    auto hz = [](const std::optional<FitResult>& f, double FitResult::*field) {
      return f ? std::optional<double>(ordinary((*f).*field)) : std::nullopt;
    };
    std::optional<double> width, offset_hz, n_side;
    if (m.has_sidebands()) width = ordinary(0.5 * (m.lower->width + m.upper->width));
    if (m.sideband_offset) {
      offset_hz = ordinary(*m.sideband_offset);
      if (*m.sideband_offset > 0.0) n_side = mean_n_from_sidebands(*m.sideband_offset, c.params.g);
      offsets.x.push_back(pt.calibration.power_dbm);
      offsets.y.push_back(mhz(*m.sideband_offset));
    }
    table << format_double(r.mean_photons) << "," << format_double(r.excited_population) << ","
          << cell(hz(m.central, &FitResult::center)) << "," << cell(hz(m.central, &FitResult::width)) << ","
          << cell(hz(m.lower, &FitResult::center)) << "," << cell(hz(m.upper, &FitResult::center)) << ","
          << cell(width) << "," << cell(offset_hz) << "," << cell(n_side) << "," << cell(m.height_ratio) << ","
          << cell(m.integrated_ratio) << ",ok\n";

    Series s{.label = "", .x = {}, .y = displayed_density(r.spectrum, c.rbw),
             .color = kColors[i % std::size(kColors)]};
    for (double w : r.spectrum.omega) s.x.push_back(mhz(w - r.spectrum.omega_drive()));
    if (i == 0 || i + 1 == sweep.points.size()) s.label = format_double(pt.calibration.power_dbm) + " dBm";
    spectra.series.push_back(std::move(s));
  }

  out.add("sweep.csv", table.str(), "one row per drive power; empty cells where a quantity is unavailable",
          {{"power_dbm", "drive power at the cavity input, 0 dBm = 1 mW"},
           {"mean_n_calibrated", "P / (hbar omega_r kappa')"},
           {"rabi_omega_hz", "drive amplitude Omega / 2pi"},
           {"n_max", "Fock cutoff used for the point"},
           {"mean_photons", "steady-state <a^dag a>"},
           {"excited_population", "steady-state <sigma+ sigma->"},
           {"central_center_hz", "Lorentzian centre of the central peak"},
           {"central_fwhm_hz", "Lorentzian FWHM of the central peak"},
           {"lower_center_hz", "Gaussian centre of the lower sideband"},
           {"upper_center_hz", "Gaussian centre of the upper sideband"},
           {"sideband_width_hz", "mean Gaussian 1/e^2 half-width of the two sidebands"},
           {"sideband_offset_hz", "half the distance between the sideband centres"},
           {"mean_n_from_sidebands", "(offset / 2g)^2"},
           {"height_ratio", "central maximum over the mean sideband maximum"},
           {"integrated_ratio", "central power over the summed sideband power"},
           {"status", "ok or the error kind of a failed point"}});
  out.add("sweep.svg", render_svg(spectra), "spectra of all successful points, log scale");
  out.add("offset_vs_power.svg",
          render_svg({.title = "Sideband offset versus drive power",
                      .x_label = "drive power (dBm)",
                      .y_label = "offset / 2pi (MHz)",
                      .log_y = false,
                      .series = {offsets, expected}}),
          "fitted sideband offset and the calibrated expectation");

  try {
    const auto rows = width_vs_n_report(sweep, c.params.g);
    std::ostringstream w;
    w << "power_dbm,mean_n_from_sidebands,sideband_width_hz,reference_2g_hz\n";
    Series widths{.label = "fitted sideband width", .x = {}, .y = {}, .color = kColors[0], .markers = true};
    Series ref{.label = "2g", .x = {}, .y = {}, .color = kColors[1], .dashed = true};
    for (const auto& row : rows) {
      w << format_double(row.power_dbm) << "," << format_double(row.mean_n) << "," << format_double(ordinary(row.width))
        << "," << format_double(ordinary(row.reference)) << "\n";
      widths.x.push_back(row.mean_n);
      widths.y.push_back(mhz(row.width));
      ref.x.push_back(row.mean_n);
      ref.y.push_back(mhz(row.reference));
    }
    out.add("width_vs_n.csv", w.str(), "sideband width against the photon number inferred from the sideband offset",
            {{"power_dbm", "drive power"},
             {"mean_n_from_sidebands", "(offset / 2g)^2"},
             {"sideband_width_hz", "mean Gaussian 1/e^2 half-width of the sidebands"},
             {"reference_2g_hz", "2g / 2pi"}});
    out.add("width_vs_n.svg",
            render_svg({.title = "Sideband width versus photon number",
                        .x_label = "<n> from sideband offset",
                        .y_label = "width / 2pi (MHz)",
                        .log_y = false,
                        .series = {widths, ref}}),
            "sideband width with the 2g asymptote");
  } catch (const InsufficientData& e) {
    out.warn(std::string("width report skipped: ") + e.what());
  }
}

double analytic_mean_n(const RunConfig& c) {
  if (c.mean_n) return *c.mean_n;
  if (!c.powers_dbm.empty()) return calibrate(c.powers_dbm.front(), c.params).mean_n;
  return mean_n_from_rabi(c.params.rabi_omega, c.params.kappa_prime());
}

void write_closed_form(const RunConfig& c, Bundle& out, const std::string& stem, const SpectrumTrace& trace,
                       std::map<std::string, std::string> header, json extra, const std::string& title) {
  const std::string text = write_spectrum_csv(make_csv(trace, std::move(header)));
  out.add(stem + ".csv", text, title + " (closed form)", kSpectrumColumns);
  const TripletMetrics m = metrics_from_csv_text(text, c.rbw);
  json doc = metrics_json(m);
  doc.update(extra);
  out.add("metrics.json", doc.dump(2) + "\n", "triplet metrics of " + stem + ".csv");
  out.add(stem + ".svg", render_svg(spectrum_plot(trace, m, c.rbw, title)), title);
}

void run_analytic(const RunConfig& c, Bundle& out) {
  const double n = analytic_mean_n(c);
  const auto ap = AnalyticTripletParams::from(c.params, n);
  if (!ap.large_n_regime()) out.warn("<n> = " + fixed(n, 3) + " is below the large photon number regime of the closed form");
  const auto grid = c.grid();
  const SpectrumTrace trace = analytic_trace(grid, sample(grid, [&](double w) { return total_triplet(ap, w); }), c.params);
  write_closed_form(c, out, "analytic", trace, {{"mean_n", format_double(n)}, {"source", "analytic triplet"}},
                    {{"mean_n", n},
                     {"omega_s_hz", ordinary(ap.omega_s())},
                     {"height_ratio_closed_form", 8.0 * ap.g / (std::sqrt(kTwoPi) * ap.gamma1)}},
                    "Strong-coupling triplet");

  std::ostringstream comp;
  comp << "frequency_hz,central_per_hz,lower_per_hz,upper_per_hz\n";
  for (double w : grid) {
    comp << format_double(ordinary(w)) << "," << format_double(kTwoPi * central_peak(ap, w)) << ","
         << format_double(kTwoPi * side_peak(ap, w, Side::lower)) << ","
         << format_double(kTwoPi * side_peak(ap, w, Side::upper)) << "\n";
  }
  out.add("analytic_components.csv", comp.str(), "the three closed-form components separately",
          {{"frequency_hz", "absolute frequency"},
           {"central_per_hz", "central Lorentzian, hbar*omega_a per Hz"},
           {"lower_per_hz", "lower Gaussian sideband, hbar*omega_a per Hz"},
           {"upper_per_hz", "upper Gaussian sideband, hbar*omega_a per Hz"}});
}

void run_mollow(const RunConfig& c, Bundle& out) {
  const auto mp = MollowParams::from(c.params);
  const auto grid = c.grid();
  const SpectrumTrace trace = analytic_trace(grid, sample(grid, [&](double w) { return mollow_triplet(mp, w); }), c.params);
  write_closed_form(c, out, "mollow", trace, {{"source", "free-atom resonance fluorescence"}},
                    {{"rabi_omega_hz", c.frequencies_hz.at("system.rabi_omega")}, {"side_fwhm_closed_form_hz", ordinary(2.0 * mp.gamma_s())}},
                    "Free-atom resonance fluorescence");
}

void run_fit(const RunConfig& c, Bundle& out, bool report) {
  SpectrumCsv csv = read_spectrum_csv(c.input);
  const SpectrumTrace trace = trace_from_csv(csv);
  const TripletMetrics m = triplet_metrics(trace, triplet_options(c.rbw));
  out.add("metrics.json", spectrum_document(m, trace).dump(2) + "\n", "triplet metrics of " + c.input);
  out.add(report ? "spectrum.svg" : "fit.svg", render_svg(spectrum_plot(trace, m, c.rbw, "Fitted spectrum")),
          "input spectrum with fits dashed");
  if (report) {
    double n = std::numeric_limits<double>::quiet_NaN();
    if (csv.header.count("mean_photons")) n = parse_double(csv.header.at("mean_photons")).value_or(n);
    out.add("comparison.md", comparison_table(m, trace.params, n), "reference values against computed metrics");
  }
}

}  // namespace

json metrics_json(const TripletMetrics& m) {
  return {{"central", fit_json(m.central)},
          {"lower", fit_json(m.lower)},
          {"upper", fit_json(m.upper)},
          {"height_ratio", opt_json(m.height_ratio)},
          {"integrated_ratio", opt_json(m.integrated_ratio)},
          {"sideband_offset_hz", m.sideband_offset ? json(ordinary(*m.sideband_offset)) : json(nullptr)},
          {"has_sidebands", m.has_sidebands()}};
}

std::string comparison_table(const TripletMetrics& m, const SystemParams& p, double mean_photons) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto get = [&](const auto& v, auto f) { return v ? f(*v) : nan; };
  const double offset = get(m.sideband_offset, [](double v) { return mhz(v); });
  const double width = m.has_sidebands() ? mhz(0.5 * (m.lower->width + m.upper->width)) : nan;
  const double central = get(m.central, [](const FitResult& f) { return mhz(f.width); });
  const double n_side = m.sideband_offset && *m.sideband_offset > 0.0 ? mean_n_from_sidebands(*m.sideband_offset, p.g) : nan;

  std::ostringstream o;
  o << "| Quantity | Reference value | Computed | Note |\n";
  o << "|---|---|---|---|\n";
  o << "| Sideband offset / 2pi (MHz) | " << fixed(mhz(2.0 * p.g * std::sqrt(25.4)), 1) << " | " << fixed(offset, 1)
    << " | 2g sqrt(<n>) at <n> = 25.4 |\n";
  o << "| <n> from sideband offset | 25.4 | " << fixed(n_side, 2) << " | (offset / 2g)^2 |\n";
  o << "| Steady-state <n> | 25.4 | " << fixed(mean_photons, 2) << " | (Omega / kappa')^2 = "
    << fixed(mean_n_from_rabi(p.rabi_omega, p.kappa_prime()), 2) << " |\n";
  o << "| Sideband Gaussian width / 2pi (MHz) | 30 | " << fixed(width, 1) << " | simulated, close to 2g |\n";
  o << "| Sideband width / 2pi, measured (MHz) | 41 +- 7 | " << fixed(width, 1) << " | measured device |\n";
  o << "| Central width / 2pi (MHz) | 3.6 | " << fixed(central, 2) << " | Lorentzian FWHM, elastic part at the RBW |\n";
  o << "| Central / side height ratio | 11 | " << fixed(get(m.height_ratio, [](double v) { return v; }), 2)
    << " | measured device |\n";
  o << "| Central / side height ratio, closed form | " << fixed(8.0 * p.g / (std::sqrt(kTwoPi) * p.gamma1), 2) << " | "
    << fixed(get(m.height_ratio, [](double v) { return v; }), 2) << " | 8g / (sqrt(2pi) Gamma1) |\n";
  o << "| Integrated central / sidebands | 1.1 | " << fixed(get(m.integrated_ratio, [](double v) { return v; }), 3)
    << " | |\n";
  return o.str();
}

json error_json(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

Bundle run(const RunConfig& c) {
  Bundle out(c.out_dir);
  switch (c.mode) {
    case Mode::spectrum: run_spectrum(c, out); break;
    case Mode::sweep: run_sweep_mode(c, out); break;
    case Mode::analytic: run_analytic(c, out); break;
    case Mode::mollow: run_mollow(c, out); break;
    case Mode::fit: run_fit(c, out, false); break;
    case Mode::report: run_fit(c, out, true); break;
  }
  out.write_manifest(to_string(c.mode), to_config_text(c));
  return out;
}

}  // namespace mollow::cli
