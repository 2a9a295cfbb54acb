// snspdkit_cli.cpp - command-line surface of the toolkit
//
// Subcommands: fit, jitter, sde, sweep, simulate {delays,counts,sweep,
// waveform}. Every run emits a machine-readable report embedding the
// manifest that produced it; data tables carry full precision. Exit
// codes: 0 ok, 2 usage, 3 input parse/read, 4 analysis.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <snspdkit/snspdkit.h>

#include "report.hpp"
#include "svgplot.hpp"

namespace fs = std::filesystem;
using namespace snspdcli;

namespace {

constexpr int kUsageError = 2;
constexpr int kParseError = 3;
constexpr int kAnalysisError = 4;

struct CliError {
  int exit_code;
  std::string message;
};

void check(snspd_status st) {
  if (st == SNSPD_OK) return;
  int code = kAnalysisError;
  switch (st) {
    case SNSPD_ERR_PARSE:
    case SNSPD_ERR_MISSING_FIELD:
    case SNSPD_ERR_EMPTY_INPUT:
    case SNSPD_ERR_IO:
      code = kParseError;
      break;
    default:
      break;
  }
  throw CliError{code, snspd_last_error()};
}

struct HistDeleter {
  void operator()(snspd_histogram* p) const { snspd_histogram_free(p); }
};
struct SweepDeleter {
  void operator()(snspd_sweep* p) const { snspd_sweep_free(p); }
};
struct CalDeleter {
  void operator()(snspd_calibration* p) const { snspd_calibration_free(p); }
};
struct ModelDeleter {
  void operator()(snspd_model* p) const { snspd_model_free(p); }
};
struct WaveformDeleter {
  void operator()(snspd_waveform* p) const { snspd_waveform_free(p); }
};
struct BufDeleter {
  void operator()(void* p) const { snspd_free(p); }
};

using HistPtr = std::unique_ptr<snspd_histogram, HistDeleter>;
using SweepPtr = std::unique_ptr<snspd_sweep, SweepDeleter>;
using CalPtr = std::unique_ptr<snspd_calibration, CalDeleter>;
using ModelPtr = std::unique_ptr<snspd_model, ModelDeleter>;
using WaveformPtr = std::unique_ptr<snspd_waveform, WaveformDeleter>;

struct CommonOpts {
  std::string out_dir;
  std::string format = "both"; // csv | plot | both

  fs::path out(const std::string& name) const { return fs::path(out_dir) / name; }
  bool plots() const { return format != "csv"; }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  const char* env = std::getenv("SNSPDKIT_OUT_DIR");
  opts.out_dir = env && *env ? env : ".";
  cmd->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--format", opts.format, "Report format: csv, plot or both")
      ->check(CLI::IsMember({"csv", "plot", "both"}))
      ->capture_default_str();
}

std::pair<double, double> parse_interval(const std::string& text, const char* flag) {
  std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError(flag, "expected lo:hi");
  try {
    double lo = std::stod(text.substr(0, colon));
    double hi = std::stod(text.substr(colon + 1));
    return {lo, hi};
  } catch (const std::exception&) {
    throw CLI::ValidationError(flag, "expected numeric lo:hi");
  }
}

HistPtr build_histogram_from_file(const fs::path& path, double bin_width) {
  double* values = nullptr;
  size_t n = 0;
  check(snspd_timestamps_read(path.string().c_str(), &values, &n));
  std::unique_ptr<double[], BufDeleter> guard(values);
  snspd_histogram* h = nullptr;
  check(snspd_histogram_build(values, n, bin_width, &h));
  return HistPtr(h);
}

void plot_histogram_fit(const fs::path& path, const snspd_histogram* hist,
                        const snspd_gaussian_fit& fit) {
  const uint64_t* counts = nullptr;
  size_t n = 0;
  double bw = 0, origin = 0;
  check(snspd_histogram_counts(hist, &counts, &n));
  check(snspd_histogram_bin_width(hist, &bw));
  check(snspd_histogram_origin(hist, &origin));

  PlotSeries data;
  data.label = "data";
  data.color = "#1f77b4";
  PlotSeries model;
  model.label = "gaussian fit";
  model.color = "#d62728";
  for (size_t i = 0; i < n; ++i) {
    double t = origin + (static_cast<double>(i) + 0.5) * bw;
    data.x.push_back(t);
    data.y.push_back(static_cast<double>(counts[i]));
    double u = (t - fit.mu_ps) / fit.sigma_ps;
    model.x.push_back(t);
    model.y.push_back(fit.amplitude * std::exp(-0.5 * u * u) + fit.baseline);
  }
  PlotSpec spec;
  spec.title = "delay histogram";
  spec.x_label = "delay (ps)";
  spec.y_label = "counts";
  spec.log_y = true;
  spec.series = {data, model};
  write_svg_plot(path, spec);
}

void try_plot(const std::function<void()>& plot) {
  // plotting failures never fail the analysis exit status
  try {
    plot();
  } catch (const std::exception& e) {
    std::cerr << "warning: plot failed: " << e.what() << "\n";
  } catch (const CliError& e) {
    std::cerr << "warning: plot failed: " << e.message << "\n";
  }
}

/* ------------------------------------------------------------------ */

struct FitOpts {
  CommonOpts common;
  std::string input;
  double bin_width = 1.0;
  std::vector<double> extra_levels;
};

void run_fit(const FitOpts& o) {
  HistPtr hist = build_histogram_from_file(o.input, o.bin_width);

  Report rep("fit", "snspdkit fit report");
  rep.manifest_input("timestamps", o.input);
  rep.manifest("config.bin_width_ps", o.bin_width);
  rep.manifest("config.weighting", "inverse_count");
  rep.manifest("config.format", o.common.format);

  uint64_t events = 0;
  const uint64_t* counts = nullptr;
  size_t n_bins = 0;
  check(snspd_histogram_total_events(hist.get(), &events));
  check(snspd_histogram_counts(hist.get(), &counts, &n_bins));
  rep.row("events", static_cast<double>(events), "count");
  rep.row("bins", static_cast<double>(n_bins), "count");

  snspd_gaussian_fit fit{};
  check(snspd_fit_gaussian(hist.get(), &fit));
  rep.row("gauss_mu", fit.mu_ps, fit.mu_unc_ps, "ps");
  rep.row("gauss_sigma", fit.sigma_ps, fit.sigma_unc_ps, "ps");
  rep.row("gauss_fwhm", fit.fwhm_ps, fit.fwhm_unc_ps, "ps");
  rep.row("gauss_amplitude", fit.amplitude, "counts");
  rep.row("gauss_baseline", fit.baseline, "counts");
  rep.row("gauss_goodness", fit.goodness, "chi2/bin");

  snspd_emg_fit emg{};
  snspd_status emg_st = snspd_fit_emg(hist.get(), &emg);
  if (emg_st == SNSPD_OK) {
    rep.row("emg_mu", emg.mu_ps, "ps");
    rep.row("emg_sigma", emg.sigma_ps, "ps");
    rep.row("emg_tau", emg.tau_ps, "ps");
    rep.row("emg_amplitude", emg.amplitude, "counts");
    rep.row("emg_baseline", emg.baseline, "counts");
    rep.row("emg_goodness", emg.goodness, "chi2/bin");
  } else {
    std::cerr << "warning: exponential-tail fit failed: " << snspd_last_error() << "\n";
    rep.row_text("emg_fit", "not_converged", "");
  }

  std::vector<double> levels = {0.5, 0.01};
  for (double l : o.extra_levels)
    if (l != 0.5 && l != 0.01) levels.push_back(l);
  std::ostringstream lvls;
  for (size_t i = 0; i < levels.size(); ++i) lvls << (i ? "," : "") << levels[i];
  rep.manifest("config.levels", lvls.str());

  std::optional<double> fwhm_direct, w20;
  for (double level : levels) {
    std::string tag = format_sig6(level);
    snspd_width w{};
    snspd_status st = snspd_width_at_level(hist.get(), level, &fit, &w);
    if (st != SNSPD_OK) {
      rep.row_text("width_" + tag, "not_reached", "ps");
      continue;
    }
    rep.row("width_" + tag, w.width_ps, "ps");
    if (level == 0.5) fwhm_direct = w.width_ps;
    if (level == 0.01) w20 = w.width_ps;
    snspd_tail_residue r{};
    if (snspd_tail_residue_at_level(hist.get(), &fit, level, &r) == SNSPD_OK)
      rep.row("tail_residue_" + tag, r.residue_ps, "ps");
  }
  if (fwhm_direct && w20) rep.row("width_ratio_0.01_0.5", *w20 / *fwhm_direct, "");

  fs::path hist_path = o.common.out("histogram.csv");
  check(snspd_histogram_write_csv(hist.get(), hist_path.string().c_str()));
  rep.manifest_output("histogram", hist_path);

  if (o.common.plots()) {
    fs::path svg = o.common.out("fit.svg");
    try_plot([&] { plot_histogram_fit(svg, hist.get(), fit); });
    if (fs::exists(svg)) rep.manifest_output("plot", svg);
  }
  rep.write(o.common.out("fit_report.csv"));
}

/* ------------------------------------------------------------------ */

struct JitterOpts {
  CommonOpts common;
  std::string input;
  double bin_width = 1.0;
  double pulse_fwhm = 6.0;
  double pulse_fwhm_unc = 0.0;
  double tcspc_fwhm = 9.0;
  double tcspc_fwhm_unc = 0.0;
  std::string waveform_path;
  int smooth = 0;
  double sigma_rms = 0.0; // 0 = estimate from the waveform pre-edge
  double sigma_rms_unc = 0.0;
  double slew = 0.0; // 0 = measure from the waveform
  double slew_unc = 0.0;
  double noise_fwhm = 0.0; // direct override
  double noise_fwhm_unc = 0.0;
};

void run_jitter(const JitterOpts& o) {
  HistPtr hist = build_histogram_from_file(o.input, o.bin_width);

  Report rep("jitter", "snspdkit jitter budget report");
  rep.manifest_input("timestamps", o.input);
  rep.manifest("config.bin_width_ps", o.bin_width);
  rep.manifest("config.weighting", "inverse_count");
  rep.manifest("config.pulse_fwhm_ps", o.pulse_fwhm);
  rep.manifest("config.tcspc_fwhm_ps", o.tcspc_fwhm);

  snspd_gaussian_fit fit{};
  check(snspd_fit_gaussian(hist.get(), &fit));
  double j_sys = fit.fwhm_ps, j_sys_unc = fit.fwhm_unc_ps;

  // noise component: direct override, or sigma_RMS / slew rate with
  // both measurable from a waveform
  double j_noise = 0, j_noise_unc = 0;
  double slew = o.slew, slew_unc = o.slew_unc;
  double sigma_rms = o.sigma_rms, sigma_rms_unc = o.sigma_rms_unc;
  if (o.noise_fwhm > 0) {
    j_noise = o.noise_fwhm;
    j_noise_unc = o.noise_fwhm_unc;
  } else {
    WaveformPtr wf;
    if (!o.waveform_path.empty()) {
      snspd_waveform* w = nullptr;
      check(snspd_waveform_read_csv(o.waveform_path.c_str(), &w));
      wf.reset(w);
      rep.manifest_input("waveform", o.waveform_path);
      rep.manifest("config.smoothing_samples", static_cast<double>(o.smooth));
      if (slew <= 0) check(snspd_slew_rate(wf.get(), o.smooth, &slew));
      if (sigma_rms <= 0) check(snspd_pre_edge_rms(wf.get(), &sigma_rms));
    }
    if (slew <= 0 || sigma_rms <= 0)
      throw CliError{kUsageError,
                     "jitter: provide --noise-fwhm, or --waveform (optionally with "
                     "--sigma-rms / --slew-rate overrides)"};
    check(snspd_noise_jitter_u(sigma_rms, sigma_rms_unc, slew, slew_unc, &j_noise,
                               &j_noise_unc));
    rep.row("slew_rate", slew, slew_unc, "mV/ps");
    rep.row("sigma_rms", sigma_rms, sigma_rms_unc, "mV");
  }

  // setup component and its propagated uncertainty via the quadrature
  snspd_jitter_budget setup{};
  check(snspd_compose_budget(o.pulse_fwhm, o.pulse_fwhm_unc, o.tcspc_fwhm,
                             o.tcspc_fwhm_unc, 0, 0, &setup));
  double j_setup = setup.j_sys_ps, j_setup_unc = setup.j_sys_unc_ps;

  double j_int = 0, j_int_unc = 0;
  int clamped = 0;
  check(snspd_intrinsic_jitter_u(j_sys, j_sys_unc, j_noise, j_noise_unc, j_setup,
                                 j_setup_unc, &j_int, &j_int_unc, &clamped));

  rep.row("j_sys", j_sys, j_sys_unc, "ps");
  rep.row("j_noise", j_noise, j_noise_unc, "ps");
  rep.row("j_setup", j_setup, j_setup_unc, "ps");
  rep.row("j_int", j_int, j_int_unc, "ps");
  rep.row_text("j_int_clamped", clamped ? "yes" : "no", "");
  rep.row("gauss_mu", fit.mu_ps, fit.mu_unc_ps, "ps");
  rep.row("gauss_sigma", fit.sigma_ps, fit.sigma_unc_ps, "ps");

  snspd_width w{};
  if (snspd_width_at_level(hist.get(), 0.5, &fit, &w) == SNSPD_OK)
    rep.row("fwhm_direct", w.width_ps, "ps");
  if (snspd_width_at_level(hist.get(), 0.01, &fit, &w) == SNSPD_OK) {
    rep.row("width_m20db", w.width_ps, "ps");
    snspd_tail_residue r{};
    if (snspd_tail_residue_at_level(hist.get(), &fit, 0.01, &r) == SNSPD_OK)
      rep.row("tail_residue_m20db", r.residue_ps, "ps");
  }

  fs::path hist_path = o.common.out("histogram.csv");
  check(snspd_histogram_write_csv(hist.get(), hist_path.string().c_str()));
  rep.manifest_output("histogram", hist_path);
  if (o.common.plots()) {
    fs::path svg = o.common.out("fit.svg");
    try_plot([&] { plot_histogram_fit(svg, hist.get(), fit); });
    if (fs::exists(svg)) rep.manifest_output("plot", svg);
  }
  rep.write(o.common.out("jitter_report.csv"));
}

/* ------------------------------------------------------------------ */

struct SdeOpts {
  CommonOpts common;
  std::string calibration;
  double pcr = 0;
  double dcr = 0;
  std::string counts_path;
  int n_plateau = 10;
};

void run_sde(const SdeOpts& o) {
  snspd_calibration* cal_raw = nullptr;
  check(snspd_calibration_read(o.calibration.c_str(), &cal_raw));
  CalPtr cal(cal_raw);
  snspd_calibration_params p{};
  check(snspd_calibration_get(cal.get(), &p));

  Report rep("sde", "snspdkit detection-efficiency report");
  rep.manifest_input("calibration", o.calibration);
  rep.manifest("config.pcr_cps", o.pcr);
  rep.manifest("config.dcr_cps", o.dcr);

  double rel_pcr_dcr = p.rel_unc_pcr_dcr;
  if (!o.counts_path.empty()) {
    double* samples = nullptr;
    size_t n = 0;
    check(snspd_timestamps_read(o.counts_path.c_str(), &samples, &n));
    std::unique_ptr<double[], BufDeleter> guard(samples);
    check(snspd_pcr_dcr_uncertainty(samples, n, o.n_plateau, &rel_pcr_dcr));
    rep.manifest_input("counts", o.counts_path);
    rep.manifest("config.n_plateau_points", static_cast<double>(o.n_plateau));
    rep.row("counts_samples", static_cast<double>(n), "count");
  }

  double n_gamma = 0;
  check(snspd_photon_flux(cal.get(), &n_gamma));
  double eta = 0;
  check(snspd_sde(o.pcr, o.dcr, n_gamma, &eta));

  snspd_uncertainty_budget budget{};
  check(snspd_sde_uncertainty(rel_pcr_dcr, p.rel_unc_p_m, p.rel_unc_r_switch,
                              p.rel_unc_r_att, &budget));

  double e_gamma = 0;
  check(snspd_photon_energy(p.wavelength_nm, &e_gamma));
  rep.row("photon_energy", e_gamma, "J");
  rep.row("photon_flux", n_gamma, n_gamma * budget.rel_total, "1/s");
  rep.row("sde", eta, eta * budget.rel_total, "fraction");
  rep.row("sde_percent", 100.0 * eta, 100.0 * eta * budget.rel_total, "%");
  rep.row("rel_unc_pcr_dcr", budget.rel_pcr_dcr, "fraction");
  rep.row("rel_unc_pm", budget.rel_pm, "fraction");
  rep.row("rel_unc_rswitch", budget.rel_rswitch, "fraction");
  rep.row("rel_unc_ratt", budget.rel_ratt, "fraction");
  rep.row("rel_unc_total", budget.rel_total, "fraction");

  rep.write(o.common.out("sde_report.csv"));
}

/* ------------------------------------------------------------------ */

struct SweepOpts {
  CommonOpts common;
  std::string input;
  std::string region; // lo:hi in uA, empty = [i_sat, max]
  std::string calibration;
  double rel_total = -1; // <0 = derive from calibration or 0
};

void run_sweep(const SweepOpts& o) {
  snspd_sweep* raw = nullptr;
  check(snspd_sweep_read_csv(o.input.c_str(), &raw));
  SweepPtr sweep(raw);

  Report rep("sweep", "snspdkit bias-sweep report");
  rep.manifest_input("sweep", o.input);

  double rel_total = 0.0;
  if (o.rel_total >= 0) {
    rel_total = o.rel_total;
  } else if (!o.calibration.empty()) {
    snspd_calibration* cal_raw = nullptr;
    check(snspd_calibration_read(o.calibration.c_str(), &cal_raw));
    CalPtr cal(cal_raw);
    snspd_calibration_params p{};
    check(snspd_calibration_get(cal.get(), &p));
    snspd_uncertainty_budget budget{};
    check(snspd_sde_uncertainty(p.rel_unc_pcr_dcr, p.rel_unc_p_m, p.rel_unc_r_switch,
                                p.rel_unc_r_att, &budget));
    rel_total = budget.rel_total;
    rep.manifest_input("calibration", o.calibration);
  }
  rep.manifest("config.cal_rel_total", rel_total);

  double i_sat = 0;
  check(snspd_saturation_current(sweep.get(), &i_sat));
  rep.row("i_sat", i_sat, "uA");

  size_t n = 0;
  check(snspd_sweep_size(sweep.get(), &n));
  snspd_sweep_record last{};
  check(snspd_sweep_record_at(sweep.get(), n - 1, &last));

  double lo = i_sat, hi = last.bias_ua;
  if (!o.region.empty()) std::tie(lo, hi) = parse_interval(o.region, "--region");
  rep.manifest("config.region", format_sig6(lo) + ":" + format_sig6(hi));

  snspd_plateau_stats stats{};
  check(snspd_plateau_average(sweep.get(), lo, hi, rel_total, &stats));
  rep.row("plateau_sde_mean", stats.sde_mean, stats.sde_abs_unc, "fraction");
  rep.row("plateau_sde_percent", 100 * stats.sde_mean, 100 * stats.sde_abs_unc, "%");
  rep.row("plateau_rel_unc", stats.sde_rel_unc, "fraction");
  rep.row("plateau_points", stats.n_points, "count");
  rep.row("plateau_max_rel_deviation", stats.max_rel_deviation, "fraction");

  snspd_sweep* norm_raw = nullptr;
  check(snspd_normalize_bias(sweep.get(), i_sat, &norm_raw));
  SweepPtr norm(norm_raw);
  fs::path norm_path = o.common.out("sweep_normalized.csv");
  check(snspd_sweep_write_csv(norm.get(), norm_path.string().c_str()));
  rep.manifest_output("sweep_normalized", norm_path);

  snspd_inflexion infl{};
  snspd_status infl_st = snspd_jitter_inflexion(norm.get(), &infl);
  if (infl_st == SNSPD_OK) {
    if (infl.no_descent) {
      rep.row_text("jitter_inflexion", "no_descent", "");
    } else {
      rep.row("jitter_inflexion", infl.normalized_bias, "I/I_sat");
      rep.row("jitter_inflexion_slope", infl.slope_ps, "ps per I/I_sat");
    }
  } else if (infl_st == SNSPD_ERR_TOO_FEW_POINTS) {
    rep.row_text("jitter_inflexion", "insufficient_jitter_data", "");
  } else {
    check(infl_st);
  }

  if (o.common.plots()) {
    try_plot([&] {
      PlotSeries sde_series, jit_series;
      sde_series.label = "SDE";
      sde_series.color = "#d62728";
      jit_series.label = "jitter FWHM";
      jit_series.color = "#1f77b4";
      for (size_t i = 0; i < n; ++i) {
        snspd_sweep_record r{};
        check(snspd_sweep_record_at(sweep.get(), i, &r));
        sde_series.x.push_back(r.bias_ua);
        sde_series.y.push_back(r.sde);
        if (!std::isnan(r.jitter_fwhm_ps)) {
          jit_series.x.push_back(r.bias_ua);
          jit_series.y.push_back(r.jitter_fwhm_ps);
        }
      }
      PlotSpec s1;
      s1.title = "system detection efficiency vs bias";
      s1.x_label = "bias (uA)";
      s1.y_label = "SDE (fraction)";
      s1.series = {sde_series};
      write_svg_plot(o.common.out("sweep_sde.svg"), s1);
      rep.manifest_output("plot_sde", o.common.out("sweep_sde.svg"));
      if (!jit_series.x.empty()) {
        PlotSpec s2;
        s2.title = "jitter vs bias";
        s2.x_label = "bias (uA)";
        s2.y_label = "jitter FWHM (ps)";
        s2.series = {jit_series};
        write_svg_plot(o.common.out("sweep_jitter.svg"), s2);
        rep.manifest_output("plot_jitter", o.common.out("sweep_jitter.svg"));
      }
    });
  }
  rep.write(o.common.out("sweep_report.csv"));
}

/* ------------------------------------------------------------------ */

struct SimulateOpts {
  CommonOpts common;
  std::string model_path;
  std::uint64_t seed = 12345;
  // delays
  double bias = 0; // 0 = model i_sat
  std::uint64_t events = 100000;
  // counts
  double rate = 100000;
  double integration_time = 1.0;
  std::uint64_t repeats = 200;
  // sweep
  std::string grid; // lo:hi:n in uA
  std::uint64_t events_per_point = 10000;
  double bin_width = 1.0;
  // waveform
  double amplitude = 130;
  double rise_time = 100;
  double noise_rms = 5.66;
  double dt = 1.0;
};

ModelPtr load_model(const std::string& path) {
  snspd_model* m = nullptr;
  if (path.empty()) {
    snspd_model_params p{};
    snspd_model_params_defaults(&p);
    check(snspd_model_create(&p, &m));
  } else {
    check(snspd_model_read(path.c_str(), &m));
  }
  return ModelPtr(m);
}

void manifest_model(Report& rep, const SimulateOpts& o) {
  if (o.model_path.empty())
    rep.manifest("input.model", "builtin_default");
  else
    rep.manifest_input("model", o.model_path);
  rep.manifest("config.seed", static_cast<double>(o.seed));
}

void run_simulate_delays(const SimulateOpts& o) {
  ModelPtr model = load_model(o.model_path);
  double bias = o.bias;
  if (bias <= 0) check(snspd_model_i_sat(model.get(), &bias));

  double* delays = nullptr;
  size_t n = 0;
  check(snspd_simulate_delays(model.get(), bias, o.events, o.seed, &delays, &n));
  std::unique_ptr<double[], BufDeleter> guard(delays);

  fs::path path = o.common.out("delays.txt");
  check(snspd_timestamps_write(path.string().c_str(), delays, n));

  Report rep("simulate delays", "snspdkit simulated delay stream");
  manifest_model(rep, o);
  rep.manifest("config.bias_ua", bias);
  rep.manifest("config.events", static_cast<double>(o.events));
  rep.manifest_output("delays", path);
  double mean = 0;
  for (size_t i = 0; i < n; ++i) mean += delays[i];
  mean /= static_cast<double>(n);
  rep.row("events", static_cast<double>(n), "count");
  rep.row("mean_delay", mean, "ps");
  rep.write(o.common.out("simulate_delays_report.csv"));
}

void run_simulate_counts(const SimulateOpts& o) {
  uint64_t* counts = nullptr;
  size_t n = 0;
  check(snspd_simulate_count_run(o.rate, o.integration_time, o.repeats, o.seed, &counts,
                                 &n));
  std::unique_ptr<uint64_t[], BufDeleter> guard(counts);

  std::ostringstream data;
  data << "# simulated count run\n";
  for (size_t i = 0; i < n; ++i) data << counts[i] << "\n";
  fs::path path = o.common.out("counts.txt");
  atomic_write_text(path, data.str());

  double mean = 0;
  for (size_t i = 0; i < n; ++i) mean += static_cast<double>(counts[i]);
  mean /= static_cast<double>(n);
  double ss = 0;
  for (size_t i = 0; i < n; ++i) {
    double d = static_cast<double>(counts[i]) - mean;
    ss += d * d;
  }
  double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;

  Report rep("simulate counts", "snspdkit simulated count run");
  manifest_model(rep, o);
  rep.manifest("config.rate_cps", o.rate);
  rep.manifest("config.integration_time_s", o.integration_time);
  rep.manifest("config.repeats", static_cast<double>(o.repeats));
  rep.manifest_output("counts", path);
  rep.row("repeats", static_cast<double>(n), "count");
  rep.row("mean", mean, "counts");
  rep.row("stddev", sd, "counts");
  rep.row("shot_noise_expected", std::sqrt(mean), "counts");
  rep.write(o.common.out("simulate_counts_report.csv"));
}

void run_simulate_sweep(const SimulateOpts& o) {
  ModelPtr model = load_model(o.model_path);
  double i_sat = 0;
  check(snspd_model_i_sat(model.get(), &i_sat));

  double lo = 0.8 * i_sat, hi = 1.3 * i_sat;
  size_t npts = 20;
  if (!o.grid.empty()) {
    std::size_t c1 = o.grid.find(':');
    std::size_t c2 = c1 == std::string::npos ? std::string::npos : o.grid.find(':', c1 + 1);
    if (c2 == std::string::npos) throw CLI::ValidationError("--grid", "expected lo:hi:n");
    try {
      lo = std::stod(o.grid.substr(0, c1));
      hi = std::stod(o.grid.substr(c1 + 1, c2 - c1 - 1));
      npts = std::stoul(o.grid.substr(c2 + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--grid", "expected numeric lo:hi:n");
    }
  }
  if (npts < 2 || !(hi > lo)) throw CLI::ValidationError("--grid", "need hi > lo and n >= 2");

  std::vector<double> grid(npts);
  for (size_t i = 0; i < npts; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(npts - 1);

  snspd_sweep* raw = nullptr;
  check(snspd_simulate_sweep(model.get(), grid.data(), grid.size(), o.events_per_point,
                             o.seed, o.bin_width, &raw));
  SweepPtr sweep(raw);

  fs::path path = o.common.out("sweep.csv");
  check(snspd_sweep_write_csv(sweep.get(), path.string().c_str()));

  Report rep("simulate sweep", "snspdkit simulated bias sweep");
  manifest_model(rep, o);
  rep.manifest("config.grid", format_sig6(lo) + ":" + format_sig6(hi) + ":" +
                                  std::to_string(npts));
  rep.manifest("config.events_per_point", static_cast<double>(o.events_per_point));
  rep.manifest("config.bin_width_ps", o.bin_width);
  rep.manifest_output("sweep", path);
  rep.row("points", static_cast<double>(npts), "count");
  rep.row("model_i_sat", i_sat, "uA");
  rep.write(o.common.out("simulate_sweep_report.csv"));
}

void run_simulate_waveform(const SimulateOpts& o) {
  snspd_waveform* raw = nullptr;
  check(snspd_synthesize_waveform(o.amplitude, o.rise_time, o.noise_rms, o.dt, o.seed,
                                  &raw));
  WaveformPtr wf(raw);

  fs::path path = o.common.out("waveform.csv");
  check(snspd_waveform_write_csv(wf.get(), path.string().c_str()));

  Report rep("simulate waveform", "snspdkit synthesized detection pulse");
  manifest_model(rep, o);
  rep.manifest("config.amplitude_mv", o.amplitude);
  rep.manifest("config.rise_time_ps", o.rise_time);
  rep.manifest("config.noise_rms_mv", o.noise_rms);
  rep.manifest("config.sample_interval_ps", o.dt);
  rep.manifest_output("waveform", path);

  const double* samples = nullptr;
  size_t n = 0;
  check(snspd_waveform_samples(wf.get(), &samples, &n));
  rep.row("samples", static_cast<double>(n), "count");
  double slew = 0;
  check(snspd_slew_rate(wf.get(), 0, &slew));
  rep.row("slew_rate_measured", slew, "mV/ps");
  rep.row("slew_rate_analytic", o.amplitude / o.rise_time, "mV/ps");
  if (o.noise_rms > 0) {
    double rms = 0;
    check(snspd_pre_edge_rms(wf.get(), &rms));
    rep.row("pre_edge_rms", rms, "mV");
  }

  if (o.common.plots()) {
    try_plot([&] {
      PlotSeries s;
      s.label = "waveform";
      for (size_t i = 0; i < n; ++i) {
        s.x.push_back(static_cast<double>(i) * o.dt);
        s.y.push_back(samples[i]);
      }
      PlotSpec spec;
      spec.title = "synthesized detection pulse";
      spec.x_label = "time (ps)";
      spec.y_label = "voltage (mV)";
      spec.series = {s};
      write_svg_plot(o.common.out("waveform.svg"), spec);
      rep.manifest_output("plot", o.common.out("waveform.svg"));
    });
  }
  rep.write(o.common.out("simulate_waveform_report.csv"));
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"snspdkit - single-photon-detector characterization toolkit"};
  app.set_version_flag("--version", snspd_version());
  app.require_subcommand(1);

  FitOpts fit_opts;
  auto* fit_cmd = app.add_subcommand(
      "fit", "Histogram a timestamp stream and fit the peak shape");
  fit_cmd->add_option("input", fit_opts.input, "timestamp file, one delay (ps) per line")
      ->required();
  fit_cmd->add_option("--bin-width", fit_opts.bin_width, "histogram bin width (ps)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit_cmd->add_option("--level", fit_opts.extra_levels,
                      "additional width levels (fractions of peak; 0.5 and 0.01 are "
                      "always reported)");
  add_common(fit_cmd, fit_opts.common);
  fit_cmd->callback([&] { run_fit(fit_opts); });

  JitterOpts jit_opts;
  auto* jit_cmd = app.add_subcommand(
      "jitter", "Full jitter budget from a timestamp stream plus noise inputs");
  jit_cmd->add_option("input", jit_opts.input, "timestamp file")->required();
  jit_cmd->add_option("--bin-width", jit_opts.bin_width, "histogram bin width (ps)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  jit_cmd->add_option("--pulse-fwhm", jit_opts.pulse_fwhm, "laser pulse width FWHM (ps)")
      ->capture_default_str();
  jit_cmd->add_option("--pulse-fwhm-unc", jit_opts.pulse_fwhm_unc, "its one-sigma (ps)");
  jit_cmd->add_option("--tcspc-fwhm", jit_opts.tcspc_fwhm, "timing-module jitter FWHM (ps)")
      ->capture_default_str();
  jit_cmd->add_option("--tcspc-fwhm-unc", jit_opts.tcspc_fwhm_unc, "its one-sigma (ps)");
  jit_cmd->add_option("--waveform", jit_opts.waveform_path,
                      "detection-pulse waveform CSV for slew rate / noise RMS");
  jit_cmd->add_option("--smooth", jit_opts.smooth,
                      "boxcar smoothing width in samples before the slew rate (0 = off)");
  jit_cmd->add_option("--sigma-rms", jit_opts.sigma_rms, "amplifier noise RMS (mV)");
  jit_cmd->add_option("--sigma-rms-unc", jit_opts.sigma_rms_unc, "its one-sigma (mV)");
  jit_cmd->add_option("--slew-rate", jit_opts.slew, "pulse slew rate (mV/ps)");
  jit_cmd->add_option("--slew-rate-unc", jit_opts.slew_unc, "its one-sigma (mV/ps)");
  jit_cmd->add_option("--noise-fwhm", jit_opts.noise_fwhm,
                      "noise jitter FWHM directly (ps), bypassing the waveform");
  jit_cmd->add_option("--noise-fwhm-unc", jit_opts.noise_fwhm_unc, "its one-sigma (ps)");
  add_common(jit_cmd, jit_opts.common);
  jit_cmd->callback([&] { run_jitter(jit_opts); });

  SdeOpts sde_opts;
  auto* sde_cmd = app.add_subcommand(
      "sde", "System detection efficiency with uncertainty budget");
  sde_cmd->add_option("--calibration", sde_opts.calibration, "calibration chain file")
      ->required();
  sde_cmd->add_option("--pcr", sde_opts.pcr, "photon count rate (cps)")->required();
  sde_cmd->add_option("--dcr", sde_opts.dcr, "dark count rate (cps)")->required();
  sde_cmd->add_option("--counts", sde_opts.counts_path,
                      "repeated (pcr - dcr) readings, one per line, for the statistical "
                      "uncertainty");
  sde_cmd->add_option("--n-plateau", sde_opts.n_plateau,
                      "plateau points the statistical term is averaged over")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(sde_cmd, sde_opts.common);
  sde_cmd->callback([&] { run_sde(sde_opts); });

  SweepOpts sweep_opts;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Saturation current, plateau average, normalized curves, inflexion");
  sweep_cmd->add_option("input", sweep_opts.input, "sweep CSV")->required();
  sweep_cmd->add_option("--region", sweep_opts.region,
                        "plateau region lo:hi in uA (default [I_sat, max bias])");
  sweep_cmd->add_option("--calibration", sweep_opts.calibration,
                        "calibration file supplying the relative uncertainty");
  sweep_cmd->add_option("--rel-total", sweep_opts.rel_total,
                        "total calibration relative uncertainty (overrides --calibration)");
  add_common(sweep_cmd, sweep_opts.common);
  sweep_cmd->callback([&] { run_sweep(sweep_opts); });

  SimulateOpts sim_opts;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo generation from a model");
  sim_cmd->require_subcommand(1);
  sim_cmd->fallthrough();
  sim_cmd->add_option("--model", sim_opts.model_path,
                      "model file (key = value); omitted = built-in default");
  sim_cmd->add_option("--seed", sim_opts.seed, "RNG seed")->capture_default_str();

  auto* sim_delays = sim_cmd->add_subcommand("delays", "Photon-arrival delay stream");
  sim_delays->fallthrough();
  sim_delays->add_option("--bias", sim_opts.bias, "bias current (uA), default i_sat");
  sim_delays->add_option("--events", sim_opts.events, "number of events")
      ->capture_default_str();
  add_common(sim_delays, sim_opts.common);
  sim_delays->callback([&] { run_simulate_delays(sim_opts); });

  auto* sim_counts = sim_cmd->add_subcommand("counts", "Poissonian count run");
  sim_counts->fallthrough();
  sim_counts->add_option("--rate", sim_opts.rate, "count rate (cps)")->capture_default_str();
  sim_counts->add_option("--time", sim_opts.integration_time, "integration time (s)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_counts->add_option("--repeats", sim_opts.repeats, "number of repeats")
      ->capture_default_str();
  add_common(sim_counts, sim_opts.common);
  sim_counts->callback([&] { run_simulate_counts(sim_opts); });

  auto* sim_sweep = sim_cmd->add_subcommand("sweep", "Full bias sweep");
  sim_sweep->fallthrough();
  sim_sweep->add_option("--grid", sim_opts.grid,
                        "bias grid lo:hi:n in uA (default [0.8, 1.3] i_sat, 20 points)");
  sim_sweep->add_option("--events-per-point", sim_opts.events_per_point,
                        "delay events per bias point")
      ->capture_default_str();
  sim_sweep->add_option("--bin-width", sim_opts.bin_width, "histogram bin width (ps)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(sim_sweep, sim_opts.common);
  sim_sweep->callback([&] { run_simulate_sweep(sim_opts); });

  auto* sim_wf = sim_cmd->add_subcommand("waveform", "Synthesized detection pulse");
  sim_wf->fallthrough();
  sim_wf->add_option("--amplitude", sim_opts.amplitude, "pulse amplitude (mV)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_wf->add_option("--rise-time", sim_opts.rise_time, "exponential rise time (ps)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_wf->add_option("--noise-rms", sim_opts.noise_rms, "additive noise RMS (mV)")
      ->capture_default_str();
  sim_wf->add_option("--dt", sim_opts.dt, "sample interval (ps)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(sim_wf, sim_opts.common);
  sim_wf->callback([&] { run_simulate_waveform(sim_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kAnalysisError;
  }
  return 0;
}
