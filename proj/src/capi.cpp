// capi.cpp - extern "C" surface over the C++ core

#include "snspdkit/snspdkit.h"

#include <cmath>
#include <cstring>
#include <new>
#include <string>

#include "efficiency.hpp"
#include "histogram.hpp"
#include "io.hpp"
#include "jitter.hpp"
#include "simulator.hpp"
#include "types.hpp"

using namespace snspd;

struct snspd_histogram {
  TimingHistogram value;
};
struct snspd_sweep {
  BiasSweep value;
};
struct snspd_calibration {
  CalibrationChain value;
};
struct snspd_model {
  DetectorModel value;
};
struct snspd_waveform {
  PulseWaveform value;
};

namespace {

thread_local std::string g_last_error;

snspd_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return SNSPD_ERR_INVALID_ARGUMENT;
    case ErrorCode::invariant_violation: return SNSPD_ERR_INVARIANT;
    case ErrorCode::empty_input: return SNSPD_ERR_EMPTY_INPUT;
    case ErrorCode::insufficient_counts: return SNSPD_ERR_INSUFFICIENT_COUNTS;
    case ErrorCode::fit_not_converged: return SNSPD_ERR_FIT_NOT_CONVERGED;
    case ErrorCode::level_not_reached: return SNSPD_ERR_LEVEL_NOT_REACHED;
    case ErrorCode::negative_radicand: return SNSPD_ERR_NEGATIVE_RADICAND;
    case ErrorCode::never_reaches: return SNSPD_ERR_NEVER_REACHES;
    case ErrorCode::empty_region: return SNSPD_ERR_EMPTY_REGION;
    case ErrorCode::too_few_points: return SNSPD_ERR_TOO_FEW_POINTS;
    case ErrorCode::division_domain: return SNSPD_ERR_DIVISION_DOMAIN;
    case ErrorCode::parse_error: return SNSPD_ERR_PARSE;
    case ErrorCode::missing_field: return SNSPD_ERR_MISSING_FIELD;
    case ErrorCode::io_error: return SNSPD_ERR_IO;
  }
  return SNSPD_ERR_INTERNAL;
}

template <typename Fn>
snspd_status wrap(Fn&& fn) {
  try {
    fn();
    return SNSPD_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SNSPD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SNSPD_ERR_INTERNAL;
  }
}

snspd_status null_arg(const char* what) {
  g_last_error = std::string("null pointer: ") + what;
  return SNSPD_ERR_NULL_POINTER;
}

double* copy_out(const std::vector<double>& v) {
  auto* buf = static_cast<double*>(::operator new[](v.size() * sizeof(double)));
  std::memcpy(buf, v.data(), v.size() * sizeof(double));
  return buf;
}

uint64_t* copy_out(const std::vector<std::uint64_t>& v) {
  auto* buf = static_cast<uint64_t*>(::operator new[](v.size() * sizeof(uint64_t)));
  std::memcpy(buf, v.data(), v.size() * sizeof(uint64_t));
  return buf;
}

snspd_sweep_record to_c(const BiasSweepRecord& r) {
  snspd_sweep_record c;
  c.bias_ua = r.bias;
  c.sde = r.sde;
  c.sde_unc = r.sde_unc;
  c.dcr_cps = r.dcr;
  c.jitter_fwhm_ps = r.jitter_fwhm ? *r.jitter_fwhm : std::nan("");
  c.jitter_m20db_ps = r.jitter_m20db ? *r.jitter_m20db : std::nan("");
  return c;
}

BiasSweepRecord from_c(const snspd_sweep_record& c) {
  BiasSweepRecord r;
  r.bias = c.bias_ua;
  r.sde = c.sde;
  r.sde_unc = c.sde_unc;
  r.dcr = c.dcr_cps;
  if (!std::isnan(c.jitter_fwhm_ps)) r.jitter_fwhm = c.jitter_fwhm_ps;
  if (!std::isnan(c.jitter_m20db_ps)) r.jitter_m20db = c.jitter_m20db_ps;
  return r;
}

snspd_gaussian_fit to_c(const GaussianFit& f) {
  snspd_gaussian_fit c;
  c.mu_ps = f.mu;
  c.sigma_ps = f.sigma;
  c.amplitude = f.amplitude;
  c.baseline = f.baseline;
  c.mu_unc_ps = f.mu_unc;
  c.sigma_unc_ps = f.sigma_unc;
  c.fwhm_ps = f.fwhm();
  c.fwhm_unc_ps = f.fwhm_unc();
  c.goodness = f.goodness;
  c.iterations = f.iterations;
  return c;
}

CalibrationChain from_c(const snspd_calibration_params& p) {
  CalibrationChain cal;
  cal.p_m = p.p_m_w;
  cal.r_switch = p.r_switch;
  cal.r_att = {p.r_att[0], p.r_att[1], p.r_att[2]};
  cal.cf = p.cf;
  cal.nlf_high = p.nlf_high;
  cal.nlf_low = p.nlf_low;
  cal.r_pc = p.r_pc;
  cal.wavelength = p.wavelength_nm;
  cal.rel_unc_p_m = p.rel_unc_p_m;
  cal.rel_unc_r_switch = p.rel_unc_r_switch;
  cal.rel_unc_r_att = p.rel_unc_r_att;
  cal.rel_unc_pcr_dcr = p.rel_unc_pcr_dcr;
  return cal;
}

ModelParams from_c(const snspd_model_params& p) {
  ModelParams m;
  m.i_sat = p.i_sat_ua;
  m.sde_max = p.sde_max;
  m.sigmoid_steepness = p.sigmoid_steepness;
  m.sigma_setup = p.sigma_setup_ps;
  m.sigma_noise = p.sigma_noise_ps;
  m.dcr = p.dcr_cps;
  m.intrinsic_sigma_plateau = p.intrinsic_sigma_plateau_ps;
  m.intrinsic_sigma_floor = p.intrinsic_sigma_floor_ps;
  m.inflexion = p.inflexion_normalized;
  m.flatten = p.flatten_normalized;
  m.tail_tau_max = p.tail_tau_max_ps;
  return m;
}

} // namespace

extern "C" {

const char* snspd_version(void) { return "0.1.0"; }

const char* snspd_last_error(void) { return g_last_error.c_str(); }

void snspd_free(void* buffer) { ::operator delete[](buffer); }

/* histograms ------------------------------------------------------- */

snspd_status snspd_histogram_build(const double* delays_ps, size_t n_delays,
                                   double bin_width_ps, snspd_histogram** out) {
  if (!out) return null_arg("out");
  if (!delays_ps && n_delays > 0) return null_arg("delays_ps");
  return wrap([&] {
    *out = new snspd_histogram{build_histogram({delays_ps, n_delays}, bin_width_ps)};
  });
}

snspd_status snspd_histogram_create(double bin_width_ps, double origin_ps,
                                    const uint64_t* counts, size_t n_bins,
                                    snspd_histogram** out) {
  if (!out) return null_arg("out");
  if (!counts && n_bins > 0) return null_arg("counts");
  return wrap([&] {
    TimingHistogram h;
    h.bin_width = bin_width_ps;
    h.origin = origin_ps;
    h.counts.assign(counts, counts + n_bins);
    for (uint64_t c : h.counts) h.total_events += c;
    *out = new snspd_histogram{validate(h)};
  });
}

void snspd_histogram_free(snspd_histogram* hist) { delete hist; }

snspd_status snspd_histogram_bin_width(const snspd_histogram* hist, double* out) {
  if (!hist || !out) return null_arg("hist/out");
  *out = hist->value.bin_width;
  return SNSPD_OK;
}

snspd_status snspd_histogram_origin(const snspd_histogram* hist, double* out) {
  if (!hist || !out) return null_arg("hist/out");
  *out = hist->value.origin;
  return SNSPD_OK;
}

snspd_status snspd_histogram_total_events(const snspd_histogram* hist, uint64_t* out) {
  if (!hist || !out) return null_arg("hist/out");
  *out = hist->value.total_events;
  return SNSPD_OK;
}

snspd_status snspd_histogram_counts(const snspd_histogram* hist, const uint64_t** counts,
                                    size_t* n_bins) {
  if (!hist || !counts || !n_bins) return null_arg("hist/counts/n_bins");
  *counts = hist->value.counts.data();
  *n_bins = hist->value.counts.size();
  return SNSPD_OK;
}

snspd_status snspd_histogram_read_csv(const char* path, snspd_histogram** out) {
  if (!path || !out) return null_arg("path/out");
  return wrap([&] { *out = new snspd_histogram{read_histogram_csv(path)}; });
}

snspd_status snspd_histogram_write_csv(const snspd_histogram* hist, const char* path) {
  if (!hist || !path) return null_arg("hist/path");
  return wrap([&] { write_histogram_csv(path, hist->value); });
}

snspd_status snspd_fit_gaussian(const snspd_histogram* hist, snspd_gaussian_fit* out) {
  if (!hist || !out) return null_arg("hist/out");
  return wrap([&] { *out = to_c(fit_gaussian(hist->value)); });
}

snspd_status snspd_fit_emg(const snspd_histogram* hist, snspd_emg_fit* out) {
  if (!hist || !out) return null_arg("hist/out");
  return wrap([&] {
    EmgFit f = fit_exp_modified_gaussian(hist->value);
    out->mu_ps = f.mu;
    out->sigma_ps = f.sigma;
    out->tau_ps = f.tau;
    out->amplitude = f.amplitude;
    out->baseline = f.baseline;
    out->goodness = f.goodness;
    out->iterations = f.iterations;
  });
}

snspd_status snspd_width_at_level(const snspd_histogram* hist, double level,
                                  const snspd_gaussian_fit* fit, snspd_width* out) {
  if (!hist || !out) return null_arg("hist/out");
  return wrap([&] {
    WidthMeasure w = fit ? width_at_level(hist->value, level, fit->baseline)
                         : width_at_level(hist->value, level);
    out->level = w.level;
    out->width_ps = w.width;
    out->left_cross_ps = w.left_cross;
    out->right_cross_ps = w.right_cross;
  });
}

snspd_status snspd_tail_residue_at_level(const snspd_histogram* hist,
                                         const snspd_gaussian_fit* fit, double level,
                                         snspd_tail_residue* out) {
  if (!hist || !fit || !out) return null_arg("hist/fit/out");
  return wrap([&] {
    GaussianFit g;
    g.mu = fit->mu_ps;
    g.sigma = fit->sigma_ps;
    g.amplitude = fit->amplitude;
    g.baseline = fit->baseline;
    TailResidue r = tail_residue(hist->value, g, level);
    out->level = r.level;
    out->measured_width_ps = r.measured_width;
    out->gaussian_width_ps = r.gaussian_width;
    out->residue_ps = r.residue;
  });
}

/* jitter budget ----------------------------------------------------- */

snspd_status snspd_setup_jitter(double pulse_fwhm_ps, double tcspc_fwhm_ps,
                                double* out_ps) {
  if (!out_ps) return null_arg("out_ps");
  return wrap([&] { *out_ps = setup_jitter(pulse_fwhm_ps, tcspc_fwhm_ps); });
}

snspd_status snspd_noise_jitter(double sigma_rms_mv, double slew_rate_mv_ps,
                                double* out_ps) {
  if (!out_ps) return null_arg("out_ps");
  return wrap([&] { *out_ps = noise_jitter(sigma_rms_mv, slew_rate_mv_ps); });
}

snspd_status snspd_noise_jitter_u(double sigma_rms_mv, double sigma_rms_unc_mv,
                                  double slew_rate_mv_ps, double slew_rate_unc_mv_ps,
                                  double* out_ps, double* out_unc_ps) {
  if (!out_ps || !out_unc_ps) return null_arg("out_ps/out_unc_ps");
  return wrap([&] {
    ValueUnc v = noise_jitter(NoiseJitterInput{{sigma_rms_mv, sigma_rms_unc_mv},
                                               {slew_rate_mv_ps, slew_rate_unc_mv_ps}});
    *out_ps = v.value;
    *out_unc_ps = v.unc;
  });
}

snspd_status snspd_intrinsic_jitter(double j_sys_ps, double j_noise_ps, double j_setup_ps,
                                    double* out_ps) {
  if (!out_ps) return null_arg("out_ps");
  return wrap([&] { *out_ps = intrinsic_jitter(j_sys_ps, j_noise_ps, j_setup_ps); });
}

snspd_status snspd_intrinsic_jitter_u(double j_sys_ps, double j_sys_unc_ps,
                                      double j_noise_ps, double j_noise_unc_ps,
                                      double j_setup_ps, double j_setup_unc_ps,
                                      double* out_ps, double* out_unc_ps,
                                      int* out_clamped) {
  if (!out_ps || !out_unc_ps || !out_clamped)
    return null_arg("out_ps/out_unc_ps/out_clamped");
  return wrap([&] {
    IntrinsicJitter r = intrinsic_jitter(ValueUnc{j_sys_ps, j_sys_unc_ps},
                                         ValueUnc{j_noise_ps, j_noise_unc_ps},
                                         ValueUnc{j_setup_ps, j_setup_unc_ps});
    *out_ps = r.j_int.value;
    *out_unc_ps = r.j_int.unc;
    *out_clamped = r.clamped ? 1 : 0;
  });
}

snspd_status snspd_compose_budget(double j_noise_ps, double j_noise_unc_ps,
                                  double j_setup_ps, double j_setup_unc_ps,
                                  double j_int_ps, double j_int_unc_ps,
                                  snspd_jitter_budget* out) {
  if (!out) return null_arg("out");
  return wrap([&] {
    JitterBudget b = compose_budget({j_noise_ps, j_noise_unc_ps},
                                    {j_setup_ps, j_setup_unc_ps}, {j_int_ps, j_int_unc_ps});
    out->j_sys_ps = b.j_sys.value;
    out->j_sys_unc_ps = b.j_sys.unc;
    out->j_noise_ps = b.j_noise.value;
    out->j_noise_unc_ps = b.j_noise.unc;
    out->j_setup_ps = b.j_setup.value;
    out->j_setup_unc_ps = b.j_setup.unc;
    out->j_int_ps = b.j_int.value;
    out->j_int_unc_ps = b.j_int.unc;
    out->intrinsic_clamped = b.intrinsic_clamped ? 1 : 0;
  });
}

/* waveforms ---------------------------------------------------------- */

snspd_status snspd_waveform_create(double sample_interval_ps, const double* samples_mv,
                                   size_t n_samples, snspd_waveform** out) {
  if (!out) return null_arg("out");
  if (!samples_mv && n_samples > 0) return null_arg("samples_mv");
  return wrap([&] {
    PulseWaveform w;
    w.sample_interval = sample_interval_ps;
    w.samples.assign(samples_mv, samples_mv + n_samples);
    *out = new snspd_waveform{validate(w)};
  });
}

void snspd_waveform_free(snspd_waveform* waveform) { delete waveform; }

snspd_status snspd_waveform_samples(const snspd_waveform* waveform, const double** samples,
                                    size_t* n_samples) {
  if (!waveform || !samples || !n_samples) return null_arg("waveform/samples/n_samples");
  *samples = waveform->value.samples.data();
  *n_samples = waveform->value.samples.size();
  return SNSPD_OK;
}

snspd_status snspd_waveform_sample_interval(const snspd_waveform* waveform,
                                            double* out_ps) {
  if (!waveform || !out_ps) return null_arg("waveform/out_ps");
  *out_ps = waveform->value.sample_interval;
  return SNSPD_OK;
}

snspd_status snspd_waveform_read_csv(const char* path, snspd_waveform** out) {
  if (!path || !out) return null_arg("path/out");
  return wrap([&] { *out = new snspd_waveform{read_waveform_csv(path)}; });
}

snspd_status snspd_waveform_write_csv(const snspd_waveform* waveform, const char* path) {
  if (!waveform || !path) return null_arg("waveform/path");
  return wrap([&] { write_waveform_csv(path, waveform->value); });
}

snspd_status snspd_slew_rate(const snspd_waveform* waveform, int smoothing_samples,
                             double* out_mv_per_ps) {
  if (!waveform || !out_mv_per_ps) return null_arg("waveform/out");
  return wrap([&] { *out_mv_per_ps = slew_rate(waveform->value, smoothing_samples); });
}

snspd_status snspd_pre_edge_rms(const snspd_waveform* waveform, double* out_mv) {
  if (!waveform || !out_mv) return null_arg("waveform/out");
  return wrap([&] { *out_mv = pre_edge_rms(waveform->value); });
}

/* efficiency --------------------------------------------------------- */

snspd_status snspd_calibration_create(const snspd_calibration_params* params,
                                      snspd_calibration** out) {
  if (!params || !out) return null_arg("params/out");
  return wrap([&] { *out = new snspd_calibration{validate(from_c(*params))}; });
}

snspd_status snspd_calibration_read(const char* path, snspd_calibration** out) {
  if (!path || !out) return null_arg("path/out");
  return wrap([&] { *out = new snspd_calibration{read_calibration(path)}; });
}

snspd_status snspd_calibration_get(const snspd_calibration* cal,
                                   snspd_calibration_params* out) {
  if (!cal || !out) return null_arg("cal/out");
  const CalibrationChain& c = cal->value;
  out->p_m_w = c.p_m;
  out->r_switch = c.r_switch;
  out->r_att[0] = c.r_att[0];
  out->r_att[1] = c.r_att[1];
  out->r_att[2] = c.r_att[2];
  out->cf = c.cf;
  out->nlf_high = c.nlf_high;
  out->nlf_low = c.nlf_low;
  out->r_pc = c.r_pc;
  out->wavelength_nm = c.wavelength;
  out->rel_unc_p_m = c.rel_unc_p_m;
  out->rel_unc_r_switch = c.rel_unc_r_switch;
  out->rel_unc_r_att = c.rel_unc_r_att;
  out->rel_unc_pcr_dcr = c.rel_unc_pcr_dcr;
  return SNSPD_OK;
}

void snspd_calibration_free(snspd_calibration* cal) { delete cal; }

snspd_status snspd_photon_energy(double wavelength_nm, double* out_joule) {
  if (!out_joule) return null_arg("out_joule");
  return wrap([&] { *out_joule = photon_energy(wavelength_nm); });
}

snspd_status snspd_photon_flux(const snspd_calibration* cal, double* out_per_second) {
  if (!cal || !out_per_second) return null_arg("cal/out");
  return wrap([&] { *out_per_second = photon_flux(cal->value); });
}

snspd_status snspd_sde(double pcr_cps, double dcr_cps, double n_gamma,
                       double* out_fraction) {
  if (!out_fraction) return null_arg("out_fraction");
  return wrap([&] { *out_fraction = sde(pcr_cps, dcr_cps, n_gamma); });
}

snspd_status snspd_sde_uncertainty(double rel_pcr_dcr, double rel_pm, double rel_rswitch,
                                   double rel_ratt, snspd_uncertainty_budget* out) {
  if (!out) return null_arg("out");
  return wrap([&] {
    UncertaintyBudget b = sde_uncertainty(rel_pcr_dcr, rel_pm, rel_rswitch, rel_ratt);
    out->rel_pcr_dcr = b.rel_pcr_dcr;
    out->rel_pm = b.rel_pm;
    out->rel_rswitch = b.rel_rswitch;
    out->rel_ratt = b.rel_ratt;
    out->rel_total = b.rel_total;
  });
}

snspd_status snspd_pcr_dcr_uncertainty(const double* samples, size_t n_samples,
                                       int n_plateau_points, double* out_rel) {
  if (!out_rel) return null_arg("out_rel");
  if (!samples && n_samples > 0) return null_arg("samples");
  return wrap([&] {
    *out_rel = pcr_dcr_uncertainty({samples, n_samples}, n_plateau_points);
  });
}

/* bias sweeps --------------------------------------------------------- */

snspd_status snspd_sweep_create(const snspd_sweep_record* records, size_t n_records,
                                snspd_sweep** out) {
  if (!out) return null_arg("out");
  if (!records && n_records > 0) return null_arg("records");
  return wrap([&] {
    BiasSweep s;
    s.records.reserve(n_records);
    for (size_t i = 0; i < n_records; ++i) s.records.push_back(from_c(records[i]));
    *out = new snspd_sweep{validate(s)};
  });
}

void snspd_sweep_free(snspd_sweep* sweep) { delete sweep; }

snspd_status snspd_sweep_size(const snspd_sweep* sweep, size_t* out) {
  if (!sweep || !out) return null_arg("sweep/out");
  *out = sweep->value.size();
  return SNSPD_OK;
}

snspd_status snspd_sweep_record_at(const snspd_sweep* sweep, size_t index,
                                   snspd_sweep_record* out) {
  if (!sweep || !out) return null_arg("sweep/out");
  if (index >= sweep->value.size()) {
    g_last_error = "sweep index out of range";
    return SNSPD_ERR_INVALID_ARGUMENT;
  }
  *out = to_c(sweep->value.records[index]);
  return SNSPD_OK;
}

snspd_status snspd_sweep_read_csv(const char* path, snspd_sweep** out) {
  if (!path || !out) return null_arg("path/out");
  return wrap([&] { *out = new snspd_sweep{read_sweep_csv(path)}; });
}

snspd_status snspd_sweep_write_csv(const snspd_sweep* sweep, const char* path) {
  if (!sweep || !path) return null_arg("sweep/path");
  return wrap([&] { write_sweep_csv(path, sweep->value); });
}

snspd_status snspd_saturation_current(const snspd_sweep* sweep, double* out_ua) {
  if (!sweep || !out_ua) return null_arg("sweep/out");
  return wrap([&] { *out_ua = saturation_current(sweep->value); });
}

snspd_status snspd_plateau_average(const snspd_sweep* sweep, double region_lo_ua,
                                   double region_hi_ua, double cal_rel_total,
                                   snspd_plateau_stats* out) {
  if (!sweep || !out) return null_arg("sweep/out");
  return wrap([&] {
    PlateauStats s = plateau_average(sweep->value, {region_lo_ua, region_hi_ua},
                                     cal_rel_total);
    out->sde_mean = s.sde_mean;
    out->sde_rel_unc = s.sde_rel_unc;
    out->sde_abs_unc = s.sde_mean * s.sde_rel_unc;
    out->n_points = s.n_points;
    out->max_rel_deviation = s.max_rel_deviation;
  });
}

snspd_status snspd_normalize_bias(const snspd_sweep* sweep, double i_sat_ua,
                                  snspd_sweep** out) {
  if (!sweep || !out) return null_arg("sweep/out");
  return wrap([&] { *out = new snspd_sweep{normalize_bias(sweep->value, i_sat_ua)}; });
}

snspd_status snspd_jitter_inflexion(const snspd_sweep* sweep, snspd_inflexion* out) {
  if (!sweep || !out) return null_arg("sweep/out");
  return wrap([&] {
    InflexionResult r = jitter_inflexion(sweep->value);
    out->normalized_bias = r.normalized_bias;
    out->slope_ps = r.slope;
    out->no_descent = r.no_descent ? 1 : 0;
  });
}

/* simulator ----------------------------------------------------------- */

void snspd_model_params_defaults(snspd_model_params* out) {
  if (!out) return;
  ModelParams p;
  out->i_sat_ua = p.i_sat;
  out->sde_max = p.sde_max;
  out->sigmoid_steepness = p.sigmoid_steepness;
  out->sigma_setup_ps = p.sigma_setup;
  out->sigma_noise_ps = p.sigma_noise;
  out->dcr_cps = p.dcr;
  out->intrinsic_sigma_plateau_ps = p.intrinsic_sigma_plateau;
  out->intrinsic_sigma_floor_ps = p.intrinsic_sigma_floor;
  out->inflexion_normalized = p.inflexion;
  out->flatten_normalized = p.flatten;
  out->tail_tau_max_ps = p.tail_tau_max;
}

snspd_status snspd_model_create(const snspd_model_params* params, snspd_model** out) {
  if (!params || !out) return null_arg("params/out");
  return wrap([&] { *out = new snspd_model{build_model(from_c(*params))}; });
}

snspd_status snspd_model_read(const char* path, snspd_model** out) {
  if (!path || !out) return null_arg("path/out");
  return wrap([&] { *out = new snspd_model{read_model(path)}; });
}

void snspd_model_free(snspd_model* model) { delete model; }

snspd_status snspd_model_sde(const snspd_model* model, double bias_ua,
                             double* out_fraction) {
  if (!model || !out_fraction) return null_arg("model/out");
  return wrap([&] { *out_fraction = model_sde(model->value, bias_ua); });
}

snspd_status snspd_model_i_sat(const snspd_model* model, double* out_ua) {
  if (!model || !out_ua) return null_arg("model/out");
  *out_ua = model->value.i_sat;
  return SNSPD_OK;
}

snspd_status snspd_model_dcr(const snspd_model* model, double* out_cps) {
  if (!model || !out_cps) return null_arg("model/out");
  *out_cps = model->value.dcr;
  return SNSPD_OK;
}

snspd_status snspd_simulate_delays(const snspd_model* model, double bias_ua,
                                   uint64_t n_events, uint64_t seed, double** out_delays,
                                   size_t* out_n) {
  if (!model || !out_delays || !out_n) return null_arg("model/out");
  return wrap([&] {
    SimulationConfig cfg;
    cfg.seed = seed;
    cfg.n_events = n_events;
    cfg.bias = bias_ua;
    std::vector<double> d = draw_delays(model->value, cfg);
    *out_delays = copy_out(d);
    *out_n = d.size();
  });
}

snspd_status snspd_simulate_count_run(double rate_cps, double integration_time_s,
                                      size_t n_repeats, uint64_t seed,
                                      uint64_t** out_counts, size_t* out_n) {
  if (!out_counts || !out_n) return null_arg("out");
  return wrap([&] {
    std::vector<std::uint64_t> c =
        simulate_count_run(rate_cps, integration_time_s, n_repeats, seed);
    *out_counts = copy_out(c);
    *out_n = c.size();
  });
}

snspd_status snspd_simulate_sweep(const snspd_model* model, const double* bias_grid_ua,
                                  size_t n_points, uint64_t events_per_point, uint64_t seed,
                                  double bin_width_ps, snspd_sweep** out) {
  if (!model || !out) return null_arg("model/out");
  if (!bias_grid_ua && n_points > 0) return null_arg("bias_grid_ua");
  return wrap([&] {
    *out = new snspd_sweep{simulate_sweep(model->value, {bias_grid_ua, n_points},
                                          events_per_point, seed, bin_width_ps)};
  });
}

snspd_status snspd_synthesize_waveform(double amplitude_mv, double rise_time_ps,
                                       double sigma_rms_mv, double sample_interval_ps,
                                       uint64_t seed, snspd_waveform** out) {
  if (!out) return null_arg("out");
  return wrap([&] {
    *out = new snspd_waveform{synthesize_waveform(amplitude_mv, rise_time_ps, sigma_rms_mv,
                                                  sample_interval_ps, seed)};
  });
}

/* files ---------------------------------------------------------------- */

snspd_status snspd_timestamps_read(const char* path, double** out_values, size_t* out_n) {
  if (!path || !out_values || !out_n) return null_arg("path/out");
  return wrap([&] {
    std::vector<double> v = read_timestamps(path);
    *out_values = copy_out(v);
    *out_n = v.size();
  });
}

snspd_status snspd_timestamps_write(const char* path, const double* values,
                                    size_t n_values) {
  if (!path) return null_arg("path");
  if (!values && n_values > 0) return null_arg("values");
  return wrap([&] { write_timestamps(path, {values, n_values}); });
}

} /* extern "C" */
