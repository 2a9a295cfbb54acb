/* snspdkit.h - C API of the single-photon-detector characterization toolkit
 *
 * The library analyses raw TCSPC timestamp streams, count logs and
 * calibration records from superconducting nanowire single-photon
 * detectors: timing histograms with Gaussian and exponential-tail fits,
 * jitter budgets (system / noise / setup / intrinsic in quadrature),
 * system detection efficiency with full uncertainty propagation, bias
 * sweep descriptors, and a seeded Monte Carlo simulator used as the
 * test oracle for all of it.
 *
 * Conventions:
 *   - every function returns snspd_status; results go to out-params
 *   - objects behind opaque handles are freed with their _free function
 *   - arrays allocated by the library are released with snspd_free
 *   - snspd_last_error() returns a thread-local message for the most
 *     recent failure on the calling thread
 *   - units are fixed: time ps, bias uA, voltage mV, rates cps,
 *     power W, wavelength nm, efficiencies as fractions in [0,1]
 */
#ifndef SNSPDKIT_H
#define SNSPDKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SNSPD_BUILD)
#define SNSPD_API __declspec(dllexport)
#else
#define SNSPD_API __declspec(dllimport)
#endif
#else
#define SNSPD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define SNSPD_VERSION_MAJOR 0
#define SNSPD_VERSION_MINOR 1
#define SNSPD_VERSION_PATCH 0

typedef enum snspd_status {
  SNSPD_OK = 0,
  SNSPD_ERR_INVALID_ARGUMENT = 1,
  SNSPD_ERR_INVARIANT = 2,
  SNSPD_ERR_EMPTY_INPUT = 3,
  SNSPD_ERR_INSUFFICIENT_COUNTS = 4,
  SNSPD_ERR_FIT_NOT_CONVERGED = 5,
  SNSPD_ERR_LEVEL_NOT_REACHED = 6,
  SNSPD_ERR_NEGATIVE_RADICAND = 7,
  SNSPD_ERR_NEVER_REACHES = 8,
  SNSPD_ERR_EMPTY_REGION = 9,
  SNSPD_ERR_TOO_FEW_POINTS = 10,
  SNSPD_ERR_DIVISION_DOMAIN = 11,
  SNSPD_ERR_PARSE = 12,
  SNSPD_ERR_MISSING_FIELD = 13,
  SNSPD_ERR_IO = 14,
  SNSPD_ERR_NULL_POINTER = 15,
  SNSPD_ERR_INTERNAL = 16
} snspd_status;

/* opaque handles */
typedef struct snspd_histogram snspd_histogram;
typedef struct snspd_sweep snspd_sweep;
typedef struct snspd_calibration snspd_calibration;
typedef struct snspd_model snspd_model;
typedef struct snspd_waveform snspd_waveform;

SNSPD_API const char* snspd_version(void);
SNSPD_API const char* snspd_last_error(void);
SNSPD_API void snspd_free(void* buffer);

/* ------------------------------------------------------------------ */
/* histograms                                                          */

SNSPD_API snspd_status snspd_histogram_build(const double* delays_ps, size_t n_delays,
                                             double bin_width_ps, snspd_histogram** out);
SNSPD_API snspd_status snspd_histogram_create(double bin_width_ps, double origin_ps,
                                              const uint64_t* counts, size_t n_bins,
                                              snspd_histogram** out);
SNSPD_API void snspd_histogram_free(snspd_histogram* hist);

SNSPD_API snspd_status snspd_histogram_bin_width(const snspd_histogram* hist, double* out);
SNSPD_API snspd_status snspd_histogram_origin(const snspd_histogram* hist, double* out);
SNSPD_API snspd_status snspd_histogram_total_events(const snspd_histogram* hist,
                                                    uint64_t* out);
SNSPD_API snspd_status snspd_histogram_counts(const snspd_histogram* hist,
                                              const uint64_t** counts, size_t* n_bins);

SNSPD_API snspd_status snspd_histogram_read_csv(const char* path, snspd_histogram** out);
SNSPD_API snspd_status snspd_histogram_write_csv(const snspd_histogram* hist,
                                                 const char* path);

/* peak-shape metrics */

typedef struct snspd_gaussian_fit {
  double mu_ps;
  double sigma_ps;
  double amplitude;
  double baseline;
  double mu_unc_ps;
  double sigma_unc_ps;
  double fwhm_ps;
  double fwhm_unc_ps;
  double goodness; /* weighted residual sum of squares per bin */
  int iterations;
} snspd_gaussian_fit;

typedef struct snspd_emg_fit {
  double mu_ps;
  double sigma_ps;
  double tau_ps;
  double amplitude;
  double baseline;
  double goodness;
  int iterations;
} snspd_emg_fit;

typedef struct snspd_width {
  double level;
  double width_ps;
  double left_cross_ps;
  double right_cross_ps;
} snspd_width;

typedef struct snspd_tail_residue {
  double level;
  double measured_width_ps;
  double gaussian_width_ps;
  double residue_ps;
} snspd_tail_residue;

SNSPD_API snspd_status snspd_fit_gaussian(const snspd_histogram* hist,
                                          snspd_gaussian_fit* out);
SNSPD_API snspd_status snspd_fit_emg(const snspd_histogram* hist, snspd_emg_fit* out);

/* Pass `fit` to use the fitted baseline, or NULL for the lowest-decile
 * median baseline. */
SNSPD_API snspd_status snspd_width_at_level(const snspd_histogram* hist, double level,
                                            const snspd_gaussian_fit* fit,
                                            snspd_width* out);
SNSPD_API snspd_status snspd_tail_residue_at_level(const snspd_histogram* hist,
                                                   const snspd_gaussian_fit* fit,
                                                   double level, snspd_tail_residue* out);

/* ------------------------------------------------------------------ */
/* jitter budget                                                       */

typedef struct snspd_jitter_budget {
  double j_sys_ps, j_sys_unc_ps;
  double j_noise_ps, j_noise_unc_ps;
  double j_setup_ps, j_setup_unc_ps;
  double j_int_ps, j_int_unc_ps;
  int intrinsic_clamped; /* radicand was negative within uncertainty */
} snspd_jitter_budget;

SNSPD_API snspd_status snspd_setup_jitter(double pulse_fwhm_ps, double tcspc_fwhm_ps,
                                          double* out_ps);
SNSPD_API snspd_status snspd_noise_jitter(double sigma_rms_mv, double slew_rate_mv_ps,
                                          double* out_ps);
SNSPD_API snspd_status snspd_noise_jitter_u(double sigma_rms_mv, double sigma_rms_unc_mv,
                                            double slew_rate_mv_ps,
                                            double slew_rate_unc_mv_ps, double* out_ps,
                                            double* out_unc_ps);
SNSPD_API snspd_status snspd_intrinsic_jitter(double j_sys_ps, double j_noise_ps,
                                              double j_setup_ps, double* out_ps);
SNSPD_API snspd_status snspd_intrinsic_jitter_u(double j_sys_ps, double j_sys_unc_ps,
                                                double j_noise_ps, double j_noise_unc_ps,
                                                double j_setup_ps, double j_setup_unc_ps,
                                                double* out_ps, double* out_unc_ps,
                                                int* out_clamped);
SNSPD_API snspd_status snspd_compose_budget(double j_noise_ps, double j_noise_unc_ps,
                                            double j_setup_ps, double j_setup_unc_ps,
                                            double j_int_ps, double j_int_unc_ps,
                                            snspd_jitter_budget* out);

/* ------------------------------------------------------------------ */
/* waveforms                                                           */

SNSPD_API snspd_status snspd_waveform_create(double sample_interval_ps,
                                             const double* samples_mv, size_t n_samples,
                                             snspd_waveform** out);
SNSPD_API void snspd_waveform_free(snspd_waveform* waveform);
SNSPD_API snspd_status snspd_waveform_samples(const snspd_waveform* waveform,
                                              const double** samples, size_t* n_samples);
SNSPD_API snspd_status snspd_waveform_sample_interval(const snspd_waveform* waveform,
                                                      double* out_ps);
SNSPD_API snspd_status snspd_waveform_read_csv(const char* path, snspd_waveform** out);
SNSPD_API snspd_status snspd_waveform_write_csv(const snspd_waveform* waveform,
                                                const char* path);

/* Maximum adjacent-sample difference quotient on the rising edge;
 * negative-polarity pulses are sign-flipped first. smoothing_samples
 * is an optional boxcar width, 0 = off. */
SNSPD_API snspd_status snspd_slew_rate(const snspd_waveform* waveform,
                                       int smoothing_samples, double* out_mv_per_ps);
/* RMS of the flat region before the rising edge. */
SNSPD_API snspd_status snspd_pre_edge_rms(const snspd_waveform* waveform, double* out_mv);

/* ------------------------------------------------------------------ */
/* efficiency                                                          */

typedef struct snspd_calibration_params {
  double p_m_w;
  double r_switch;
  double r_att[3];
  double cf;
  double nlf_high;
  double nlf_low;
  double r_pc;
  double wavelength_nm;
  double rel_unc_p_m;
  double rel_unc_r_switch;
  double rel_unc_r_att;
  double rel_unc_pcr_dcr;
} snspd_calibration_params;

typedef struct snspd_uncertainty_budget {
  double rel_pcr_dcr;
  double rel_pm;
  double rel_rswitch;
  double rel_ratt;
  double rel_total;
} snspd_uncertainty_budget;

SNSPD_API snspd_status snspd_calibration_create(const snspd_calibration_params* params,
                                                snspd_calibration** out);
SNSPD_API snspd_status snspd_calibration_read(const char* path, snspd_calibration** out);
SNSPD_API snspd_status snspd_calibration_get(const snspd_calibration* cal,
                                             snspd_calibration_params* out);
SNSPD_API void snspd_calibration_free(snspd_calibration* cal);

SNSPD_API snspd_status snspd_photon_energy(double wavelength_nm, double* out_joule);
SNSPD_API snspd_status snspd_photon_flux(const snspd_calibration* cal,
                                         double* out_per_second);
SNSPD_API snspd_status snspd_sde(double pcr_cps, double dcr_cps, double n_gamma,
                                 double* out_fraction);
SNSPD_API snspd_status snspd_sde_uncertainty(double rel_pcr_dcr, double rel_pm,
                                             double rel_rswitch, double rel_ratt,
                                             snspd_uncertainty_budget* out);
SNSPD_API snspd_status snspd_pcr_dcr_uncertainty(const double* samples, size_t n_samples,
                                                 int n_plateau_points, double* out_rel);

/* ------------------------------------------------------------------ */
/* bias sweeps                                                         */

/* jitter fields may be NAN to mark absent values */
typedef struct snspd_sweep_record {
  double bias_ua; /* normalized bias after snspd_normalize_bias */
  double sde;
  double sde_unc;
  double dcr_cps;
  double jitter_fwhm_ps;
  double jitter_m20db_ps;
} snspd_sweep_record;

typedef struct snspd_plateau_stats {
  double sde_mean;
  double sde_rel_unc;
  double sde_abs_unc;
  int n_points;
  double max_rel_deviation; /* advisory flatness diagnostic */
} snspd_plateau_stats;

typedef struct snspd_inflexion {
  double normalized_bias;
  double slope_ps; /* per unit normalized bias */
  int no_descent;
} snspd_inflexion;

SNSPD_API snspd_status snspd_sweep_create(const snspd_sweep_record* records,
                                          size_t n_records, snspd_sweep** out);
SNSPD_API void snspd_sweep_free(snspd_sweep* sweep);
SNSPD_API snspd_status snspd_sweep_size(const snspd_sweep* sweep, size_t* out);
SNSPD_API snspd_status snspd_sweep_record_at(const snspd_sweep* sweep, size_t index,
                                             snspd_sweep_record* out);
SNSPD_API snspd_status snspd_sweep_read_csv(const char* path, snspd_sweep** out);
SNSPD_API snspd_status snspd_sweep_write_csv(const snspd_sweep* sweep, const char* path);

SNSPD_API snspd_status snspd_saturation_current(const snspd_sweep* sweep, double* out_ua);
SNSPD_API snspd_status snspd_plateau_average(const snspd_sweep* sweep, double region_lo_ua,
                                             double region_hi_ua, double cal_rel_total,
                                             snspd_plateau_stats* out);
SNSPD_API snspd_status snspd_normalize_bias(const snspd_sweep* sweep, double i_sat_ua,
                                            snspd_sweep** out);
SNSPD_API snspd_status snspd_jitter_inflexion(const snspd_sweep* sweep,
                                              snspd_inflexion* out);

/* ------------------------------------------------------------------ */
/* simulator                                                           */

typedef struct snspd_model_params {
  double i_sat_ua;
  double sde_max;
  double sigmoid_steepness;
  double sigma_setup_ps;
  double sigma_noise_ps;
  double dcr_cps;
  double intrinsic_sigma_plateau_ps;
  double intrinsic_sigma_floor_ps;
  double inflexion_normalized; /* steepest jitter descent, in units of i_sat */
  double flatten_normalized;   /* jitter flattens beyond this */
  double tail_tau_max_ps;
} snspd_model_params;

SNSPD_API void snspd_model_params_defaults(snspd_model_params* out);
SNSPD_API snspd_status snspd_model_create(const snspd_model_params* params,
                                          snspd_model** out);
SNSPD_API snspd_status snspd_model_read(const char* path, snspd_model** out);
SNSPD_API void snspd_model_free(snspd_model* model);
SNSPD_API snspd_status snspd_model_sde(const snspd_model* model, double bias_ua,
                                       double* out_fraction);
SNSPD_API snspd_status snspd_model_i_sat(const snspd_model* model, double* out_ua);
SNSPD_API snspd_status snspd_model_dcr(const snspd_model* model, double* out_cps);

/* Delay stream in ps; release with snspd_free. */
SNSPD_API snspd_status snspd_simulate_delays(const snspd_model* model, double bias_ua,
                                             uint64_t n_events, uint64_t seed,
                                             double** out_delays, size_t* out_n);
SNSPD_API snspd_status snspd_simulate_count_run(double rate_cps, double integration_time_s,
                                                size_t n_repeats, uint64_t seed,
                                                uint64_t** out_counts, size_t* out_n);
SNSPD_API snspd_status snspd_simulate_sweep(const snspd_model* model,
                                            const double* bias_grid_ua, size_t n_points,
                                            uint64_t events_per_point, uint64_t seed,
                                            double bin_width_ps, snspd_sweep** out);
SNSPD_API snspd_status snspd_synthesize_waveform(double amplitude_mv, double rise_time_ps,
                                                 double sigma_rms_mv,
                                                 double sample_interval_ps, uint64_t seed,
                                                 snspd_waveform** out);

/* ------------------------------------------------------------------ */
/* files                                                               */

/* One delay (ps) per line, '#' header lines skipped; release the
 * buffer with snspd_free. Also used for count-sample logs. */
SNSPD_API snspd_status snspd_timestamps_read(const char* path, double** out_values,
                                             size_t* out_n);
SNSPD_API snspd_status snspd_timestamps_write(const char* path, const double* values,
                                              size_t n_values);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SNSPDKIT_H */
