// simulator.cpp - delay streams, count runs, sweeps, waveforms

#include "simulator.hpp"

#include <cmath>
#include <string>

#include "histogram.hpp"
#include "random.hpp"

namespace snspd {

namespace {

// substream purposes
constexpr std::uint64_t kPurposeDelays = 1;
constexpr std::uint64_t kPurposeCounts = 2;
constexpr std::uint64_t kPurposeWaveform = 3;

double smoothstep01(double u) {
  if (u <= 0) return 0.0;
  if (u >= 1) return 1.0;
  return u * u * (3.0 - 2.0 * u);
}

void require_config(const SimulationConfig& cfg) {
  if (cfg.n_events == 0)
    fail(ErrorCode::invariant_violation, "SimulationConfig: n_events > 0");
  if (cfg.laser_period && !(*cfg.laser_period > 0))
    fail(ErrorCode::invariant_violation, "SimulationConfig: laser_period > 0");
}

std::vector<double> draw_delay_stream(const DetectorModel& model, double bias,
                                      std::uint64_t n, RandomStream rng) {
  const double sigma_int = model.sigma_intrinsic(bias);
  const double tau = model.tail_tau(bias);
  std::vector<double> delays(n);
  for (auto& d : delays) {
    d = rng.normal(model.sigma_setup) + rng.normal(model.sigma_noise_equivalent) +
        rng.normal(sigma_int) + rng.exponential(tau);
  }
  return delays;
}

} // namespace

DetectorModel build_model(const ModelParams& p) {
  if (!(p.i_sat > 0)) fail(ErrorCode::invalid_argument, "build_model: i_sat must be > 0");
  if (!(p.flatten > p.inflexion))
    fail(ErrorCode::invalid_argument, "build_model: flatten must lie above the inflexion");
  if (!(p.intrinsic_sigma_plateau >= p.intrinsic_sigma_floor))
    fail(ErrorCode::invalid_argument,
         "build_model: plateau sigma must be >= floor sigma");

  DetectorModel m;
  m.i_sat = p.i_sat;
  m.sde_max = p.sde_max;
  m.sigmoid_steepness = p.sigmoid_steepness;
  m.sigma_setup = p.sigma_setup;
  m.sigma_noise_equivalent = p.sigma_noise;
  m.dcr = p.dcr;

  // Build sigma_int(x) from a target system-jitter curve whose
  // steepest descent sits exactly at the configured inflexion: a
  // smoothstep in FWHM between the plateau and floor levels over the
  // window [2*inflexion - flatten, flatten], converted back through
  // the quadrature.
  const double c2 = p.sigma_setup * p.sigma_setup + p.sigma_noise * p.sigma_noise;
  const double fwhm_plateau =
      kFwhmPerSigma * std::sqrt(c2 + p.intrinsic_sigma_plateau * p.intrinsic_sigma_plateau);
  const double fwhm_floor =
      kFwhmPerSigma * std::sqrt(c2 + p.intrinsic_sigma_floor * p.intrinsic_sigma_floor);
  const double start = 2.0 * p.inflexion - p.flatten;

  std::vector<double> xs, sig, tau;
  const double x_lo = 0.4, x_hi = 1.6, dx = 0.005;
  for (double x = x_lo; x <= x_hi + 1e-12; x += dx) {
    double u = (p.flatten - x) / (p.flatten - start);
    double s = smoothstep01(u);
    double fwhm = fwhm_floor + (fwhm_plateau - fwhm_floor) * s;
    double si2 = fwhm * fwhm / (kFwhmPerSigma * kFwhmPerSigma) - c2;
    xs.push_back(x * p.i_sat);
    sig.push_back(std::sqrt(std::max(0.0, si2)));
    tau.push_back(p.tail_tau_max * s);
  }
  m.sigma_intrinsic = Table(xs, sig);
  m.tail_tau = Table(std::move(xs), std::move(tau));
  return validate(m);
}

DetectorModel default_model() { return build_model(ModelParams{}); }

double model_sde(const DetectorModel& model, double bias_ua) {
  // logistic in normalized bias, 90% point pinned to i_sat
  double k = model.sigmoid_steepness;
  double center = 1.0 - std::log(9.0) / k;
  double x = bias_ua / model.i_sat;
  return model.sde_max / (1.0 + std::exp(-k * (x - center)));
}

std::vector<double> draw_delays(const DetectorModel& model, const SimulationConfig& cfg) {
  validate(model);
  require_config(cfg);
  return draw_delay_stream(model, cfg.bias, cfg.n_events,
                           RandomStream::substream(cfg.seed, 0, kPurposeDelays));
}

std::vector<std::uint64_t> simulate_count_run(double rate_cps, double integration_time_s,
                                              std::size_t n_repeats, std::uint64_t seed) {
  if (!(rate_cps >= 0)) fail(ErrorCode::invalid_argument, "simulate_count_run: rate >= 0");
  if (!(integration_time_s > 0))
    fail(ErrorCode::invalid_argument, "simulate_count_run: integration time > 0");

  const double mean = rate_cps * integration_time_s;
  std::vector<std::uint64_t> counts(n_repeats);
  for (std::size_t i = 0; i < n_repeats; ++i) {
    RandomStream rng = RandomStream::substream(seed, i, kPurposeCounts);
    counts[i] = rng.poisson(mean);
  }
  return counts;
}

BiasSweep simulate_sweep(const DetectorModel& model, std::span<const double> bias_grid_ua,
                         std::uint64_t events_per_point, std::uint64_t seed,
                         double bin_width_ps) {
  validate(model);
  if (bias_grid_ua.empty()) fail(ErrorCode::empty_input, "simulate_sweep: empty bias grid");
  for (std::size_t i = 1; i < bias_grid_ua.size(); ++i)
    if (!(bias_grid_ua[i] > bias_grid_ua[i - 1]))
      fail(ErrorCode::invalid_argument, "simulate_sweep: bias grid must be increasing");
  if (events_per_point == 0)
    fail(ErrorCode::invalid_argument, "simulate_sweep: events_per_point > 0");

  BiasSweep sweep;
  sweep.records.reserve(bias_grid_ua.size());
  for (std::size_t i = 0; i < bias_grid_ua.size(); ++i) {
    const double bias = bias_grid_ua[i];
    BiasSweepRecord rec;
    rec.bias = bias;
    rec.sde = model_sde(model, bias);
    rec.sde_unc = 0.0;
    rec.dcr = model.dcr;

    if (rec.sde > 0) {
      std::vector<double> delays = draw_delay_stream(
          model, bias, events_per_point, RandomStream::substream(seed, i, kPurposeDelays));
      TimingHistogram h = build_histogram(delays, bin_width_ps);
      GaussianFit fit = fit_gaussian(h);
      rec.jitter_fwhm = fit.fwhm();
      try {
        rec.jitter_m20db = width_at_level(h, 0.01, fit.baseline).width;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::level_not_reached) throw;
        // too few events to resolve the 1% level at this point
      }
    }
    sweep.records.push_back(std::move(rec));
  }
  return validate(sweep);
}

PulseWaveform synthesize_waveform(double amplitude_mv, double rise_time_ps,
                                  double sigma_rms_mv, double sample_interval_ps,
                                  std::uint64_t seed) {
  if (!(amplitude_mv > 0))
    fail(ErrorCode::invalid_argument, "synthesize_waveform: amplitude must be > 0");
  if (!(rise_time_ps > 0))
    fail(ErrorCode::invalid_argument, "synthesize_waveform: rise time must be > 0");
  if (!(sigma_rms_mv >= 0))
    fail(ErrorCode::invalid_argument, "synthesize_waveform: noise RMS must be >= 0");
  if (!(sample_interval_ps > 0))
    fail(ErrorCode::invalid_argument, "synthesize_waveform: sample interval must be > 0");

  // flat pre-edge of 4 rise times, edge region of 8 rise times
  const double t_start = -4.0 * rise_time_ps;
  const double t_stop = 8.0 * rise_time_ps;
  const auto n = static_cast<std::size_t>((t_stop - t_start) / sample_interval_ps) + 1;

  RandomStream rng = RandomStream::substream(seed, 0, kPurposeWaveform);
  PulseWaveform w;
  w.sample_interval = sample_interval_ps;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = t_start + static_cast<double>(i) * sample_interval_ps;
    double v = t < 0 ? 0.0 : amplitude_mv * (1.0 - std::exp(-t / rise_time_ps));
    if (sigma_rms_mv > 0) v += rng.normal(sigma_rms_mv);
    w.samples[i] = v;
  }
  return validate(w);
}

} // namespace snspd
