// simulator.hpp - Monte Carlo oracle for the toolkit
//
// Generates photon-arrival delay streams (independent Gaussian setup,
// noise and intrinsic components plus a one-sided exponential tail),
// Poissonian count runs, synthetic detection waveforms, and whole bias
// sweeps from a DetectorModel. Everything is reproducible from the
// seed; each simulated point draws from its own named substream, so
// results do not depend on evaluation order.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "types.hpp"

namespace snspd {

struct SimulationConfig {
  std::uint64_t seed = 0;
  std::uint64_t n_events = 0;
  std::optional<double> laser_period; // ps, pulse-train context only
  double bias = 0.0;                  // uA
};

// Parametric description behind the default model tables. The
// intrinsic-sigma table is constructed so that the system jitter
// (components in quadrature) has its steepest descent exactly at
// `inflexion` and is flat beyond `flatten` (both in bias normalized to
// i_sat). The tail constant decreases over the same window, large on
// the plateau side and roughly zero beyond ~1.1.
struct ModelParams {
  double i_sat = 34.0;       // uA
  double sde_max = 0.801;
  double sigmoid_steepness = 30.0;
  double sigma_setup = 4.5934;  // ps (laser pulse + timing module, quadrature)
  double sigma_noise = 4.3528;  // ps
  double dcr = 300.0;           // cps
  double intrinsic_sigma_plateau = 9.0495; // ps
  double intrinsic_sigma_floor = 2.0;      // ps
  double inflexion = 0.92; // normalized bias of steepest jitter descent
  double flatten = 1.2;    // normalized bias where the jitter flattens
  double tail_tau_max = 5.0; // ps
};

DetectorModel build_model(const ModelParams& params);
DetectorModel default_model();

// SDE sigmoid with its 90% point pinned to i_sat.
double model_sde(const DetectorModel& model, double bias_ua);

// delay = G(0, sigma_setup) + G(0, sigma_noise) + G(0, sigma_int(bias))
//         + Exp(tail_tau(bias)), all draws independent.
std::vector<double> draw_delays(const DetectorModel& model, const SimulationConfig& cfg);

std::vector<std::uint64_t> simulate_count_run(double rate_cps, double integration_time_s,
                                              std::size_t n_repeats, std::uint64_t seed);

// Full sweep: exact sigmoid SDE per point, jitter metrics measured on
// a simulated delay histogram (Gaussian fit FWHM and width at 1%).
BiasSweep simulate_sweep(const DetectorModel& model, std::span<const double> bias_grid_ua,
                         std::uint64_t events_per_point, std::uint64_t seed,
                         double bin_width_ps = 1.0);

// Flat pre-edge region followed by a rising exponential
// amplitude*(1 - exp(-t/rise_time)), plus Gaussian noise of the given
// RMS; the analytic maximum slope is amplitude/rise_time at t = 0.
PulseWaveform synthesize_waveform(double amplitude_mv, double rise_time_ps,
                                  double sigma_rms_mv, double sample_interval_ps,
                                  std::uint64_t seed);

} // namespace snspd
