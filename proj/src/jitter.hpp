// jitter.hpp - quadrature jitter model
//
// The measured system jitter decomposes into independent noise, setup
// and intrinsic components added in quadrature:
//
//   j_sys^2 = j_noise^2 + j_setup^2 + j_int^2        (all FWHM, ps)
//
// The noise component follows from the amplifier noise and the pulse
// slew rate, j_noise = 2 sqrt(2 ln 2) * sigma_RMS / SR; the setup
// component from the laser pulse width and the timing module; the
// intrinsic component is the inversion of the quadrature. Uncertainty
// propagation is first order in the component one-sigma values.
#pragma once

#include "types.hpp"

namespace snspd {

struct NoiseJitterInput {
  ValueUnc sigma_rms;  // mV
  ValueUnc slew_rate;  // mV/ps
};

struct IntrinsicJitter {
  ValueUnc j_int;       // ps FWHM
  bool clamped = false; // radicand was negative within uncertainty, clamped to 0
};

// sqrt(pulse_fwhm^2 + tcspc_fwhm^2)
double setup_jitter(double pulse_fwhm_ps, double tcspc_fwhm_ps);

// Maximum adjacent-sample difference quotient on the rising edge.
// Negative-polarity pulses are sign-flipped first. A boxcar
// pre-smoothing width in samples may be supplied; 0 disables it.
double slew_rate(const PulseWaveform& waveform, int smoothing_samples = 0);

double noise_jitter(double sigma_rms_mv, double slew_rate_mv_ps);
ValueUnc noise_jitter(const NoiseJitterInput& input);

// Strict inversion; throws NegativeRadicand when the components exceed
// the system value.
double intrinsic_jitter(double j_sys, double j_noise, double j_setup);

// Inversion with uncertainties: a radicand within its combined
// one-sigma uncertainty of zero clamps to j_int = 0 with a flag
// instead of failing.
IntrinsicJitter intrinsic_jitter(ValueUnc j_sys, ValueUnc j_noise, ValueUnc j_setup);

JitterBudget compose_budget(ValueUnc j_noise, ValueUnc j_setup, ValueUnc j_int);

// RMS of the samples preceding the rising edge, after polarity
// normalization; the amplifier-noise estimate used when no separate
// sigma_RMS measurement is supplied.
double pre_edge_rms(const PulseWaveform& waveform);

} // namespace snspd
