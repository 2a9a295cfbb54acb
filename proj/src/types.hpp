// types.hpp - shared domain types and their validation
//
// Units are fixed per field and never carried at runtime: time in ps,
// bias current in uA, voltage in mV, count rates in cps, optical power
// in W, wavelengths in nm, efficiencies as fractions in [0,1].
// Conversion happens at ingestion only. Uncertainties are one-sigma
// absolute values stored next to the quantity they belong to; relative
// forms are derived on demand.
//
// All types here are plain values, immutable by convention once
// validated, and safe to share across concurrent readers.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "error.hpp"

namespace snspd {

// 2*sqrt(2*ln 2), converts a Gaussian sigma to its FWHM
inline constexpr double kFwhmPerSigma = 2.3548200450309493;

inline constexpr double kPlanck = 6.62607015e-34;      // J s
inline constexpr double kSpeedOfLight = 299792458.0;   // m/s

struct ValueUnc {
  double value = 0.0;
  double unc = 0.0; // one-sigma absolute; 0 means "no uncertainty tracked"

  double rel() const { return value != 0.0 ? unc / value : 0.0; }
};

// Piecewise-linear lookup table y(x); x strictly increasing, clamped
// to the end values outside the tabulated range.
class Table {
public:
  Table() = default;
  Table(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;
  bool empty() const { return xs_.empty(); }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

// Binned photon-arrival-delay counts; the central analysis object.
struct TimingHistogram {
  double bin_width = 0.0; // ps
  double origin = 0.0;    // ps, left edge of the first bin
  std::vector<std::uint64_t> counts;
  std::uint64_t total_events = 0;

  std::size_t size() const { return counts.size(); }
  double bin_center(std::size_t i) const {
    return origin + (static_cast<double>(i) + 0.5) * bin_width;
  }
};

struct GaussianFit {
  double mu = 0.0;        // ps
  double sigma = 0.0;     // ps
  double amplitude = 0.0; // counts at peak above baseline
  double baseline = 0.0;  // counts
  double mu_unc = 0.0;    // one-sigma from the fit covariance
  double sigma_unc = 0.0;
  double goodness = 0.0;  // weighted residual sum of squares per bin
  int iterations = 0;

  double fwhm() const { return kFwhmPerSigma * sigma; }
  double fwhm_unc() const { return kFwhmPerSigma * sigma_unc; }
};

// Gaussian convolved with a one-sided exponential (decay constant tau
// on the trailing side).
struct EmgFit {
  double mu = 0.0;
  double sigma = 0.0;
  double tau = 0.0;
  double amplitude = 0.0;
  double baseline = 0.0;
  double goodness = 0.0;
  int iterations = 0;
};

// System / noise / setup / intrinsic decomposition, all FWHM in ps.
struct JitterBudget {
  ValueUnc j_sys;
  ValueUnc j_noise;
  ValueUnc j_setup;
  ValueUnc j_int;
  // set when the intrinsic radicand fell below zero within its
  // combined uncertainty and was clamped to zero
  bool intrinsic_clamped = false;
};

struct BiasSweepRecord {
  double bias = 0.0;    // uA, or unitless after normalize_bias
  double sde = 0.0;     // fraction
  double sde_unc = 0.0; // absolute
  double dcr = 0.0;     // cps
  std::optional<double> jitter_fwhm;   // ps
  std::optional<double> jitter_m20db;  // ps, width at 1% of peak
};

struct BiasSweep {
  std::vector<BiasSweepRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

// Everything the photon-flux chain needs: reference power, switch
// ratio, the three attenuator ratios P_i,att/P_M, the powermeter
// correction factors, and the relative uncertainties that survive the
// ratio cancellations.
struct CalibrationChain {
  double p_m = 0.0; // W, reference power measurement
  double r_switch = 0.0;
  std::array<double, 3> r_att{0.0, 0.0, 0.0};
  double cf = 1.0;       // powermeter correction factor
  double nlf_high = 1.0; // non-linearity factor, high power
  double nlf_low = 1.0;  // non-linearity factor, low power
  double r_pc = 0.0;     // end-face reflection coefficient
  double wavelength = 0.0; // nm

  double rel_unc_p_m = 0.0;
  double rel_unc_r_switch = 0.0;
  double rel_unc_r_att = 0.0; // one value shared by the three ratios
  double rel_unc_pcr_dcr = 0.0;
};

struct PulseWaveform {
  double sample_interval = 0.0; // ps
  std::vector<double> samples;  // mV
};

// Simulator ground truth: efficiency sigmoid, bias-dependent intrinsic
// jitter law and tail constant, plus the fixed Gaussian components.
struct DetectorModel {
  double i_sat = 0.0;   // uA
  double sde_max = 0.0; // fraction
  double sigmoid_steepness = 30.0;
  Table sigma_intrinsic; // ps vs bias (uA)
  Table tail_tau;        // ps vs bias (uA)
  double sigma_setup = 0.0;            // ps
  double sigma_noise_equivalent = 0.0; // ps
  double dcr = 0.0;                    // cps
};

// validate() returns its argument iff every type invariant holds and
// throws Error{invariant_violation} naming the failed invariant
// otherwise. Idempotent by construction (pure checks, no mutation).
const TimingHistogram& validate(const TimingHistogram& h);
const GaussianFit& validate(const GaussianFit& f);
const JitterBudget& validate(const JitterBudget& b);
const BiasSweep& validate(const BiasSweep& s);
const CalibrationChain& validate(const CalibrationChain& c);
const PulseWaveform& validate(const PulseWaveform& w);
const DetectorModel& validate(const DetectorModel& m);

} // namespace snspd
