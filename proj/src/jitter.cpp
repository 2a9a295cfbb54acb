// jitter.cpp - quadrature composition, slew rate, noise jitter

#include "jitter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace snspd {

namespace {

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0) || !std::isfinite(v))
    fail(ErrorCode::invalid_argument, std::string(name) + " must be >= 0");
}

// sign-normalized copy: positive-going pulse regardless of input polarity
std::vector<double> normalized_polarity(const PulseWaveform& w) {
  auto [mn, mx] = std::minmax_element(w.samples.begin(), w.samples.end());
  std::vector<double> v = w.samples;
  if (std::abs(*mn) > std::abs(*mx))
    for (double& x : v) x = -x;
  return v;
}

} // namespace

double setup_jitter(double pulse_fwhm_ps, double tcspc_fwhm_ps) {
  require_nonnegative(pulse_fwhm_ps, "setup_jitter: pulse_fwhm");
  require_nonnegative(tcspc_fwhm_ps, "setup_jitter: tcspc_fwhm");
  return std::hypot(pulse_fwhm_ps, tcspc_fwhm_ps);
}

double slew_rate(const PulseWaveform& waveform, int smoothing_samples) {
  if (waveform.samples.size() < 2)
    fail(ErrorCode::too_few_points, "slew_rate: at least two samples required");
  validate(waveform);
  if (smoothing_samples < 0)
    fail(ErrorCode::invalid_argument, "slew_rate: smoothing width must be >= 0");

  std::vector<double> v = normalized_polarity(waveform);
  if (smoothing_samples > 1) {
    std::size_t w = std::min<std::size_t>(smoothing_samples, v.size());
    std::vector<double> sm(v.size());
    double acc = 0;
    std::size_t nacc = 0;
    // centered boxcar, shrunk at the edges
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::size_t lo = i >= w / 2 ? i - w / 2 : 0;
      std::size_t hi = std::min(v.size(), lo + w);
      acc = 0;
      nacc = 0;
      for (std::size_t k = lo; k < hi; ++k) { acc += v[k]; ++nacc; }
      sm[i] = acc / static_cast<double>(nacc);
    }
    v = std::move(sm);
  }

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    best = std::max(best, (v[i + 1] - v[i]) / waveform.sample_interval);
  return best;
}

double noise_jitter(double sigma_rms_mv, double slew_rate_mv_ps) {
  if (!(sigma_rms_mv > 0) || !(slew_rate_mv_ps > 0))
    fail(ErrorCode::invalid_argument, "noise_jitter: sigma_rms and slew rate must be > 0");
  return kFwhmPerSigma * sigma_rms_mv / slew_rate_mv_ps;
}

ValueUnc noise_jitter(const NoiseJitterInput& input) {
  double j = noise_jitter(input.sigma_rms.value, input.slew_rate.value);
  // relative errors add in quadrature for a ratio
  double rel = std::hypot(input.sigma_rms.rel(), input.slew_rate.rel());
  return {j, j * rel};
}

double intrinsic_jitter(double j_sys, double j_noise, double j_setup) {
  IntrinsicJitter r = intrinsic_jitter(ValueUnc{j_sys, 0.0}, ValueUnc{j_noise, 0.0},
                                       ValueUnc{j_setup, 0.0});
  return r.j_int.value;
}

IntrinsicJitter intrinsic_jitter(ValueUnc j_sys, ValueUnc j_noise, ValueUnc j_setup) {
  require_nonnegative(j_sys.value, "intrinsic_jitter: j_sys");
  require_nonnegative(j_noise.value, "intrinsic_jitter: j_noise");
  require_nonnegative(j_setup.value, "intrinsic_jitter: j_setup");

  double radicand = j_sys.value * j_sys.value - j_noise.value * j_noise.value -
                    j_setup.value * j_setup.value;
  // one-sigma uncertainty of the radicand
  double rad_unc = 2.0 * std::sqrt(j_sys.value * j_sys.value * j_sys.unc * j_sys.unc +
                                   j_noise.value * j_noise.value * j_noise.unc * j_noise.unc +
                                   j_setup.value * j_setup.value * j_setup.unc * j_setup.unc);

  IntrinsicJitter out;
  if (radicand < 0) {
    if (-radicand <= rad_unc) {
      // consistent with zero given the inputs' uncertainties
      out.j_int = {0.0, std::sqrt(rad_unc)};
      out.clamped = true;
      return out;
    }
    fail(ErrorCode::negative_radicand,
         "intrinsic_jitter: j_noise^2 + j_setup^2 exceeds j_sys^2 beyond the combined "
         "uncertainty; inconsistent inputs");
  }
  double j = std::sqrt(radicand);
  double unc = j > 0 ? rad_unc / (2.0 * j) : std::sqrt(rad_unc);
  out.j_int = {j, unc};
  return out;
}

JitterBudget compose_budget(ValueUnc j_noise, ValueUnc j_setup, ValueUnc j_int) {
  require_nonnegative(j_noise.value, "compose_budget: j_noise");
  require_nonnegative(j_setup.value, "compose_budget: j_setup");
  require_nonnegative(j_int.value, "compose_budget: j_int");

  JitterBudget b;
  b.j_noise = j_noise;
  b.j_setup = j_setup;
  b.j_int = j_int;
  double sys = std::sqrt(j_noise.value * j_noise.value + j_setup.value * j_setup.value +
                         j_int.value * j_int.value);
  double unc;
  if (sys > 0) {
    unc = std::sqrt(j_noise.value * j_noise.value * j_noise.unc * j_noise.unc +
                    j_setup.value * j_setup.value * j_setup.unc * j_setup.unc +
                    j_int.value * j_int.value * j_int.unc * j_int.unc) /
          sys;
  } else {
    unc = std::sqrt(j_noise.unc * j_noise.unc + j_setup.unc * j_setup.unc +
                    j_int.unc * j_int.unc);
  }
  b.j_sys = {sys, unc};
  return validate(b);
}

double pre_edge_rms(const PulseWaveform& waveform) {
  validate(waveform);
  std::vector<double> v = normalized_polarity(waveform);
  double peak = *std::max_element(v.begin(), v.end());
  if (!(peak > 0))
    fail(ErrorCode::invalid_argument, "pre_edge_rms: waveform has no positive peak");

  // pre-edge region: everything before the first crossing of 10% of
  // the peak, with a small safety margin
  std::size_t edge = v.size();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] >= 0.1 * peak) { edge = i; break; }
  std::size_t margin = std::max<std::size_t>(2, edge / 20);
  if (edge <= margin + 2)
    fail(ErrorCode::too_few_points, "pre_edge_rms: no flat region before the edge");
  std::size_t n = edge - margin;

  double mean = 0;
  for (std::size_t i = 0; i < n; ++i) mean += v[i];
  mean /= static_cast<double>(n);
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) ss += (v[i] - mean) * (v[i] - mean);
  return std::sqrt(ss / static_cast<double>(n));
}

} // namespace snspd
