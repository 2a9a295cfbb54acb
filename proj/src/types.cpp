// types.cpp - invariant checks for the shared domain types

#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace snspd {

namespace {

[[noreturn]] void violated(const std::string& what) {
  fail(ErrorCode::invariant_violation, what);
}

void require(bool ok, const char* what) {
  if (!ok) violated(what);
}

bool finite(double x) { return std::isfinite(x); }

} // namespace

Table::Table(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size() || xs_.empty())
    fail(ErrorCode::invalid_argument, "Table: xs and ys must be non-empty and of equal length");
  for (std::size_t i = 1; i < xs_.size(); ++i)
    if (!(xs_[i] > xs_[i - 1]))
      fail(ErrorCode::invalid_argument, "Table: x values must be strictly increasing");
}

double Table::operator()(double x) const {
  if (xs_.empty()) fail(ErrorCode::invalid_argument, "Table: empty");
  if (x <= xs_.front()) return ys_.front();
  if (x >= xs_.back()) return ys_.back();
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
  std::size_t lo = hi - 1;
  double t = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
  return ys_[lo] + t * (ys_[hi] - ys_[lo]);
}

const TimingHistogram& validate(const TimingHistogram& h) {
  require(finite(h.bin_width) && h.bin_width > 0, "TimingHistogram: bin_width > 0");
  require(finite(h.origin), "TimingHistogram: origin finite");
  require(!h.counts.empty(), "TimingHistogram: counts non-empty");
  std::uint64_t sum = std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t{0});
  require(sum == h.total_events, "TimingHistogram: total_events = sum(counts)");
  return h;
}

const GaussianFit& validate(const GaussianFit& f) {
  require(finite(f.sigma) && f.sigma > 0, "GaussianFit: sigma > 0");
  require(finite(f.amplitude) && f.amplitude > 0, "GaussianFit: amplitude > 0");
  require(finite(f.baseline) && f.baseline >= 0, "GaussianFit: baseline >= 0");
  return f;
}

const JitterBudget& validate(const JitterBudget& b) {
  for (const ValueUnc* v : {&b.j_sys, &b.j_noise, &b.j_setup, &b.j_int}) {
    require(finite(v->value) && v->value >= 0, "JitterBudget: components >= 0");
    require(finite(v->unc) && v->unc >= 0, "JitterBudget: uncertainties >= 0");
  }
  // quadrature identity within the stored uncertainties
  double quad2 = b.j_noise.value * b.j_noise.value +
                 b.j_setup.value * b.j_setup.value +
                 b.j_int.value * b.j_int.value;
  double sys2 = b.j_sys.value * b.j_sys.value;
  double unc2 = 2.0 * std::sqrt(
      b.j_sys.value * b.j_sys.value * b.j_sys.unc * b.j_sys.unc +
      b.j_noise.value * b.j_noise.value * b.j_noise.unc * b.j_noise.unc +
      b.j_setup.value * b.j_setup.value * b.j_setup.unc * b.j_setup.unc +
      b.j_int.value * b.j_int.value * b.j_int.unc * b.j_int.unc);
  double tol = unc2 + 1e-9 * (1.0 + sys2);
  require(std::abs(sys2 - quad2) <= tol,
          "JitterBudget: j_sys^2 = j_noise^2 + j_setup^2 + j_int^2 within uncertainty");
  return b;
}

const BiasSweep& validate(const BiasSweep& s) {
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& r : s.records) {
    require(finite(r.bias) && r.bias > prev, "BiasSweep: bias strictly increasing");
    prev = r.bias;
    require(finite(r.sde) && r.sde >= 0 && r.sde <= 1, "BiasSweep: 0 <= sde <= 1");
    require(finite(r.sde_unc) && r.sde_unc >= 0, "BiasSweep: sde_unc >= 0");
    require(finite(r.dcr) && r.dcr >= 0, "BiasSweep: dcr >= 0");
    if (r.jitter_fwhm)
      require(finite(*r.jitter_fwhm) && *r.jitter_fwhm > 0, "BiasSweep: jitter_fwhm > 0");
    if (r.jitter_m20db)
      require(finite(*r.jitter_m20db) && *r.jitter_m20db > 0, "BiasSweep: jitter_m20db > 0");
  }
  return s;
}

const CalibrationChain& validate(const CalibrationChain& c) {
  require(finite(c.p_m) && c.p_m > 0, "CalibrationChain: p_m > 0");
  require(finite(c.r_switch) && c.r_switch > 0, "CalibrationChain: r_switch > 0");
  for (double r : c.r_att)
    require(finite(r) && r > 0, "CalibrationChain: attenuator ratios > 0");
  require(finite(c.cf) && c.cf > 0, "CalibrationChain: cf > 0");
  require(finite(c.nlf_high) && c.nlf_high > 0, "CalibrationChain: nlf_high > 0");
  require(finite(c.nlf_low) && c.nlf_low > 0, "CalibrationChain: nlf_low > 0");
  require(finite(c.r_pc) && c.r_pc >= 0 && c.r_pc < 1, "CalibrationChain: 0 <= r_pc < 1");
  require(finite(c.wavelength) && c.wavelength > 0, "CalibrationChain: wavelength > 0");
  for (double u : {c.rel_unc_p_m, c.rel_unc_r_switch, c.rel_unc_r_att, c.rel_unc_pcr_dcr})
    require(finite(u) && u >= 0, "CalibrationChain: relative uncertainties >= 0");
  return c;
}

const PulseWaveform& validate(const PulseWaveform& w) {
  require(finite(w.sample_interval) && w.sample_interval > 0,
          "PulseWaveform: sample_interval > 0");
  require(w.samples.size() >= 2, "PulseWaveform: at least two samples");
  for (double v : w.samples)
    require(finite(v), "PulseWaveform: samples finite");
  return w;
}

const DetectorModel& validate(const DetectorModel& m) {
  require(finite(m.i_sat) && m.i_sat > 0, "DetectorModel: i_sat > 0");
  // sde_max = 0 is permitted as the degenerate no-detection model
  require(finite(m.sde_max) && m.sde_max >= 0 && m.sde_max <= 1,
          "DetectorModel: 0 <= sde_max <= 1");
  require(finite(m.sigmoid_steepness) && m.sigmoid_steepness > 0,
          "DetectorModel: sigmoid steepness > 0");
  require(!m.sigma_intrinsic.empty(), "DetectorModel: sigma_intrinsic table non-empty");
  require(!m.tail_tau.empty(), "DetectorModel: tail_tau table non-empty");
  for (double v : m.sigma_intrinsic.ys())
    require(finite(v) && v >= 0, "DetectorModel: sigma_intrinsic >= 0 everywhere");
  for (double v : m.tail_tau.ys())
    require(finite(v) && v >= 0, "DetectorModel: tail_tau >= 0 everywhere");
  require(finite(m.sigma_setup) && m.sigma_setup >= 0, "DetectorModel: sigma_setup >= 0");
  require(finite(m.sigma_noise_equivalent) && m.sigma_noise_equivalent >= 0,
          "DetectorModel: sigma_noise_equivalent >= 0");
  require(finite(m.dcr) && m.dcr >= 0, "DetectorModel: dcr >= 0");
  return m;
}

} // namespace snspd
