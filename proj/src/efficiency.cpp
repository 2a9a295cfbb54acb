// efficiency.cpp - flux chain, SDE, uncertainty budget, sweep descriptors

#include "efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace snspd {

double photon_energy(double wavelength_nm) {
  if (!(wavelength_nm > 0))
    fail(ErrorCode::invalid_argument, "photon_energy: wavelength must be > 0");
  return kPlanck * kSpeedOfLight / (wavelength_nm * 1e-9);
}

double photon_flux(const CalibrationChain& cal) {
  if (!(cal.r_pc < 1))
    fail(ErrorCode::division_domain, "photon_flux: r_pc >= 1");
  if (!(cal.p_m > 0))
    fail(ErrorCode::division_domain, "photon_flux: zero reference power");
  validate(cal);

  double e_gamma = photon_energy(cal.wavelength);
  double flux = cal.p_m * cal.r_switch / (1.0 - cal.r_pc) / e_gamma;
  for (double r : cal.r_att) flux *= r;
  flux /= cal.cf * cal.nlf_high;
  double nlf_ratio = cal.nlf_high / cal.nlf_low;
  flux *= nlf_ratio * nlf_ratio * nlf_ratio;
  return flux;
}

double sde(double pcr_cps, double dcr_cps, double n_gamma) {
  if (!(n_gamma > 0)) fail(ErrorCode::division_domain, "sde: photon flux must be > 0");
  if (!(dcr_cps >= 0)) fail(ErrorCode::invalid_argument, "sde: dcr must be >= 0");
  if (pcr_cps < dcr_cps)
    fail(ErrorCode::invalid_argument, "sde: negative numerator, pcr < dcr");
  return (pcr_cps - dcr_cps) / n_gamma;
}

UncertaintyBudget sde_uncertainty(double rel_pcr_dcr, double rel_pm, double rel_rswitch,
                                  double rel_ratt) {
  for (double v : {rel_pcr_dcr, rel_pm, rel_rswitch, rel_ratt})
    if (!(v >= 0) || !std::isfinite(v))
      fail(ErrorCode::invalid_argument, "sde_uncertainty: inputs must be >= 0");
  UncertaintyBudget b;
  b.rel_pcr_dcr = rel_pcr_dcr;
  b.rel_pm = rel_pm;
  b.rel_rswitch = rel_rswitch;
  b.rel_ratt = rel_ratt;
  b.rel_total = std::sqrt(rel_pcr_dcr * rel_pcr_dcr + rel_pm * rel_pm +
                          rel_rswitch * rel_rswitch + 3.0 * rel_ratt * rel_ratt);
  return b;
}

double pcr_dcr_uncertainty(std::span<const double> samples, int n_plateau_points) {
  if (samples.size() < 2)
    fail(ErrorCode::too_few_points, "pcr_dcr_uncertainty: at least two samples required");
  if (n_plateau_points < 1)
    fail(ErrorCode::invalid_argument, "pcr_dcr_uncertainty: n_plateau_points >= 1 required");

  double mean = 0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  if (!(mean > 0))
    fail(ErrorCode::division_domain, "pcr_dcr_uncertainty: non-positive sample mean");

  double ss = 0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  double sd = std::sqrt(ss / static_cast<double>(samples.size() - 1));
  return sd / mean / std::sqrt(static_cast<double>(n_plateau_points));
}

double saturation_current(const BiasSweep& sweep) {
  validate(sweep);
  if (sweep.empty()) fail(ErrorCode::empty_input, "saturation_current: empty sweep");

  double max_sde = 0;
  for (const auto& r : sweep.records) max_sde = std::max(max_sde, r.sde);
  if (!(max_sde > 0))
    fail(ErrorCode::never_reaches, "saturation_current: sweep never detects");

  const double thr = 0.9 * max_sde;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (sweep.records[i].sde >= thr) {
      if (i == 0) return sweep.records[0].bias;
      const auto& lo = sweep.records[i - 1];
      const auto& hi = sweep.records[i];
      return lo.bias + (thr - lo.sde) * (hi.bias - lo.bias) / (hi.sde - lo.sde);
    }
  }
  fail(ErrorCode::never_reaches, "saturation_current: threshold never reached");
}

PlateauStats plateau_average(const BiasSweep& sweep, BiasInterval region,
                             double cal_rel_total) {
  validate(sweep);
  if (!(cal_rel_total >= 0))
    fail(ErrorCode::invalid_argument, "plateau_average: cal_rel_total must be >= 0");
  if (!(region.hi >= region.lo))
    fail(ErrorCode::invalid_argument, "plateau_average: empty interval");

  // clip to the plateau so the rising edge can never be averaged
  double i_sat = saturation_current(sweep);
  double lo = std::max(region.lo, i_sat);

  std::vector<const BiasSweepRecord*> in;
  for (const auto& r : sweep.records)
    if (r.bias >= lo && r.bias <= region.hi) in.push_back(&r);
  if (in.empty())
    fail(ErrorCode::empty_region, "plateau_average: no records in the plateau region");

  double mean = 0;
  for (auto* r : in) mean += r->sde;
  mean /= static_cast<double>(in.size());

  // per-point statistical relative uncertainty, averaged over the region
  double per_point_rel = 0;
  int n_rel = 0;
  for (auto* r : in)
    if (r->sde > 0 && r->sde_unc > 0) {
      per_point_rel += r->sde_unc / r->sde;
      ++n_rel;
    }
  if (n_rel > 0) per_point_rel /= n_rel;
  double rel_stat = per_point_rel / std::sqrt(static_cast<double>(in.size()));

  PlateauStats out;
  out.sde_mean = mean;
  out.sde_rel_unc = std::hypot(rel_stat, cal_rel_total);
  out.n_points = static_cast<int>(in.size());
  double max_dev = 0;
  if (mean > 0)
    for (auto* r : in) max_dev = std::max(max_dev, std::abs(r->sde - mean) / mean);
  out.max_rel_deviation = max_dev;
  return out;
}

BiasSweep normalize_bias(const BiasSweep& sweep, double i_sat) {
  validate(sweep);
  if (!(i_sat > 0) || !std::isfinite(i_sat))
    fail(ErrorCode::invalid_argument, "normalize_bias: i_sat must be > 0");
  BiasSweep out = sweep;
  for (auto& r : out.records) r.bias /= i_sat;
  return out;
}

InflexionResult jitter_inflexion(const BiasSweep& sweep) {
  validate(sweep);
  std::vector<double> x, y;
  for (const auto& r : sweep.records)
    if (r.jitter_fwhm) {
      x.push_back(r.bias);
      y.push_back(*r.jitter_fwhm);
    }
  if (x.size() < 5)
    fail(ErrorCode::too_few_points, "jitter_inflexion: at least 5 jitter records required");

  // central-difference slopes at interior points
  const std::size_t n = x.size();
  std::vector<double> sx(n - 2), sy(n - 2);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    sx[k - 1] = x[k];
    sy[k - 1] = (y[k + 1] - y[k - 1]) / (x[k + 1] - x[k - 1]);
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < sy.size(); ++k)
    if (sy[k] < sy[best]) best = k;

  InflexionResult out;
  out.slope = sy[best];
  out.normalized_bias = sx[best];

  double y_scale = 0;
  for (double v : y) y_scale = std::max(y_scale, std::abs(v));
  if (sy[best] >= -1e-12 * std::max(1.0, y_scale)) {
    out.no_descent = true;
    return out;
  }

  // parabolic refinement over the three neighbouring slope estimates
  if (best > 0 && best + 1 < sy.size()) {
    double x0 = sx[best - 1], x1 = sx[best], x2 = sx[best + 1];
    double y0 = sy[best - 1], y1 = sy[best], y2 = sy[best + 1];
    double d0 = (y1 - y0) / (x1 - x0);
    double d1 = (y2 - y1) / (x2 - x1);
    double a = (d1 - d0) / (x2 - x0); // half the curvature
    if (a > 0) {
      // vertex of the Newton-form parabola through the three points
      double vertex = 0.5 * (x0 + x1) - d0 / (2.0 * a);
      out.normalized_bias = std::clamp(vertex, x0, x2);
    }
  }
  return out;
}

} // namespace snspd
