// efficiency.hpp - photon flux, system detection efficiency, and
// bias-sweep descriptors
//
// The flux chain converts a calibrated reference power through the
// switch ratio, the three attenuator ratios and the powermeter
// correction factors into photons per second; the efficiency is
// (PCR - DCR) / N_gamma. The uncertainty budget keeps the four terms
// that survive the ratio cancellations: the count statistics, the
// powermeter calibration, the switch ratio, and the attenuator
// repeatability (entering three times).
#pragma once

#include <span>

#include "types.hpp"

namespace snspd {

struct UncertaintyBudget {
  double rel_pcr_dcr = 0.0;
  double rel_pm = 0.0;
  double rel_rswitch = 0.0;
  double rel_ratt = 0.0; // per attenuator; enters the total three times
  double rel_total = 0.0;
};

struct PlateauStats {
  double sde_mean = 0.0;
  double sde_rel_unc = 0.0;
  int n_points = 0;
  // advisory flatness diagnostic: max relative deviation from the mean
  double max_rel_deviation = 0.0;
};

struct BiasInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct InflexionResult {
  double normalized_bias = 0.0;
  double slope = 0.0; // ps per unit normalized bias, at the steepest descent
  bool no_descent = false;
};

// Photon energy h*c/lambda in joules.
double photon_energy(double wavelength_nm);

// Photons per second arriving at the detector for a validated chain.
double photon_flux(const CalibrationChain& cal);

// (pcr - dcr) / n_gamma
double sde(double pcr_cps, double dcr_cps, double n_gamma);

// rel_total^2 = rel_pcr_dcr^2 + rel_pm^2 + rel_rswitch^2 + 3 rel_ratt^2
UncertaintyBudget sde_uncertainty(double rel_pcr_dcr, double rel_pm, double rel_rswitch,
                                  double rel_ratt);

// Relative standard deviation of repeated (pcr - dcr) readings, scaled
// by 1/sqrt(n_plateau_points) for the plateau average.
double pcr_dcr_uncertainty(std::span<const double> samples, int n_plateau_points);

// Smallest bias at which the SDE reaches 90% of its sweep maximum,
// located by linear interpolation between the bracketing records.
double saturation_current(const BiasSweep& sweep);

// Unweighted SDE mean over the records inside `region` clipped to
// [i_sat, inf); statistical uncertainty combined in quadrature with the
// calibration rel_total.
PlateauStats plateau_average(const BiasSweep& sweep, BiasInterval region,
                             double cal_rel_total);

BiasSweep normalize_bias(const BiasSweep& sweep, double i_sat);

// Location of the steepest jitter descent on a normalized sweep,
// refined by parabolic interpolation over the neighbouring slope
// estimates. Needs at least 5 records carrying jitter values.
InflexionResult jitter_inflexion(const BiasSweep& sweep);

} // namespace snspd
