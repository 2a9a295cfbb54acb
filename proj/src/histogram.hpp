// histogram.hpp - timing-histogram construction and peak-shape metrics
//
// Builds delay histograms from timestamp streams and extracts the peak
// descriptors used throughout: Gaussian fits, direct width at any
// fraction of the peak (0.5 for FWHM, 0.01 for the -20 dB width), and
// the residue between the measured width and the fitted Gaussian's
// analytic width, which quantifies the non-Gaussian trailing tail.
//
// All operations are pure functions of their inputs.
#pragma once

#include <span>

#include "types.hpp"

namespace snspd {

struct WidthMeasure {
  double level = 0.0;       // fraction of peak maximum above baseline
  double width = 0.0;       // ps
  double left_cross = 0.0;  // ps
  double right_cross = 0.0; // ps
};

struct TailResidue {
  double level = 0.0;
  double measured_width = 0.0; // ps
  double gaussian_width = 0.0; // ps, analytic width of the fitted Gaussian
  double residue = 0.0;        // measured - gaussian
};

// Accumulates delays into left-closed right-open bins of the given
// width; the first bin's left edge sits on the smallest delay.
TimingHistogram build_histogram(std::span<const double> delays_ps, double bin_width_ps);

// Weighted nonlinear least squares of A*exp(-(t-mu)^2/(2 sigma^2)) + b
// against bin centers, per-bin weight 1/max(count,1). Refused below a
// peak count of 10.
GaussianFit fit_gaussian(const TimingHistogram& hist);

// Analytic full width of a Gaussian at `level` times its peak:
// 2*sigma*sqrt(2*ln(1/level)).
double gaussian_width_at_level(double sigma, double level);

// Outermost crossings of (counts - baseline) = level*(peak - baseline),
// found by linear interpolation between adjacent bin centers scanning
// outward from the peak bin. Baseline defaults to the median of the
// lowest decile of bins; pass the fitted baseline when a fit exists.
WidthMeasure width_at_level(const TimingHistogram& hist, double level);
WidthMeasure width_at_level(const TimingHistogram& hist, double level, double baseline);

TailResidue tail_residue(const TimingHistogram& hist, const GaussianFit& fit, double level);

// Least squares of a Gaussian convolved with a one-sided trailing
// exponential; initialized from the Gaussian fit with
// tau0 = max(bin_width, measured FWHM - Gaussian FWHM).
EmgFit fit_exp_modified_gaussian(const TimingHistogram& hist);

// Median of the lowest decile of bins (the dark-count floor).
double estimate_baseline(const TimingHistogram& hist);

// Index of the maximum-count bin; ties go to the smallest time.
std::size_t peak_bin(const TimingHistogram& hist);

// Trailing-tail peak shape used by the EMG fit: unit-peak Gaussian
// convolved with a normalized exponential; reduces to
// exp(-(t-mu)^2/(2 sigma^2)) as tau -> 0. Exposed for tests.
double emg_peak_shape(double t, double mu, double sigma, double tau);

} // namespace snspd
