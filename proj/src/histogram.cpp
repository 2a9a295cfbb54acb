// histogram.cpp - histogram construction, Gaussian/EMG fits, width extraction

#include "histogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "levmar.hpp"

namespace snspd {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr std::uint64_t kMinPeakCount = 10;
constexpr std::size_t kMaxBins = 50'000'000;

// Scaled complementary error function exp(z^2) * erfc(z).
double erfcx(double z) {
  if (z <= 6.5) return std::exp(z * z) * std::erfc(z);
  // asymptotic series, relative error below 1e-8 for z > 6.5
  double inv2z2 = 1.0 / (2.0 * z * z);
  double term = 1.0, sum = 1.0;
  for (int n = 1; n <= 6; ++n) {
    term *= -(2.0 * n - 1.0) * inv2z2;
    sum += term;
  }
  return sum / (z * 1.7724538509055160273);
}

std::vector<double> bin_centers(const TimingHistogram& h) {
  std::vector<double> xs(h.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = h.bin_center(i);
  return xs;
}

std::vector<double> poisson_weights(const TimingHistogram& h) {
  std::vector<double> w(h.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = 1.0 / static_cast<double>(std::max<std::uint64_t>(h.counts[i], 1));
  return w;
}

void require_fittable(const TimingHistogram& h) {
  validate(h);
  std::uint64_t peak = h.counts[peak_bin(h)];
  if (peak == 0)
    fail(ErrorCode::insufficient_counts, "histogram has no non-empty bin");
  if (peak < kMinPeakCount)
    fail(ErrorCode::insufficient_counts,
         "peak count " + std::to_string(peak) + " below the fitting threshold of " +
             std::to_string(kMinPeakCount));
}

} // namespace

TimingHistogram build_histogram(std::span<const double> delays_ps, double bin_width_ps) {
  if (delays_ps.empty()) fail(ErrorCode::empty_input, "build_histogram: no delays");
  if (!(bin_width_ps > 0) || !std::isfinite(bin_width_ps))
    fail(ErrorCode::invalid_argument, "build_histogram: bin width must be positive");
  for (double d : delays_ps)
    if (!std::isfinite(d))
      fail(ErrorCode::invalid_argument, "build_histogram: non-finite delay");

  auto [lo_it, hi_it] = std::minmax_element(delays_ps.begin(), delays_ps.end());
  double lo = *lo_it, hi = *hi_it;
  double span = (hi - lo) / bin_width_ps;
  if (span >= static_cast<double>(kMaxBins))
    fail(ErrorCode::invalid_argument, "build_histogram: bin width too small for the delay span");

  TimingHistogram h;
  h.bin_width = bin_width_ps;
  h.origin = lo;
  h.counts.assign(static_cast<std::size_t>(std::floor(span)) + 1, 0);
  for (double d : delays_ps) {
    auto idx = static_cast<std::size_t>(std::floor((d - lo) / bin_width_ps));
    if (idx >= h.counts.size()) idx = h.counts.size() - 1; // guards the rounding edge at d == max
    ++h.counts[idx];
  }
  h.total_events = delays_ps.size();
  return validate(h);
}

std::size_t peak_bin(const TimingHistogram& h) {
  validate(h);
  std::size_t best = 0;
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h.counts[i] > h.counts[best]) best = i;
  return best;
}

double estimate_baseline(const TimingHistogram& h) {
  validate(h);
  std::vector<std::uint64_t> sorted = h.counts;
  std::sort(sorted.begin(), sorted.end());
  std::size_t n = std::max<std::size_t>(1, sorted.size() / 10);
  // median of the lowest decile
  if (n % 2 == 1) return static_cast<double>(sorted[n / 2]);
  return 0.5 * (static_cast<double>(sorted[n / 2 - 1]) + static_cast<double>(sorted[n / 2]));
}

GaussianFit fit_gaussian(const TimingHistogram& hist) {
  require_fittable(hist);

  const auto xs = bin_centers(hist);
  std::vector<double> ys(hist.size());
  for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = static_cast<double>(hist.counts[i]);
  const auto weights = poisson_weights(hist);

  // moment-based initialization
  double wsum = 0, mean = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    wsum += ys[i];
    mean += ys[i] * xs[i];
  }
  mean /= wsum;
  double var = 0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    var += ys[i] * (xs[i] - mean) * (xs[i] - mean);
  var /= wsum;
  double sigma0 = std::max(std::sqrt(var), hist.bin_width * 0.5);
  double base0 = estimate_baseline(hist);
  double amp0 = static_cast<double>(hist.counts[peak_bin(hist)]) - base0;
  if (amp0 <= 0) fail(ErrorCode::insufficient_counts, "fit_gaussian: peak does not rise above the baseline");

  auto model = [](double t, const std::vector<double>& p) {
    double s = std::abs(p[1]);
    if (s < 1e-12) s = 1e-12;
    double u = (t - p[0]) / s;
    return p[2] * std::exp(-0.5 * u * u) + p[3];
  };

  auto r = levmar_fit(model, xs, ys, weights, {mean, sigma0, amp0, base0});
  if (!r.converged)
    fail(ErrorCode::fit_not_converged, "fit_gaussian: no convergence within the iteration limit");

  GaussianFit f;
  f.mu = r.params[0];
  f.sigma = std::abs(r.params[1]);
  f.amplitude = r.params[2];
  f.baseline = std::max(0.0, r.params[3]);
  f.mu_unc = r.param_unc[0];
  f.sigma_unc = r.param_unc[1];
  f.goodness = r.weighted_rss / static_cast<double>(hist.size());
  f.iterations = r.iterations;
  if (!(f.sigma > 0) || !(f.amplitude > 0))
    fail(ErrorCode::fit_not_converged, "fit_gaussian: degenerate parameters");
  return validate(f);
}

double gaussian_width_at_level(double sigma, double level) {
  if (!(sigma > 0)) fail(ErrorCode::invalid_argument, "gaussian_width_at_level: sigma > 0");
  if (!(level > 0 && level < 1))
    fail(ErrorCode::invalid_argument, "gaussian_width_at_level: level in (0,1)");
  return 2.0 * sigma * std::sqrt(2.0 * std::log(1.0 / level));
}

WidthMeasure width_at_level(const TimingHistogram& hist, double level) {
  return width_at_level(hist, level, estimate_baseline(hist));
}

WidthMeasure width_at_level(const TimingHistogram& hist, double level, double baseline) {
  validate(hist);
  if (!(level > 0 && level < 1))
    fail(ErrorCode::invalid_argument, "width_at_level: level must be in (0,1)");

  const std::size_t p = peak_bin(hist);
  const double peak = static_cast<double>(hist.counts[p]);
  if (!(peak > baseline))
    fail(ErrorCode::insufficient_counts, "width_at_level: no peak above the baseline");
  const double thr = baseline + level * (peak - baseline);

  auto count = [&](std::size_t i) { return static_cast<double>(hist.counts[i]); };

  // outermost crossing on the right: from the last bin inward, the
  // first bin at or above threshold brackets the crossing with its
  // outer neighbour
  std::size_t ri = hist.size();
  for (std::size_t i = hist.size(); i-- > p;) {
    if (count(i) >= thr) { ri = i; break; }
  }
  if (ri == hist.size() || ri + 1 >= hist.size())
    fail(ErrorCode::level_not_reached,
         "width_at_level: histogram does not fall below the level on the right");
  double right = hist.bin_center(ri) +
                 (count(ri) - thr) / (count(ri) - count(ri + 1)) * hist.bin_width;

  std::size_t li = hist.size();
  for (std::size_t i = 0; i <= p; ++i) {
    if (count(i) >= thr) { li = i; break; }
  }
  if (li == hist.size() || li == 0)
    fail(ErrorCode::level_not_reached,
         "width_at_level: histogram does not fall below the level on the left");
  double left = hist.bin_center(li) -
                (count(li) - thr) / (count(li) - count(li - 1)) * hist.bin_width;

  WidthMeasure w;
  w.level = level;
  w.left_cross = left;
  w.right_cross = right;
  w.width = right - left;
  return w;
}

TailResidue tail_residue(const TimingHistogram& hist, const GaussianFit& fit, double level) {
  validate(fit);
  WidthMeasure m = width_at_level(hist, level, fit.baseline);
  TailResidue r;
  r.level = level;
  r.measured_width = m.width;
  r.gaussian_width = gaussian_width_at_level(fit.sigma, level);
  r.residue = r.measured_width - r.gaussian_width;
  return r;
}

double emg_peak_shape(double t, double mu, double sigma, double tau) {
  // unit-peak Gaussian convolved with a normalized trailing
  // exponential: sqrt(2 pi) sigma * EMG pdf
  if (tau <= 1e-6 * sigma) {
    double u = (t - mu) / sigma;
    return std::exp(-0.5 * u * u);
  }
  double z = (sigma / tau - (t - mu) / sigma) / kSqrt2;
  double pref = sigma / tau * 1.2533141373155003; // sigma/tau * sqrt(2 pi)/2
  if (z >= 0) {
    double u = (t - mu) / sigma;
    return pref * erfcx(z) * std::exp(-0.5 * u * u);
  }
  // far trailing side: the direct form is stable because the exponent
  // is strictly negative there
  double expo = 0.5 * (sigma / tau) * (sigma / tau) - (t - mu) / tau;
  return pref * std::exp(expo) * std::erfc(z);
}

EmgFit fit_exp_modified_gaussian(const TimingHistogram& hist) {
  require_fittable(hist);
  GaussianFit g = fit_gaussian(hist);

  double measured_fwhm = width_at_level(hist, 0.5, g.baseline).width;
  double tau0 = std::max(hist.bin_width, measured_fwhm - g.fwhm());

  const auto xs = bin_centers(hist);
  std::vector<double> ys(hist.size());
  for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = static_cast<double>(hist.counts[i]);
  const auto weights = poisson_weights(hist);

  auto model = [](double t, const std::vector<double>& p) {
    double s = std::abs(p[1]);
    if (s < 1e-12) s = 1e-12;
    return p[3] * emg_peak_shape(t, p[0], s, std::abs(p[2])) + p[4];
  };

  auto r = levmar_fit(model, xs, ys, weights,
                      {g.mu, g.sigma, tau0, g.amplitude, g.baseline});
  if (!r.converged)
    fail(ErrorCode::fit_not_converged,
         "fit_exp_modified_gaussian: no convergence within the iteration limit");

  EmgFit f;
  f.mu = r.params[0];
  f.sigma = std::abs(r.params[1]);
  f.tau = std::abs(r.params[2]);
  f.amplitude = r.params[3];
  f.baseline = std::max(0.0, r.params[4]);
  f.goodness = r.weighted_rss / static_cast<double>(hist.size());
  f.iterations = r.iterations;
  if (!(f.sigma > 0) || !(f.amplitude > 0))
    fail(ErrorCode::fit_not_converged, "fit_exp_modified_gaussian: degenerate parameters");
  return f;
}

} // namespace snspd
