// random.cpp - xoshiro256++ core, Box-Muller normals, PTRS Poisson

#include "random.hpp"

#include <cmath>

#include "error.hpp"

namespace snspd {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

constexpr double kPi = 3.141592653589793238462643383279502884;

} // namespace

void RandomStream::seed_state(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t sm = a;
  sm ^= splitmix64(sm) + 0x9e3779b97f4a7c15ULL * (b + 1);
  sm ^= splitmix64(sm) + 0xd1b54a32d192ed03ULL * (c + 1);
  for (auto& w : s_) w = splitmix64(sm);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1; // xoshiro forbids all-zero
}

RandomStream::RandomStream(std::uint64_t seed) { seed_state(seed, 0, 0); }

RandomStream RandomStream::substream(std::uint64_t seed, std::uint64_t index,
                                     std::uint64_t purpose) {
  RandomStream r(0);
  r.seed_state(seed, index, purpose);
  r.has_spare_ = false;
  return r;
}

std::uint64_t RandomStream::next_u64() {
  std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open() { return 1.0 - uniform(); }

double RandomStream::normal(double sigma) {
  if (has_spare_) {
    has_spare_ = false;
    return spare_ * sigma;
  }
  double u1 = uniform_open();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double z0 = r * std::cos(2.0 * kPi * u2);
  spare_ = r * std::sin(2.0 * kPi * u2);
  has_spare_ = true;
  return z0 * sigma;
}

double RandomStream::exponential(double tau) {
  if (tau < 0) fail(ErrorCode::invalid_argument, "exponential: tau >= 0 required");
  if (tau == 0) return 0.0;
  return -tau * std::log(uniform_open());
}

std::uint64_t RandomStream::poisson(double mean) {
  if (!(mean >= 0) || !std::isfinite(mean))
    fail(ErrorCode::invalid_argument, "poisson: mean must be finite and >= 0");
  if (mean == 0) return 0;
  if (mean < 30.0) return poisson_knuth(mean);
  return poisson_ptrs(mean);
}

std::uint64_t RandomStream::poisson_knuth(double mean) {
  double limit = std::exp(-mean);
  double p = 1.0;
  std::uint64_t k = 0;
  do {
    ++k;
    p *= uniform_open();
  } while (p > limit);
  return k - 1;
}

// Hoermann's transformed rejection with squeeze (PTRS), valid for mean >= 10.
std::uint64_t RandomStream::poisson_ptrs(double mean) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    double u = uniform() - 0.5;
    double v = uniform_open();
    double us = 0.5 - std::abs(u);
    double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    double k = kf;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        k * loglam - mean - std::lgamma(k + 1.0))
      return static_cast<std::uint64_t>(kf);
  }
}

} // namespace snspd
