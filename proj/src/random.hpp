// random.hpp - seeded, splittable random streams for the simulator
//
// Self-contained xoshiro256++ behind a tiny distribution layer, so the
// same seed gives bit-identical streams independent of the standard
// library. Substreams are derived from (seed, index, purpose) and are
// independent of scheduling order.
#pragma once

#include <array>
#include <cstdint>

namespace snspd {

class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed);

  // Named substream: same (seed, index, purpose) always yields the
  // same stream, regardless of how many other streams were drawn.
  static RandomStream substream(std::uint64_t seed, std::uint64_t index,
                                std::uint64_t purpose);

  std::uint64_t next_u64();
  double uniform();                 // [0, 1)
  double uniform_open();            // (0, 1]
  double normal(double sigma);      // mean 0
  double exponential(double tau);   // mean tau; tau == 0 gives exactly 0
  std::uint64_t poisson(double mean);

private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;

  void seed_state(std::uint64_t a, std::uint64_t b, std::uint64_t c);
  std::uint64_t poisson_knuth(double mean);
  std::uint64_t poisson_ptrs(double mean);
};

} // namespace snspd
