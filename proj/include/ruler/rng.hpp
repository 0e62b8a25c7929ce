#pragma once

#include <cstdint>

namespace ruler {

// Deterministic random stream: xoshiro256** seeded through splitmix64.
// Streams derived from (seed, epoch, index) are a pure function of the
// triple and identical across platforms; std:: distributions are not, which
// is why sampling is implemented here rather than with <random> adaptors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng derive(std::uint64_t seed, std::uint64_t epoch,
                    std::uint64_t index);

  std::uint64_t next_u64();

  // Uniform over [0, 1) with 53 bits of precision.
  double next_double();

  // Uniform over [lo, hi] inclusive, unbiased via rejection. Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // True with probability p; p outside [0,1] clamps.
  bool bernoulli(double p);

 private:
  std::uint64_t s_[4];
};

}  // namespace ruler
