#pragma once

#include <array>
#include <cstdint>

namespace rc {

/// Deterministic xoshiro256** generator seeded through splitmix64.
///
/// The stream is fully specified by the 64-bit seed and uses only integer
/// arithmetic, so identical seeds give identical streams on every platform.
/// Doubles are formed from the top 53 bits of each draw (no std::
/// distributions, whose output is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() noexcept;

  // Uniform on [0, 1).
  double uniform() noexcept;

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;

  bool bernoulli(double p) noexcept { return uniform() < p; }

  // Independent generator derived from (seed, stream); does not advance *this.
  Rng substream(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_;
};

// One splitmix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace rc
