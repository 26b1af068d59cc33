#pragma once

#include <cstdint>

namespace dst {

// SplitMix64 used as a counter-based generator: draw k of stream s is
//   mix(key(seed, s) + (k + 1) * 0x9E3779B97F4A7C15)
// with mix the SplitMix64 finalizer. Only integer arithmetic is involved, so
// a seed reproduces the same bits on every platform and in every language
// that implements the same three lines. Normals use Box-Muller on two
// consecutive draws.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  // Pure: the raw 64-bit draw at `counter`.
  std::uint64_t at(std::uint64_t counter) const;

  std::uint64_t next_u64() { return at(counter_++); }
  // Uniform in the open interval (0, 1), 53-bit resolution.
  double next_uniform();
  double next_normal();

  std::uint64_t counter() const noexcept { return counter_; }

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dst
