#pragma once

#include <cstdint>

namespace tourney {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based uniform stream: the value for (seed, stream, index) is a pure
/// function of its arguments, so any draw can be regenerated independently of
/// the order or thread in which draws are produced.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t stream, std::uint64_t index) const;
  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t stream, std::uint64_t index) const;
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace tourney
