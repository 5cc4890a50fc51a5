#include "tourney/rng.hpp"

namespace tourney {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t index) const {
  const std::uint64_t key = mix64(seed_ ^ mix64(stream * 0xd1b54a32d192ed03ULL + 1));
  return mix64(key + index * 0x9e3779b97f4a7c15ULL);
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t index) const {
  return (static_cast<double>(bits(stream, index) >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace tourney
