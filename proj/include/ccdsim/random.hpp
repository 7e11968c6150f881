#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>

namespace ccdsim {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic substream seed from a master seed and a path of labels.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p));
  return h;
}

/// Bit pattern of a double, for seeding by axis value.
inline std::uint64_t seed_label(double v) { return std::bit_cast<std::uint64_t>(v + 0.0); }

/// Stream tags keep substreams of one capture apart.
enum class Stream : std::uint64_t {
  kExpose = 1,
  kReadout = 2,
  kOffset = 3,
  kNoiseEnvelope = 4,
  kProbeSchedule = 5,
  kLegitimate = 6,
  kMalicious = 7,
};

inline std::uint64_t tag(Stream s) { return static_cast<std::uint64_t>(s); }

}  // namespace ccdsim
