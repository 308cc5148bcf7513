#pragma once

#include <cstdint>

namespace lloydspp {

/// Counter-based uniform stream built from the SplitMix64 finalizer: the
/// output is a pure function of (seed, stream, i, t), so any draw can be
/// regenerated independently on any platform and instances/seed-vectors can
/// be produced in parallel without shared state.
///
/// Stream ids keep the independent uses of randomness apart; i is the sample
/// (instance) index and t the slot within the sample.
enum class RngStream : std::uint64_t {
  kSeedVector = 1,   // t = seeding round
  kComponent = 2,    // Gaussian-grid component selection, t = shuffle step
  kGaussian = 3,     // Box-Muller pairs, t = (label slot << 33) | 2*point (+1)
  kLabelChoice = 4,  // label-subset label selection, t = shuffle step
  kRowChoice = 5,    // label-subset row selection, t = label * max_rows + step
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

inline std::uint64_t rng_bits(std::uint64_t seed, RngStream stream,
                              std::uint64_t i, std::uint64_t t) {
  std::uint64_t h = detail::splitmix64(seed);
  h = detail::splitmix64(h ^ static_cast<std::uint64_t>(stream));
  h = detail::splitmix64(h ^ i);
  h = detail::splitmix64(h ^ t);
  return h;
}

/// Uniform draw in [0,1) with 53-bit resolution.
inline double rng_uniform(std::uint64_t seed, RngStream stream, std::uint64_t i,
                          std::uint64_t t) {
  return static_cast<double>(rng_bits(seed, stream, i, t) >> 11) * 0x1.0p-53;
}

}  // namespace lloydspp
