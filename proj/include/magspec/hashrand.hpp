#pragma once

#include <cstdint>

#include "magspec/lattice.hpp"

namespace magspec {

// Deterministic lattice-indexed randomness. Used by the "random" potential,
// gauge and coefficient builders so that property tests can evaluate random
// objects at arbitrary points of Z^d without storing anything.
namespace hashrand {

inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  return mix(h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
}

inline std::uint64_t hash_point(std::uint64_t seed, const LatticePoint& p) {
  std::uint64_t h = mix(seed);
  for (Coord c : p.c) h = combine(h, (std::uint64_t)c);
  return h;
}

inline std::uint64_t hash_pair(std::uint64_t seed, const LatticePoint& a, const LatticePoint& b) {
  std::uint64_t h = hash_point(seed, a);
  for (Coord c : b.c) h = combine(h, (std::uint64_t)c);
  return h;
}

/// Uniform in [0, 1).
inline double unit(std::uint64_t h) { return (double)(h >> 11) * 0x1.0p-53; }

/// Uniform in [-amplitude, amplitude].
inline double symmetric(std::uint64_t h, double amplitude) {
  return amplitude * (2.0 * unit(h) - 1.0);
}

}  // namespace hashrand
}  // namespace magspec
