#pragma once

#include <cstdint>
#include <random>

namespace htmrec {

// Every random draw in this project goes through the helpers below so that
// results are bit-identical across platforms and standard library versions.
// std::mt19937_64 output is pinned by the standard; the distributions are
// not, so we never use std::uniform_*_distribution.

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seed for the stream with the given id, derived from a base seed.
// Distinct ids give decorrelated streams; (seed, id) fully determines it.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream_id) {
  return mix64(seed + kGoldenGamma * (stream_id + 1));
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  return std::mt19937_64(derive_stream(seed, stream_id));
}

// Uniform double in [0, 1) built from the top 53 bits of one engine output.
inline double unit_real(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

// Uniform byte; 256 divides 2^64 so taking the low bits is unbiased.
inline std::uint8_t uniform_byte(std::mt19937_64& engine) {
  return static_cast<std::uint8_t>(engine() & 0xFF);
}

}  // namespace htmrec
