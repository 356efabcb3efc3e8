#pragma once

#include <cstdint>
#include <random>

#include <boost/random/mersenne_twister.hpp>

namespace salscp {

using Engine = boost::random::mt19937_64;

/// Engine for stream `stream` of `seed`. Each (seed, stream) pair gives an
/// independent, reproducible sequence, so draw d of a source is a pure
/// function of (seed, d).
inline Engine make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Engine(seq);
}

/// Seed for child stream `stream` of `base` (replicates, arms).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x5a17u};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

/// Uniform on [0, 1) with 53 random bits; portable across standard libraries.
inline double uniform01(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

}  // namespace salscp
