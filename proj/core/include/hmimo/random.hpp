// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#ifndef HMIMO_RANDOM_HPP
#define HMIMO_RANDOM_HPP

#include <cstdint>

#include "hmimo/types.hpp"

namespace hmimo {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of the independent stream owned by (master_seed, stream_index).
/// Counter based, so any trial can be replayed without touching the others.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
  return splitmix64(master_seed ^ splitmix64(stream_index + 0x632BE59BD9B4E019ULL));
}

inline Rng make_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
  return Rng{derive_seed(master_seed, stream_index)};
}

/// Named sub-streams of one trial; keeps the draw order of one quantity
/// independent of how many numbers another quantity consumed.
enum class Substream : std::uint64_t {
  users = 1,
  excitation = 2,
  fading = 3,
  csi_error = 4,
  interference = 5,
};

inline Rng make_substream(std::uint64_t master_seed, std::uint64_t trial, Substream which) {
  return Rng{derive_seed(derive_seed(master_seed, trial), static_cast<std::uint64_t>(which))};
}

}  // namespace hmimo

#endif  // HMIMO_RANDOM_HPP
