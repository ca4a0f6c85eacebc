#pragma once

#include <cstdint>
#include <random>

namespace goe_transit {

/// Engine type behind every substream.
using Engine = std::mt19937_64;

/// Identifies which part of a draw a substream feeds. Each component gets its own
/// stream so that, e.g., changing N_b never perturbs H_a for the same sample index.
enum class StreamComponent : std::uint64_t {
  reservoir_a = 1,
  coupling_v2 = 2,
  coupling_v3 = 3,
  reservoir_b = 4,
  coupling_v4 = 5,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the substream for (master_seed, sample_index, component). Pure function of
/// its arguments, so draws are independent of execution order and worker count.
constexpr std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t sample_index,
                                       StreamComponent component) noexcept {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ splitmix64(sample_index + 0x632be59bd9b4e019ULL));
  h = splitmix64(h ^ static_cast<std::uint64_t>(component));
  return h;
}

inline Engine make_stream(std::uint64_t master_seed, std::uint64_t sample_index,
                          StreamComponent component) {
  const std::uint64_t s = substream_seed(master_seed, sample_index, component);
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                    static_cast<std::uint32_t>(sample_index),
                    static_cast<std::uint32_t>(component)};
  return Engine(seq);
}

}  // namespace goe_transit
