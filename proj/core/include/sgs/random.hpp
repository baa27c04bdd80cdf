#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace sgs {

using Rng = std::mt19937_64;

// Counter-mode seed splitting. Each (seed, stream, index) triple maps to an
// independent 64-bit seed, so work items can be generated in any order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index = 0) noexcept;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream,
                    std::uint64_t index = 0) {
  return Rng(derive_seed(seed, stream, index));
}

// Uniform double in [0, 1) using the top 53 bits of one engine draw.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound).
inline std::size_t uniform_index(Rng& rng, std::size_t bound) {
  return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

// k distinct positions drawn uniformly from [0, population), in draw order.
std::vector<std::size_t> sample_without_replacement(Rng& rng,
                                                    std::size_t population,
                                                    std::size_t k);

// Stream tags used by the generators; kept in one place so that two modules
// never share a substream by accident.
namespace streams {
inline constexpr std::uint64_t kFeatureFrequencies = 0x11;
inline constexpr std::uint64_t kFeatureColumn = 0x12;
inline constexpr std::uint64_t kOutcomeBlock = 0x13;
inline constexpr std::uint64_t kSurrogateBlock = 0x14;  // + surrogate index
inline constexpr std::uint64_t kBinormalBlock = 0x1a;
inline constexpr std::uint64_t kReplicate = 0x21;
inline constexpr std::uint64_t kCell = 0x22;
inline constexpr std::uint64_t kFolds = 0x31;
inline constexpr std::uint64_t kBootstrap = 0x41;
inline constexpr std::uint64_t kCorpus = 0x51;
}  // namespace streams

}  // namespace sgs
