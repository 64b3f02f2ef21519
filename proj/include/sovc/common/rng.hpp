#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace sovc {

// SplitMix64. State advances by the golden-ratio increment 0x9E3779B97F4A7C15;
// output mixing uses the constants 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB
// with shifts 30, 27, 31. Every stochastic step in the pipeline draws from
// this generator so results are reproducible across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) built from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be > 0.
  std::size_t below(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  /// Standard normal via Box-Muller (uses two uniforms per call).
  double normal();

  /// Index drawn proportionally to non-negative weights; falls back to the
  /// last index with positive weight when rounding runs past the end.
  std::size_t categorical(std::span<const double> weights);

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// Mixes a seed with a string tag (FNV-1a over the tag, then one SplitMix step)
/// to derive independent, stable sub-streams.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);

}  // namespace sovc
