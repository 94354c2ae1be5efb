#pragma once

#include "embedlens/errors.hpp"
#include "embedlens/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace embedlens::detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for the stream-th independent task derived from a user seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

using Engine = std::mt19937_64;

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t uniform_index(Engine& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
}

// Samples indices with exact rational weights. Cumulative weights are
// quantized to 64-bit fixed point, so the draw depends only on the engine
// output.
class DiscreteSampler {
 public:
  DiscreteSampler() = default;

  explicit DiscreteSampler(std::span<const Rational> weights) {
    if (weights.empty()) throw ValidationError("sampler needs at least one weight");
    Rational total = 0;
    for (const auto& w : weights) {
      if (w < 0) throw ValidationError("negative sampling weight");
      total += w;
    }
    if (total <= 0) throw ValidationError("sampling weights sum to zero");
    const Integer scale = Integer(1) << 64;
    Rational cum = 0;
    thresholds_.reserve(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
      cum += weights[i];
      if (i + 1 == weights.size()) {
        thresholds_.push_back(~std::uint64_t{0});
        break;
      }
      const Rational scaled = cum / total * Rational(scale);
      Integer fl = boost::multiprecision::numerator(scaled) /
                   boost::multiprecision::denominator(scaled);
      if (fl >= scale) fl = scale - 1;
      thresholds_.push_back(fl.convert_to<std::uint64_t>());
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] > 0) last_positive_ = i;
    }
  }

  std::size_t operator()(Engine& rng) const {
    const std::uint64_t u = rng();
    auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), u);
    std::size_t idx = it == thresholds_.end()
                          ? thresholds_.size() - 1
                          : static_cast<std::size_t>(it - thresholds_.begin());
    // The last threshold saturates; never land on a trailing zero weight.
    return std::min(idx, last_positive_);
  }

  std::size_t size() const { return thresholds_.size(); }

 private:
  std::vector<std::uint64_t> thresholds_;
  std::size_t last_positive_ = 0;
};

}  // namespace embedlens::detail
