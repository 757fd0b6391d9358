#pragma once

#include <cstdint>
#include <random>

namespace sspec {

/// Mixes a master seed and a draw index into the seed of an independent
/// substream. The mapping is part of the reproducibility contract and must
/// never change: two rounds of the splitmix64 finalizer over
/// `seed + golden * (index + 1)`.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// A seeded pseudo-random stream. Every matrix draw gets its own stream,
/// derived from (master seed, draw index), so results do not depend on the
/// order in which draws are evaluated.
class RandomStream {
 public:
  using engine_type = std::mt19937_64;

  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static RandomStream substream(std::uint64_t seed, std::uint64_t index) {
    return RandomStream(split_seed(seed, index));
  }

  engine_type& engine() noexcept { return engine_; }

 private:
  engine_type engine_;
};

}  // namespace sspec
