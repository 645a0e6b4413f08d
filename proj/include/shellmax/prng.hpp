#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace shellmax {

/// 64-bit LCG with fixed constants; each draw advances the state once and
/// returns its top 32 bits. Streams are identical on every platform.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed) {}

  std::uint32_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<std::uint32_t>(state_ >> 32);
  }

  /// Uniform in [0, n) by multiply-shift on one draw; n <= 2^32.
  std::uint64_t below(std::uint64_t n) { return (static_cast<std::uint64_t>(next()) * n) >> 32; }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// k distinct indices of [0, n) by partial Fisher-Yates, returned sorted.
std::vector<std::size_t> sample_indices(Lcg& rng, std::size_t n, std::size_t k);

}  // namespace shellmax
