#pragma once

#include <cstddef>
#include <cstdint>

namespace hide {

/// 64-bit linear congruential generator (Knuth MMIX constants):
///   state' = state * 6364136223846793005 + 1442695040888963407  (mod 2^64)
/// Outputs are the high 32 bits of the new state, so sequences are identical
/// on every platform.
class Lcg64 {
 public:
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

  explicit Lcg64(std::uint64_t seed) : state_(seed) {}

  std::uint32_t next_u32() {
    state_ = state_ * kMultiplier + kIncrement;
    return static_cast<std::uint32_t>(state_ >> 32);
  }
  /// Uniform in [0, 1) with 32-bit resolution.
  double uniform01() { return static_cast<double>(next_u32()) * 0x1p-32; }
  /// Uniform in [0, n) by multiply-shift.
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>((static_cast<std::uint64_t>(next_u32()) * n) >> 32);
  }
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform_index(static_cast<std::size_t>(hi - lo) + 1));
  }
  [[nodiscard]] std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace hide
