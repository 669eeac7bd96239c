#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace matchmarket {

// All randomness in the project reduces to the SplitMix64 output function
// (Steele/Lea/Flood 2014), so every draw is a pure function of
// (seed, purpose label, counter). Runs are reproducible bit-for-bit given
// the same seed and call sequence, independent of platform word order or
// library distributions.

constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

/// Value of the counter stream `key` at position `i`.
constexpr std::uint64_t stream_at(std::uint64_t key, std::uint64_t i) noexcept {
  return mix64(key + (i + 1) * kGolden64);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept {
  return mix64(h ^ (v + kGolden64 + (h << 6) + (h >> 2)));
}

std::uint64_t fnv1a64(std::string_view s) noexcept;

/// Map a raw word to [0, 1) with 53 usable bits.
constexpr double to_unit01(std::uint64_t w) noexcept {
  return static_cast<double>(w >> 11) * 0x1.0p-53;
}

/// Map a raw word to (0, 1]; safe as a log argument.
constexpr double to_open01(std::uint64_t w) noexcept {
  return (static_cast<double>(w >> 11) + 1.0) * 0x1.0p-53;
}

/// Standard normal deviate from two raw words (Box-Muller, cosine branch).
double gaussian_from_words(std::uint64_t w0, std::uint64_t w1) noexcept;

/// Counter-based random stream. Copyable value type; one stream per purpose,
/// never shared between threads.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : key_(mix64(seed ^ 0x5851F42D4C957F2DULL)) {}

  /// Derive an independent stream for a named purpose. Substreams of equal
  /// parents with equal labels coincide; the parent's counter is unaffected.
  [[nodiscard]] RngStream substream(std::string_view label) const {
    RngStream s(0);
    s.key_ = mix64(key_ ^ fnv1a64(label));
    s.counter_ = 0;
    return s;
  }

  std::uint64_t next() noexcept { return stream_at(key_, counter_++); }

  double uniform01() noexcept { return to_unit01(next()); }

  double gaussian() noexcept {
    const std::uint64_t w0 = next();
    const std::uint64_t w1 = next();
    return gaussian_from_words(w0, w1);
  }

  /// Unbiased integer in [0, bound). bound must be positive.
  std::uint64_t next_below(std::uint64_t bound) noexcept;

  /// In-place Fisher-Yates shuffle (own implementation: std::shuffle is
  /// implementation-defined and would break cross-platform reproducibility).
  template <typename T>
  void shuffle(std::span<T> values) noexcept {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace matchmarket
