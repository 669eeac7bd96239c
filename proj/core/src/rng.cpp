#include "matchmarket/rng.hpp"

#include <cmath>
#include <numbers>

namespace matchmarket {

std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

double gaussian_from_words(std::uint64_t w0, std::uint64_t w1) noexcept {
  const double u1 = to_open01(w0);
  const double u2 = to_unit01(w1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::next_below(std::uint64_t bound) noexcept {
  // Rejection below the largest multiple of bound; no modulo bias.
  const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
  std::uint64_t w = next();
  while (w >= limit) w = next();
  return w % bound;
}

}  // namespace matchmarket
