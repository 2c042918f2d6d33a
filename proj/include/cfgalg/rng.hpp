#pragma once

#include <cstdint>
#include <stdexcept>

#include "cfgalg/rational.hpp"

namespace cfgalg {

/// SplitMix64 (Steele, Lea & Flood; constants from Vigna's reference
/// implementation). The state advances by the golden-gamma increment and
/// the output is the mixed state. The sequence is a pure function of the
/// seed and has no platform-dependent behaviour, which is what makes
/// simulation traces byte-reproducible everywhere.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Unbiased uniform draw from [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0)
      throw std::invalid_argument("below(0)");
    const std::uint64_t reject_under = (0 - n) % n; // 2^64 mod n
    std::uint64_t x = next();
    while (x < reject_under)
      x = next();
    return x % n;
  }

  /// Exact Bernoulli trial with rational probability p = num/den in [0, 1].
  /// The endpoints consume no draws, so a rate-0 run never touches the
  /// generator.
  bool bernoulli(const Rational& p) {
    if (p.num() == 0)
      return false;
    if (p.num() == p.den())
      return true;
    const auto den = p.den().convert_to<std::uint64_t>();
    const auto num = p.num().convert_to<std::uint64_t>();
    return below(den) < num;
  }

private:
  std::uint64_t state_;
};

} // namespace cfgalg
