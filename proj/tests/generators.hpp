#pragma once

// Seeded input generators for the property-style tests. Everything draws
// from the library's own SplitMix64 so failures replay exactly.

#include <cstdint>
#include <vector>

#include "cfgalg/affine.hpp"
#include "cfgalg/engine.hpp"
#include "cfgalg/multi.hpp"
#include "cfgalg/rng.hpp"
#include "cfgalg/state.hpp"

namespace cfgalg::testing {

inline Rational random_rational(SplitMix64& rng, std::uint64_t num_span = 2001,
                                std::uint64_t den_span = 60) {
  const long long num =
      static_cast<long long>(rng.below(num_span)) - static_cast<long long>(num_span / 2);
  const long long den = 1 + static_cast<long long>(rng.below(den_span));
  return Rational(BigInt(num), BigInt(den));
}

inline Rational random_nonzero_rational(SplitMix64& rng) {
  while (true) {
    Rational q = random_rational(rng);
    if (!q.is_zero())
      return q;
  }
}

inline AffineOp random_op(SplitMix64& rng) {
  switch (rng.below(5)) {
  case 0:
    return AffineOp::delta(random_rational(rng));
  case 1:
    return AffineOp::cee(random_rational(rng));
  case 2:
    return AffineOp::mu(random_rational(rng));
  case 3:
    return AffineOp::identity();
  default:
    return AffineOp(random_rational(rng), random_rational(rng));
  }
}

inline AffineOp random_invertible_op(SplitMix64& rng) {
  while (true) {
    AffineOp op = random_op(rng);
    if (!op.absorbing())
      return op;
  }
}

inline StateVec random_state(SplitMix64& rng, std::size_t n) {
  std::vector<Rational> entries;
  entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    entries.push_back(random_rational(rng));
  return StateVec(std::move(entries));
}

// Journal of invertible single-component ops (relative and nonzero scale)
// spread over random ticks and parameters.
inline Journal random_invertible_journal(SplitMix64& rng, std::size_t arity,
                                         std::uint64_t ticks, std::size_t length) {
  Journal journal;
  std::uint64_t tick = 0;
  for (std::size_t k = 0; k < length; ++k) {
    const std::size_t param = static_cast<std::size_t>(rng.below(arity));
    AffineOp op = rng.below(2) == 0 ? AffineOp::delta(random_rational(rng))
                                    : AffineOp::mu(random_nonzero_rational(rng));
    journal.push_back(JournalEntry{tick, MultiOp::lift(param, op, arity)});
    if (ticks > 0)
      tick += rng.below(2); // non-decreasing, occasionally same tick
    if (tick >= ticks)
      tick = ticks - 1;
  }
  return journal;
}

} // namespace cfgalg::testing
