#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfgalg/errors.hpp"
#include "cfgalg/multi.hpp"
#include "cfgalg/rng.hpp"
#include "cfgalg/schema.hpp"
#include "cfgalg/state.hpp"

namespace cfgalg {

/// One intended change: a componentwise operator scheduled at a tick.
struct JournalEntry {
  std::uint64_t tick;
  MultiOp op;

  friend bool operator==(const JournalEntry&, const JournalEntry&) = default;
};

/// The journal is the sequence of *intended* operations, in order, with
/// non-decreasing ticks.
using Journal = std::vector<JournalEntry>;

/// Why a history snapshot exists: the baseline, a journal entry, or a
/// spontaneous drift event.
struct Cause {
  enum class Kind { initial, journaled, drift };

  Kind kind = Kind::initial;
  std::size_t journal_index = 0; // journaled only
  std::size_t param = 0;         // drift only
  AffineOp injected;             // drift only

  static Cause initial() { return Cause{}; }
  static Cause journaled(std::size_t index) {
    Cause c;
    c.kind = Kind::journaled;
    c.journal_index = index;
    return c;
  }
  static Cause drift(std::size_t param, AffineOp injected) {
    Cause c;
    c.kind = Kind::drift;
    c.param = param;
    c.injected = std::move(injected);
    return c;
  }

  friend bool operator==(const Cause&, const Cause&) = default;
};

/// One snapshot of *actual* state. The history records every transition,
/// journaled or not; that asymmetry against the journal is the whole story
/// of open systems.
struct HistoryEntry {
  std::uint64_t tick;
  StateVec state;
  Cause cause;

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

enum class DriftStyle { set_random, add_random };

inline const char* to_string(DriftStyle style) {
  return style == DriftStyle::set_random ? "set-random" : "add-random";
}

/// Spontaneous-change model: each tick, each parameter drifts independently
/// with the given probability. set-random injects an absolute operator
/// whose value differs from the current one (a drift is a real change by
/// construction); add-random injects a nonzero relative operator.
/// Identical (seed, rate, style, schema, journal) reproduce identical runs.
struct DriftModel {
  Rational rate;      // probability per tick per parameter, in [0, 1]
  std::uint64_t seed = 0;
  DriftStyle style = DriftStyle::set_random;

  friend bool operator==(const DriftModel&, const DriftModel&) = default;
};

inline DriftModel no_drift() { return DriftModel{Rational(0), 0, DriftStyle::set_random}; }

/// Everything one simulation run produced. Immutable after construction.
struct Trace {
  SchemaFile schema;
  std::uint64_t ticks;
  StateVec initial;
  Journal journal;
  std::vector<HistoryEntry> history;
  StateVec final_state;
  DriftModel drift;
  std::size_t drift_count;

  friend bool operator==(const Trace&, const Trace&) = default;
};

namespace detail {

// Drift value grids. Finite domains draw from their encoded image; the
// rational domain draws from a small fraction grid so injected values stay
// recognisable in traces.
inline Rational sample_grid_rational(SplitMix64& rng) {
  const long long num = static_cast<long long>(rng.below(17)) - 8; // -8..8
  const long long den = 1 + static_cast<long long>(rng.below(8));  // 1..8
  return Rational(BigInt(num), BigInt(den));
}

// Absolute drift target differing from `current`, or nullopt when the
// domain has no second value to drift to.
inline std::optional<Rational> sample_set_value(SplitMix64& rng, const ParamDomain& domain,
                                                const Rational& current) {
  if (domain.kind() != DomainKind::rational) {
    const std::uint64_t n = domain.cardinality();
    if (n < 2)
      return std::nullopt;
    while (true) {
      Rational v(static_cast<long long>(rng.below(n)));
      if (!(v == current))
        return v;
    }
  }
  while (true) {
    Rational v = sample_grid_rational(rng);
    if (!(v == current))
      return v;
  }
}

// Nonzero relative drift amount, or nullopt for single-valued domains.
inline std::optional<Rational> sample_add_value(SplitMix64& rng, const ParamDomain& domain) {
  if (domain.kind() != DomainKind::rational) {
    const std::uint64_t n = domain.cardinality();
    if (n < 2)
      return std::nullopt;
    while (true) {
      Rational v(static_cast<long long>(rng.below(n)));
      if (!v.is_zero())
        return v;
    }
  }
  while (true) {
    Rational v = sample_grid_rational(rng);
    if (!v.is_zero())
      return v;
  }
}

inline void validate_drift(const DriftModel& drift) {
  if (drift.rate.num() < 0 || drift.rate > Rational(1))
    throw FormatError("drift rate must lie in [0, 1], got " + drift.rate.str());
  if (!(drift.rate.den() <= BigInt(~0ull)))
    throw FormatError("drift rate denominator exceeds 64 bits");
}

} // namespace detail

/// Runs the automaton for `ticks` steps. Within a tick, drift events come
/// first (parameters in ascending index), then the journal entries
/// scheduled at that tick, in journal order; each applied operation appends
/// one history snapshot. The run is a pure function of its arguments, seed
/// included.
inline Trace run_sim(const SchemaFile& schema, const StateVec& initial, Journal journal,
                     std::uint64_t ticks, DriftModel drift) {
  const std::size_t n = schema.arity();
  if (initial.size() != n)
    throw DimensionMismatch("initial state has " + std::to_string(initial.size()) +
                            " entries for a schema of arity " + std::to_string(n));
  detail::validate_drift(drift);

  std::uint64_t prev_tick = 0;
  for (std::size_t k = 0; k < journal.size(); ++k) {
    const JournalEntry& entry = journal[k];
    if (entry.op.dim() != n)
      throw DimensionMismatch("journal entry " + std::to_string(k) + " has dimension " +
                              std::to_string(entry.op.dim()) + ", schema arity is " +
                              std::to_string(n));
    if (k > 0 && entry.tick < prev_tick)
      throw ScheduleError("journal ticks must be non-decreasing (entry " + std::to_string(k) +
                          ")");
    if (entry.tick >= ticks)
      throw ScheduleError("journal entry " + std::to_string(k) + " scheduled at tick " +
                          std::to_string(entry.tick) + ", beyond horizon " +
                          std::to_string(ticks));
    prev_tick = entry.tick;
  }

  SplitMix64 rng(drift.seed);
  StateVec state = initial;
  std::vector<HistoryEntry> history;
  history.push_back(HistoryEntry{0, state, Cause::initial()});
  std::size_t drift_count = 0;
  std::size_t next_entry = 0;

  for (std::uint64_t t = 0; t < ticks; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!rng.bernoulli(drift.rate))
        continue;
      std::optional<Rational> value;
      AffineOp injected;
      if (drift.style == DriftStyle::set_random) {
        value = detail::sample_set_value(rng, schema.parameter(i), state[i]);
        if (!value)
          continue; // single-valued domain: no different value exists
        injected = AffineOp::cee(*value);
      } else {
        value = detail::sample_add_value(rng, schema.parameter(i));
        if (!value)
          continue;
        injected = AffineOp::delta(*value);
      }
      state = state.with(i, apply(injected, state[i]));
      history.push_back(HistoryEntry{t, state, Cause::drift(i, injected)});
      ++drift_count;
    }
    while (next_entry < journal.size() && journal[next_entry].tick == t) {
      state = apply(journal[next_entry].op, state);
      history.push_back(HistoryEntry{t, state, Cause::journaled(next_entry)});
      ++next_entry;
    }
  }

  return Trace{schema, ticks,    initial,          std::move(journal),
               std::move(history), std::move(state), std::move(drift), drift_count};
}

/// Congruence compares the operator sequences only: same symbols, same
/// order. Scheduling ticks are irrelevant.
inline bool journals_congruent(const Journal& j1, const Journal& j2) {
  if (j1.size() != j2.size())
    return false;
  for (std::size_t i = 0; i < j1.size(); ++i)
    if (!(j1[i].op == j2[i].op))
      return false;
  return true;
}

struct RollbackMode {
  enum class Kind { strict, meadow, policy, snapshot };

  Kind kind;
  std::optional<MultiOp> standing; // policy mode only

  static RollbackMode strict() { return {Kind::strict, std::nullopt}; }
  static RollbackMode meadow() { return {Kind::meadow, std::nullopt}; }
  static RollbackMode policy(MultiOp standing_policy) {
    return {Kind::policy, std::move(standing_policy)};
  }
  static RollbackMode snapshot() { return {Kind::snapshot, std::nullopt}; }
};

inline const char* to_string(RollbackMode::Kind kind) {
  switch (kind) {
  case RollbackMode::Kind::strict:
    return "strict";
  case RollbackMode::Kind::meadow:
    return "meadow";
  case RollbackMode::Kind::policy:
    return "policy";
  case RollbackMode::Kind::snapshot:
    return "snapshot";
  }
  return "unknown";
}

struct EntryStatus {
  enum class Outcome { inverted, not_invertible };

  std::size_t journal_index;
  Outcome outcome;
  std::vector<std::size_t> failed_components; // not_invertible only

  friend bool operator==(const EntryStatus&, const EntryStatus&) = default;
};

struct RollbackResult {
  StateVec state;
  std::vector<EntryStatus> statuses;          // journal entries, reverse order
  std::optional<std::size_t> failed_entry;    // first non-invertible (strict)

  bool ok() const noexcept { return !failed_entry.has_value(); }
};

/// Undoes a trace's *journal*. Drift events are invisible to every
/// inverse-based mode, which is precisely why open systems defeat
/// journal rollback.
///
///  - strict: inverse entries in reverse order from final; stops at the
///    first non-invertible entry.
///  - meadow: same walk with zero-totalized inverses; always total, the
///    result is grounded rather than restored.
///  - policy: applies the standing policy once. Forward-moving.
///  - snapshot: returns the recorded baseline snapshot; works regardless
///    of invertibility because it replays history, not algebra.
inline RollbackResult rollback(const Trace& trace, const RollbackMode& mode) {
  switch (mode.kind) {
  case RollbackMode::Kind::strict:
  case RollbackMode::Kind::meadow: {
    const bool strict = mode.kind == RollbackMode::Kind::strict;
    StateVec state = trace.final_state;
    std::vector<EntryStatus> statuses;
    statuses.reserve(trace.journal.size());
    for (std::size_t k = trace.journal.size(); k-- > 0;) {
      const MultiOp& op = trace.journal[k].op;
      if (strict) {
        try {
          state = apply(invert_strict(op), state);
        } catch (const NotInvertible& e) {
          statuses.push_back(EntryStatus{k, EntryStatus::Outcome::not_invertible,
                                         e.components()});
          return RollbackResult{std::move(state), std::move(statuses), k};
        }
      } else {
        state = apply(invert_meadow(op), state);
      }
      statuses.push_back(EntryStatus{k, EntryStatus::Outcome::inverted, {}});
    }
    return RollbackResult{std::move(state), std::move(statuses), std::nullopt};
  }
  case RollbackMode::Kind::policy: {
    if (!mode.standing)
      throw KindMismatch("policy rollback requires a standing policy operator");
    for (std::size_t i = 0; i < mode.standing->dim(); ++i)
      if (!mode.standing->part(i).absorbing())
        throw KindMismatch("policy rollback requires absolute components (component " +
                           std::to_string(i) + " is not)");
    return RollbackResult{apply(*mode.standing, trace.final_state), {}, std::nullopt};
  }
  case RollbackMode::Kind::snapshot: {
    if (trace.history.empty())
      throw EmptyHistory("trace has no history to restore from");
    return RollbackResult{trace.history.front().state, {}, std::nullopt};
  }
  }
  throw KindMismatch("unknown rollback mode");
}

/// Commit/restore stack: a commit applies a change and pushes the resulting
/// state; a restore pops. Previous states come back regardless of whether
/// the committed operations were invertible.
class SnapshotStack {
public:
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }

  StateVec commit(const MultiOp& g, const StateVec& state, std::uint64_t tick) {
    StateVec next = apply(g, state);
    entries_.emplace_back(tick, next);
    return next;
  }

  std::pair<std::uint64_t, StateVec> restore() {
    if (entries_.empty())
      throw EmptyHistory();
    auto top = std::move(entries_.back());
    entries_.pop_back();
    return top;
  }

private:
  std::vector<std::pair<std::uint64_t, StateVec>> entries_;
};

/// Counting facts about one trace: history transitions versus journal
/// length, openness, and whether strict rollback could work in principle.
struct LemmaReport {
  std::size_t journal_len;         // |J|
  std::size_t history_transitions; // |H|, the non-baseline snapshots
  std::size_t drift_count;
  bool counts_equal;               // |H| == |J|
  bool closed;                     // no drift: a deterministic run
  bool strict_rollback_feasible;   // every journal component invertible
};

inline LemmaReport lemma_report(const Trace& trace) {
  std::size_t transitions = 0;
  for (const HistoryEntry& h : trace.history)
    if (h.cause.kind != Cause::Kind::initial)
      ++transitions;

  const std::size_t journal_len = trace.journal.size();
  if (transitions < journal_len || (transitions == journal_len) != (trace.drift_count == 0))
    throw std::logic_error("trace violates the history/journal counting laws");

  bool feasible = true;
  for (const JournalEntry& entry : trace.journal)
    for (const AffineOp& part : entry.op.parts())
      if (part.absorbing())
        feasible = false;

  return LemmaReport{journal_len, transitions,       trace.drift_count,
                     transitions == journal_len, trace.drift_count == 0, feasible};
}

} // namespace cfgalg
