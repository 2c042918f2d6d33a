#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cfgalg/errors.hpp"
#include "cfgalg/multi.hpp"
#include "cfgalg/state.hpp"

namespace cfgalg {

/// A desired-state policy: exactly one fixed point per parameter, realized
/// as one absolute operator per component. The representation cannot hold
/// two fixed points for the same parameter, which is the uniqueness
/// property the repair loop relies on.
class Policy {
public:
  explicit Policy(StateVec desired) : desired_(std::move(desired)) {}

  const StateVec& desired() const noexcept { return desired_; }
  std::size_t dim() const noexcept { return desired_.size(); }

  /// The policy as an operator: component i sets parameter i to desired i.
  MultiOp as_op() const {
    std::vector<AffineOp> parts;
    parts.reserve(desired_.size());
    for (const Rational& q : desired_)
      parts.push_back(AffineOp::cee(q));
    return MultiOp(std::move(parts));
  }

  friend bool operator==(const Policy&, const Policy&) = default;

private:
  StateVec desired_;
};

struct RepairReport {
  StateVec pre;
  StateVec post;
  std::vector<std::size_t> changed_indices; // ascending
  int iterations_to_fixpoint;               // 0 if already converged, else 1

  friend bool operator==(const RepairReport&, const RepairReport&) = default;
};

/// One repair pass. Absolute operators converge in a single application,
/// whatever the history of the input state; a second pass is always a
/// no-op.
inline RepairReport converge(const Policy& policy, const StateVec& x) {
  if (policy.dim() != x.size())
    throw DimensionMismatch("policy dimension " + std::to_string(policy.dim()) +
                            " does not match state length " + std::to_string(x.size()));
  std::vector<std::size_t> changed;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] == policy.desired()[i]))
      changed.push_back(i);
  const int iterations = changed.empty() ? 0 : 1;
  return RepairReport{x, policy.desired(), std::move(changed), iterations};
}

/// Moves one parameter's fixed point. Old and new component operators do
/// not commute when the values differ; recalibration is a genuine change of
/// policy, not a shuffle.
inline Policy recalibrate(const Policy& policy, std::size_t i, Rational new_q0) {
  if (i >= policy.dim())
    throw IndexOutOfRange("recalibrate index " + std::to_string(i) +
                          " out of range for dimension " + std::to_string(policy.dim()));
  return Policy(policy.desired().with(i, std::move(new_q0)));
}

/// The "undo to origin" remedy: an operator that drives any state to the
/// chosen baseline. Forward-moving and idempotent, like any absolute
/// change.
inline MultiOp reset_to_baseline(const StateVec& baseline) {
  return Policy(baseline).as_op();
}

} // namespace cfgalg
