#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cfgalg/affine.hpp"
#include "cfgalg/errors.hpp"
#include "cfgalg/state.hpp"

namespace cfgalg {

/// Componentwise family of affine maps: part i acts on state entry i and
/// nothing else. This is the diagonal, orthogonal case with no
/// cross-parameter coupling, so composition and inversion act slot by slot.
class MultiOp {
public:
  explicit MultiOp(std::vector<AffineOp> parts) : parts_(std::move(parts)) {
    if (parts_.empty())
      throw DimensionMismatch("multi-op must have at least one component");
  }

  static MultiOp identity(std::size_t n) {
    return MultiOp(std::vector<AffineOp>(n, AffineOp::identity()));
  }

  /// Places `op` at component i, identity everywhere else.
  static MultiOp lift(std::size_t i, AffineOp op, std::size_t n) {
    if (i >= n)
      throw IndexOutOfRange("lift index " + std::to_string(i) + " out of range for dimension " +
                            std::to_string(n));
    std::vector<AffineOp> parts(n, AffineOp::identity());
    parts[i] = std::move(op);
    return MultiOp(std::move(parts));
  }

  std::size_t dim() const noexcept { return parts_.size(); }
  const AffineOp& part(std::size_t i) const { return parts_[i]; }
  const std::vector<AffineOp>& parts() const noexcept { return parts_; }

  bool is_identity() const {
    for (const AffineOp& p : parts_)
      if (!(p == AffineOp::identity()))
        return false;
    return true;
  }

  friend bool operator==(const MultiOp&, const MultiOp&) = default;

private:
  std::vector<AffineOp> parts_;
};

namespace detail {

inline void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw DimensionMismatch(std::string(what) + ": dimensions " + std::to_string(a) + " and " +
                            std::to_string(b) + " differ");
}

} // namespace detail

inline StateVec apply(const MultiOp& op, const StateVec& x) {
  detail::require_same_dim(op.dim(), x.size(), "apply");
  std::vector<Rational> out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out.push_back(apply(op.part(i), x[i]));
  return StateVec(std::move(out));
}

inline MultiOp then(const MultiOp& first, const MultiOp& second) {
  detail::require_same_dim(first.dim(), second.dim(), "then");
  std::vector<AffineOp> parts;
  parts.reserve(first.dim());
  for (std::size_t i = 0; i < first.dim(); ++i)
    parts.push_back(then(first.part(i), second.part(i)));
  return MultiOp(std::move(parts));
}

inline bool commutes(const MultiOp& p, const MultiOp& q) {
  return then(p, q) == then(q, p);
}

/// Componentwise strict inversion; failures aggregate, the exception lists
/// every absorbing component.
inline MultiOp invert_strict(const MultiOp& op) {
  std::vector<std::size_t> failing;
  for (std::size_t i = 0; i < op.dim(); ++i)
    if (op.part(i).absorbing())
      failing.push_back(i);
  if (!failing.empty()) {
    std::string msg = "components not strictly invertible:";
    for (std::size_t i : failing)
      msg += " " + std::to_string(i);
    throw NotInvertible(msg, std::move(failing));
  }
  std::vector<AffineOp> parts;
  parts.reserve(op.dim());
  for (std::size_t i = 0; i < op.dim(); ++i)
    parts.push_back(invert_strict(op.part(i)));
  return MultiOp(std::move(parts));
}

inline MultiOp invert_meadow(const MultiOp& op) {
  std::vector<AffineOp> parts;
  parts.reserve(op.dim());
  for (std::size_t i = 0; i < op.dim(); ++i)
    parts.push_back(invert_meadow(op.part(i)));
  return MultiOp(std::move(parts));
}

} // namespace cfgalg
