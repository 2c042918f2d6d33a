#pragma once

#include <optional>
#include <string>
#include <utility>

#include "cfgalg/errors.hpp"
#include "cfgalg/rational.hpp"

namespace cfgalg {

/// The affine map x -> a*x + b over the rational field.
///
/// The three primitive change operators are special shapes of this pair:
/// delta(q) = (1, q) adds q, cee(q) = (0, q) sets the value to q outright,
/// mu(q) = (q, 0) scales by q. Composition of any two affine maps is again
/// an affine map, so this one type carries the whole operator algebra.
class AffineOp {
public:
  AffineOp() : a_(1), b_(0) {}
  AffineOp(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

  static AffineOp identity() { return AffineOp(); }
  static AffineOp delta(Rational q) { return AffineOp(Rational(1), std::move(q)); }
  static AffineOp cee(Rational q) { return AffineOp(Rational(0), std::move(q)); }
  static AffineOp mu(Rational q) { return AffineOp(std::move(q), Rational(0)); }

  const Rational& a() const noexcept { return a_; }
  const Rational& b() const noexcept { return b_; }

  /// An absorbing operator's output is independent of its input.
  bool absorbing() const noexcept { return a_.is_zero(); }

  friend bool operator==(const AffineOp&, const AffineOp&) = default;

private:
  Rational a_;
  Rational b_;
};

inline Rational apply(const AffineOp& op, const Rational& x) { return op.a() * x + op.b(); }

/// Sequential composition: the result applies `first`, then `second`.
/// Traces read in execution order; the matrix-product convention is the
/// mirror image and the tests pin the correspondence.
inline AffineOp then(const AffineOp& first, const AffineOp& second) {
  return AffineOp(second.a() * first.a(), second.a() * first.b() + second.b());
}

enum class OpShape { identity, relative, absolute, scale, general_affine };

inline const char* to_string(OpShape shape) {
  switch (shape) {
  case OpShape::identity:
    return "identity";
  case OpShape::relative:
    return "relative";
  case OpShape::absolute:
    return "absolute";
  case OpShape::scale:
    return "scale";
  case OpShape::general_affine:
    return "affine";
  }
  return "unknown";
}

struct OpKind {
  OpShape shape;
  std::optional<Rational> q; // defining parameter; absent for identity/general

  static OpKind identity() { return {OpShape::identity, std::nullopt}; }
  static OpKind relative(Rational q) { return {OpShape::relative, std::move(q)}; }
  static OpKind absolute(Rational q) { return {OpShape::absolute, std::move(q)}; }
  static OpKind scale(Rational q) { return {OpShape::scale, std::move(q)}; }
  static OpKind general() { return {OpShape::general_affine, std::nullopt}; }

  friend bool operator==(const OpKind&, const OpKind&) = default;
};

/// Total classification by the (a, b) shape. Note mu(0) lands in
/// absolute(0): a zero scale is an absorbing set-to-zero, not a member of
/// the scaling group.
inline OpKind classify(const AffineOp& op) {
  if (op.a().is_one())
    return op.b().is_zero() ? OpKind::identity() : OpKind::relative(op.b());
  if (op.a().is_zero())
    return OpKind::absolute(op.b());
  if (op.b().is_zero())
    return OpKind::scale(op.a());
  return OpKind::general();
}

inline bool commutes(const AffineOp& p, const AffineOp& q) {
  return then(p, q) == then(q, p);
}

/// Strict inverse: exists iff the scale part is nonzero. Undoing an
/// absorbing change needs history, not algebra.
inline AffineOp invert_strict(const AffineOp& op) {
  if (op.a().is_zero())
    throw NotInvertible("absorbing operator (a = 0) has no strict inverse");
  const Rational inv_a = op.a().strict_inv();
  return AffineOp(inv_a, -(inv_a * op.b()));
}

/// Zero-totalized inverse: same formula with meadow division, so an
/// absorbing operator inverts to (0, 0). Well-defined, grounded at zero,
/// and generally non-restoring.
inline AffineOp invert_meadow(const AffineOp& op) {
  const Rational inv_a = op.a().meadow_inv();
  return AffineOp(inv_a, -(inv_a * op.b()));
}

/// The forward-moving remedy: discard `op` and re-assert the standing
/// policy operator, which must be absolute.
inline AffineOp invert_with_policy(const AffineOp& /*op*/, const AffineOp& standing) {
  if (!standing.absorbing())
    throw KindMismatch("policy operator must be absolute, got (" + standing.a().str() + ", " +
                       standing.b().str() + ")");
  return standing;
}

/// Pointwise sum of two absolute operators: cee(x) (+) cee(y) = cee(x + y).
inline AffineOp oplus(const AffineOp& p, const AffineOp& q) {
  if (!p.absorbing() || !q.absorbing())
    throw KindMismatch("oplus is defined on absolute operators only");
  return AffineOp::cee(p.b() + q.b());
}

/// Shifts an absolute operator's fixed point from q0 to q0 + shift.
inline AffineOp calibrate(const AffineOp& op, const Rational& shift) {
  if (!op.absorbing())
    throw KindMismatch("calibrate is defined on absolute operators only");
  return AffineOp::cee(op.b() + shift);
}

} // namespace cfgalg
