#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "cfgalg/errors.hpp"
#include "cfgalg/rational.hpp"

namespace cfgalg {

/// Fixed-length vector of field values, one entry per configuration
/// parameter. Length is set at construction and never changes; zero-length
/// vectors are rejected.
class StateVec {
public:
  explicit StateVec(std::vector<Rational> entries) : entries_(std::move(entries)) {
    if (entries_.empty())
      throw LengthMismatch("state vector must have at least one entry");
  }
  StateVec(std::initializer_list<Rational> entries)
      : StateVec(std::vector<Rational>(entries)) {}

  static StateVec zeros(std::size_t n) {
    return StateVec(std::vector<Rational>(n, Rational()));
  }

  std::size_t size() const noexcept { return entries_.size(); }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }

  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  StateVec with(std::size_t i, Rational v) const {
    if (i >= entries_.size())
      throw IndexOutOfRange("state index " + std::to_string(i) + " out of range");
    std::vector<Rational> copy = entries_;
    copy[i] = std::move(v);
    return StateVec(std::move(copy));
  }

  friend bool operator==(const StateVec&, const StateVec&) = default;

private:
  std::vector<Rational> entries_;
};

inline StateVec operator+(const StateVec& u, const StateVec& v) {
  if (u.size() != v.size())
    throw LengthMismatch("vector addition needs equal lengths (" +
                         std::to_string(u.size()) + " vs " + std::to_string(v.size()) + ")");
  std::vector<Rational> sum;
  sum.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    sum.push_back(u[i] + v[i]);
  return StateVec(std::move(sum));
}

inline StateVec operator*(const Rational& a, const StateVec& v) {
  std::vector<Rational> scaled;
  scaled.reserve(v.size());
  for (const Rational& x : v)
    scaled.push_back(a * x);
  return StateVec(std::move(scaled));
}

inline StateVec operator-(const StateVec& v) { return Rational(-1) * v; }

inline StateVec operator-(const StateVec& u, const StateVec& v) { return u + (-v); }

} // namespace cfgalg
