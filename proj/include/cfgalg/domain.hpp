#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cfgalg/errors.hpp"
#include "cfgalg/rational.hpp"

namespace cfgalg {

enum class DomainKind { rational, finite_int, finite_string };

inline const char* to_string(DomainKind kind) {
  switch (kind) {
  case DomainKind::rational:
    return "rational";
  case DomainKind::finite_int:
    return "finite-int";
  case DomainKind::finite_string:
    return "finite-string";
  }
  return "unknown";
}

/// A parameter value as users write it: integers for finite-int domains,
/// strings for finite-string domains, rationals otherwise.
using RawValue = std::variant<long long, std::string, Rational>;

inline std::string raw_to_display(const RawValue& raw) {
  if (const auto* i = std::get_if<long long>(&raw))
    return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&raw))
    return *s;
  return std::get<Rational>(raw).str();
}

/// Injective codec between a parameter's admissible raw values and the
/// rational field. Finite domains map the i-th listed value to i; the
/// rational domain is the identity codec.
///
/// Decoding is total: field values outside the admissible image are not
/// errors, they come back marked as extended. Drift and composition can
/// legitimately push a parameter out of its admissible set, and the marker
/// is how that surfaces.
class ParamDomain {
public:
  static ParamDomain rational_domain(std::string name) {
    return ParamDomain(std::move(name), DomainKind::rational, {});
  }

  static ParamDomain finite_int(std::string name, const std::vector<long long>& values) {
    std::vector<RawValue> raw(values.begin(), values.end());
    return ParamDomain(std::move(name), DomainKind::finite_int, std::move(raw));
  }

  static ParamDomain finite_string(std::string name, const std::vector<std::string>& values) {
    std::vector<RawValue> raw(values.begin(), values.end());
    return ParamDomain(std::move(name), DomainKind::finite_string, std::move(raw));
  }

  const std::string& name() const noexcept { return name_; }
  DomainKind kind() const noexcept { return kind_; }
  const std::vector<RawValue>& values() const noexcept { return values_; }

  /// Number of admissible values; 0 means unbounded (rational kind).
  std::size_t cardinality() const noexcept { return values_.size(); }

  Rational encode(const RawValue& raw) const {
    if (kind_ == DomainKind::rational) {
      if (const auto* q = std::get_if<Rational>(&raw))
        return *q;
      if (const auto* i = std::get_if<long long>(&raw))
        return Rational(*i);
      throw UnknownValue("value '" + raw_to_display(raw) + "' is not a rational for parameter '" +
                         name_ + "'");
    }
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i] == raw)
        return Rational(static_cast<long long>(i));
    throw UnknownValue("value '" + raw_to_display(raw) + "' is not admissible for parameter '" +
                       name_ + "'");
  }

  struct Decoded {
    Rational value;
    std::optional<RawValue> raw; // nullopt: the field value has no raw meaning
    bool extended() const noexcept { return !raw.has_value(); }
  };

  Decoded decode(const Rational& v) const {
    if (kind_ == DomainKind::rational)
      return Decoded{v, RawValue(v)};
    if (v.is_integer() && v.num() >= 0 && v.num() < static_cast<long long>(values_.size())) {
      const auto i = static_cast<std::size_t>(v.num().convert_to<long long>());
      return Decoded{v, values_[i]};
    }
    return Decoded{v, std::nullopt};
  }

  friend bool operator==(const ParamDomain&, const ParamDomain&) = default;

private:
  ParamDomain(std::string name, DomainKind kind, std::vector<RawValue> values)
      : name_(std::move(name)), kind_(kind), values_(std::move(values)) {
    if (name_.empty())
      throw FormatError("parameter name must not be empty");
    if (kind_ != DomainKind::rational) {
      if (values_.empty())
        throw FormatError("finite domain '" + name_ + "' must list at least one value");
      for (std::size_t i = 0; i < values_.size(); ++i)
        for (std::size_t j = i + 1; j < values_.size(); ++j)
          if (values_[i] == values_[j])
            throw FormatError("duplicate value '" + raw_to_display(values_[i]) +
                              "' in domain '" + name_ + "'");
    }
  }

  std::string name_;
  DomainKind kind_;
  std::vector<RawValue> values_;
};

} // namespace cfgalg
