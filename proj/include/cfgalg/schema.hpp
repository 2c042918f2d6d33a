#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfgalg/domain.hpp"
#include "cfgalg/errors.hpp"
#include "cfgalg/state.hpp"

namespace cfgalg {

/// Parameter declarations plus the baseline assignment. Fixes the state
/// vector layout for a whole simulation: parameter i is entry i.
class SchemaFile {
public:
  SchemaFile(std::vector<ParamDomain> parameters, std::vector<RawValue> initial_raw)
      : parameters_(std::move(parameters)), initial_raw_(std::move(initial_raw)),
        initial_(encode_initial(parameters_, initial_raw_)) {}

  std::size_t arity() const noexcept { return parameters_.size(); }
  const std::vector<ParamDomain>& parameters() const noexcept { return parameters_; }
  const ParamDomain& parameter(std::size_t i) const { return parameters_[i]; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < parameters_.size(); ++i)
      if (parameters_[i].name() == name)
        return i;
    return std::nullopt;
  }

  const std::vector<RawValue>& initial_raw() const noexcept { return initial_raw_; }

  /// The baseline state, already encoded into the field.
  const StateVec& initial() const noexcept { return initial_; }

  friend bool operator==(const SchemaFile&, const SchemaFile&) = default;

private:
  static StateVec encode_initial(const std::vector<ParamDomain>& parameters,
                                 const std::vector<RawValue>& initial_raw) {
    if (parameters.empty())
      throw FormatError("schema must declare at least one parameter");
    for (std::size_t i = 0; i < parameters.size(); ++i)
      for (std::size_t j = i + 1; j < parameters.size(); ++j)
        if (parameters[i].name() == parameters[j].name())
          throw FormatError("duplicate parameter name '" + parameters[i].name() + "'");
    if (initial_raw.size() != parameters.size())
      throw FormatError("schema lists " + std::to_string(parameters.size()) +
                        " parameters but " + std::to_string(initial_raw.size()) +
                        " initial values");
    std::vector<Rational> encoded;
    encoded.reserve(parameters.size());
    for (std::size_t i = 0; i < parameters.size(); ++i)
      encoded.push_back(parameters[i].encode(initial_raw[i]));
    return StateVec(std::move(encoded));
  }

  std::vector<ParamDomain> parameters_;
  std::vector<RawValue> initial_raw_;
  StateVec initial_;
};

} // namespace cfgalg
