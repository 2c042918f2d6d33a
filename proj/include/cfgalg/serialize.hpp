#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cfgalg/engine.hpp"
#include "cfgalg/errors.hpp"
#include "cfgalg/policy.hpp"
#include "cfgalg/schema.hpp"

namespace cfgalg {

/// All file formats use nlohmann's default ordered-map json: object keys
/// serialize sorted, so a given in-memory value has exactly one byte
/// representation and traces diff cleanly.
using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

namespace detail {

inline const Json& expect_field(const Json& j, const char* key, const char* what) {
  if (!j.is_object())
    throw FormatError(std::string(what) + " must be a JSON object");
  const auto it = j.find(key);
  if (it == j.end())
    throw FormatError(std::string(what) + " is missing field '" + key + "'");
  return *it;
}

inline void expect_version(const Json& j, const char* what) {
  const Json& v = expect_field(j, "format_version", what);
  if (!v.is_number_integer() || v.get<std::int64_t>() != kFormatVersion)
    throw FormatError(std::string(what) + ": unsupported format_version");
}

inline std::uint64_t expect_u64(const Json& j, const char* what) {
  if (j.is_number_unsigned())
    return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw FormatError(std::string(what) + " must be a non-negative integer");
}

inline std::string expect_string(const Json& j, const char* what) {
  if (!j.is_string())
    throw FormatError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

} // namespace detail

// ---------------------------------------------------------------------------
// field values

inline Json rational_to_json(const Rational& q) { return Json(q.str()); }

inline Rational rational_from_json(const Json& j) {
  if (j.is_string())
    return Rational::parse(j.get<std::string>());
  if (j.is_number_integer())
    return Rational(static_cast<long long>(j.get<std::int64_t>()));
  throw FormatError("expected a rational (\"p/q\" string or integer)");
}

inline Json raw_to_json(const RawValue& raw) {
  if (const auto* i = std::get_if<long long>(&raw))
    return Json(*i);
  if (const auto* s = std::get_if<std::string>(&raw))
    return Json(*s);
  return rational_to_json(std::get<Rational>(raw));
}

inline RawValue raw_from_json(const Json& j, DomainKind kind) {
  switch (kind) {
  case DomainKind::finite_int:
    if (!j.is_number_integer())
      throw FormatError("finite-int value must be an integer");
    return RawValue(static_cast<long long>(j.get<std::int64_t>()));
  case DomainKind::finite_string:
    return RawValue(detail::expect_string(j, "finite-string value"));
  case DomainKind::rational:
    return RawValue(rational_from_json(j));
  }
  throw FormatError("unknown domain kind");
}

inline Json state_to_json(const StateVec& v) {
  Json arr = Json::array();
  for (const Rational& q : v)
    arr.push_back(rational_to_json(q));
  return arr;
}

inline StateVec state_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw FormatError(std::string(what) + " must be a non-empty array of rationals");
  std::vector<Rational> entries;
  entries.reserve(j.size());
  for (const Json& q : j)
    entries.push_back(rational_from_json(q));
  return StateVec(std::move(entries));
}

// ---------------------------------------------------------------------------
// operator literals
//
// {"kind":"delta"|"cee"|"mu", "q":"p/q"} or {"kind":"affine","a":..,"b":..}
// ("kind" may be omitted for the a/b form). A component binding adds either
// "index": i or "param": "name".

inline Json op_to_json(const AffineOp& op) {
  Json j;
  const OpKind kind = classify(op);
  switch (kind.shape) {
  case OpShape::identity:
    j["kind"] = "delta";
    j["q"] = rational_to_json(Rational(0));
    break;
  case OpShape::relative:
    j["kind"] = "delta";
    j["q"] = rational_to_json(*kind.q);
    break;
  case OpShape::absolute:
    j["kind"] = "cee";
    j["q"] = rational_to_json(*kind.q);
    break;
  case OpShape::scale:
    j["kind"] = "mu";
    j["q"] = rational_to_json(*kind.q);
    break;
  case OpShape::general_affine:
    j["kind"] = "affine";
    j["a"] = rational_to_json(op.a());
    j["b"] = rational_to_json(op.b());
    break;
  }
  return j;
}

inline AffineOp op_from_json(const Json& j) {
  if (!j.is_object())
    throw FormatError("operator literal must be a JSON object");
  std::string kind = "affine";
  if (j.contains("kind"))
    kind = detail::expect_string(j.at("kind"), "operator kind");
  if (kind == "delta" || kind == "cee" || kind == "mu") {
    if (j.contains("a") || j.contains("b"))
      throw FormatError("'" + kind + "' literal takes 'q', not 'a'/'b'");
    const Rational q = rational_from_json(detail::expect_field(j, "q", "operator literal"));
    if (kind == "delta")
      return AffineOp::delta(q);
    if (kind == "cee")
      return AffineOp::cee(q);
    return AffineOp::mu(q);
  }
  if (kind == "affine") {
    if (j.contains("q"))
      throw FormatError("'affine' literal takes 'a' and 'b', not 'q'");
    return AffineOp(rational_from_json(detail::expect_field(j, "a", "operator literal")),
                    rational_from_json(detail::expect_field(j, "b", "operator literal")));
  }
  throw FormatError("unknown operator kind '" + kind + "'");
}

namespace detail {

inline std::size_t bind_component(const Json& j, const SchemaFile& schema) {
  const bool has_index = j.contains("index");
  const bool has_param = j.contains("param");
  if (has_index == has_param)
    throw FormatError("operator literal needs exactly one of 'index' or 'param'");
  if (has_param) {
    const std::string name = expect_string(j.at("param"), "'param'");
    const auto index = schema.index_of(name);
    if (!index)
      throw SchemaMismatch("journal references unknown parameter '" + name + "'");
    return *index;
  }
  const std::uint64_t index = expect_u64(j.at("index"), "'index'");
  if (index >= schema.arity())
    throw SchemaMismatch("component index " + std::to_string(index) +
                         " out of range for schema arity " + std::to_string(schema.arity()));
  return static_cast<std::size_t>(index);
}

} // namespace detail

/// Non-identity components as an array of bound literals. An all-identity
/// operator serializes as the empty array.
inline Json multiop_to_json(const MultiOp& op) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < op.dim(); ++i) {
    if (op.part(i) == AffineOp::identity())
      continue;
    Json literal = op_to_json(op.part(i));
    literal["index"] = i;
    arr.push_back(std::move(literal));
  }
  return arr;
}

/// Accepts a single bound literal or an array of them (empty = identity).
/// Unbound components are identity; duplicate bindings are rejected.
inline MultiOp multiop_from_json(const Json& j, const SchemaFile& schema) {
  std::vector<AffineOp> parts(schema.arity(), AffineOp::identity());
  std::vector<bool> bound(schema.arity(), false);
  const auto add = [&](const Json& literal) {
    const std::size_t i = detail::bind_component(literal, schema);
    if (bound[i])
      throw FormatError("component " + std::to_string(i) + " bound twice in one operator");
    bound[i] = true;
    parts[i] = op_from_json(literal);
  };
  if (j.is_array()) {
    for (const Json& literal : j)
      add(literal);
  } else {
    add(j);
  }
  return MultiOp(std::move(parts));
}

// ---------------------------------------------------------------------------
// schema files

inline Json schema_to_json(const SchemaFile& schema) {
  Json params = Json::array();
  for (const ParamDomain& p : schema.parameters()) {
    Json pj;
    pj["name"] = p.name();
    pj["kind"] = to_string(p.kind());
    if (p.kind() != DomainKind::rational) {
      Json values = Json::array();
      for (const RawValue& v : p.values())
        values.push_back(raw_to_json(v));
      pj["values"] = std::move(values);
    }
    params.push_back(std::move(pj));
  }
  Json initial;
  for (std::size_t i = 0; i < schema.arity(); ++i)
    initial[schema.parameter(i).name()] = raw_to_json(schema.initial_raw()[i]);
  Json j;
  j["format_version"] = kFormatVersion;
  j["parameters"] = std::move(params);
  j["initial"] = std::move(initial);
  return j;
}

inline SchemaFile schema_from_json(const Json& j) {
  detail::expect_version(j, "schema file");
  const Json& params_json = detail::expect_field(j, "parameters", "schema file");
  if (!params_json.is_array())
    throw FormatError("schema 'parameters' must be an array");

  std::vector<ParamDomain> parameters;
  for (const Json& pj : params_json) {
    const std::string name = detail::expect_string(detail::expect_field(pj, "name", "parameter"),
                                                   "parameter name");
    const std::string kind = detail::expect_string(detail::expect_field(pj, "kind", "parameter"),
                                                   "parameter kind");
    if (kind == "rational") {
      if (pj.contains("values") && !pj.at("values").empty())
        throw FormatError("rational parameter '" + name + "' must not list values");
      parameters.push_back(ParamDomain::rational_domain(name));
    } else if (kind == "finite-int") {
      const Json& values = detail::expect_field(pj, "values", "parameter");
      std::vector<long long> ints;
      for (const Json& v : values) {
        if (!v.is_number_integer())
          throw FormatError("finite-int domain '" + name + "' lists a non-integer value");
        ints.push_back(static_cast<long long>(v.get<std::int64_t>()));
      }
      parameters.push_back(ParamDomain::finite_int(name, ints));
    } else if (kind == "finite-string") {
      const Json& values = detail::expect_field(pj, "values", "parameter");
      std::vector<std::string> strings;
      for (const Json& v : values)
        strings.push_back(detail::expect_string(v, "finite-string domain value"));
      parameters.push_back(ParamDomain::finite_string(name, strings));
    } else {
      throw FormatError("unknown parameter kind '" + kind + "'");
    }
  }

  const Json& initial_json = detail::expect_field(j, "initial", "schema file");
  if (!initial_json.is_object())
    throw FormatError("schema 'initial' must be an object");
  std::vector<RawValue> initial_raw;
  initial_raw.reserve(parameters.size());
  for (const ParamDomain& p : parameters) {
    const auto it = initial_json.find(p.name());
    if (it == initial_json.end())
      throw FormatError("schema 'initial' is missing parameter '" + p.name() + "'");
    initial_raw.push_back(raw_from_json(*it, p.kind()));
  }
  if (initial_json.size() != parameters.size())
    throw FormatError("schema 'initial' assigns values to undeclared parameters");

  return SchemaFile(std::move(parameters), std::move(initial_raw));
}

// ---------------------------------------------------------------------------
// journal files

inline Json journal_to_json(const Journal& journal) {
  Json entries = Json::array();
  for (const JournalEntry& e : journal) {
    Json ej;
    ej["tick"] = e.tick;
    ej["op"] = multiop_to_json(e.op);
    entries.push_back(std::move(ej));
  }
  Json j;
  j["format_version"] = kFormatVersion;
  j["entries"] = std::move(entries);
  return j;
}

inline Journal journal_from_json(const Json& j, const SchemaFile& schema) {
  detail::expect_version(j, "journal file");
  const Json& entries = detail::expect_field(j, "entries", "journal file");
  if (!entries.is_array())
    throw FormatError("journal 'entries' must be an array");
  Journal journal;
  std::uint64_t prev_tick = 0;
  for (const Json& ej : entries) {
    const std::uint64_t tick = detail::expect_u64(detail::expect_field(ej, "tick", "journal entry"),
                                                  "journal entry tick");
    if (!journal.empty() && tick < prev_tick)
      throw FormatError("journal ticks must be non-decreasing");
    prev_tick = tick;
    journal.push_back(JournalEntry{tick, multiop_from_json(detail::expect_field(ej, "op",
                                                                                "journal entry"),
                                                           schema)});
  }
  return journal;
}

// ---------------------------------------------------------------------------
// policy files

/// A policy file assigns every schema parameter a desired raw value; the
/// values pass through the schema codec on load.
inline Policy policy_from_json(const Json& j, const SchemaFile& schema) {
  detail::expect_version(j, "policy file");
  const Json& desired_json = detail::expect_field(j, "desired", "policy file");
  if (!desired_json.is_object())
    throw FormatError("policy 'desired' must be an object");
  std::vector<Rational> desired;
  desired.reserve(schema.arity());
  for (const ParamDomain& p : schema.parameters()) {
    const auto it = desired_json.find(p.name());
    if (it == desired_json.end())
      throw SchemaMismatch("policy is missing parameter '" + p.name() + "'");
    desired.push_back(p.encode(raw_from_json(*it, p.kind())));
  }
  if (desired_json.size() != schema.arity())
    for (const auto& [name, value] : desired_json.items())
      if (!schema.index_of(name))
        throw SchemaMismatch("policy references unknown parameter '" + name + "'");
  return Policy(StateVec(std::move(desired)));
}

// ---------------------------------------------------------------------------
// trace files

namespace detail {

inline Json cause_to_json(const Cause& cause) {
  Json j;
  switch (cause.kind) {
  case Cause::Kind::initial:
    j["type"] = "initial";
    break;
  case Cause::Kind::journaled:
    j["type"] = "journaled";
    j["entry"] = cause.journal_index;
    break;
  case Cause::Kind::drift:
    j["type"] = "drift";
    j["param"] = cause.param;
    j["op"] = op_to_json(cause.injected);
    break;
  }
  return j;
}

inline Cause cause_from_json(const Json& j) {
  const std::string type = expect_string(expect_field(j, "type", "history cause"),
                                         "history cause type");
  if (type == "initial")
    return Cause::initial();
  if (type == "journaled")
    return Cause::journaled(
        static_cast<std::size_t>(expect_u64(expect_field(j, "entry", "history cause"),
                                            "history cause entry")));
  if (type == "drift")
    return Cause::drift(static_cast<std::size_t>(expect_u64(expect_field(j, "param",
                                                                         "history cause"),
                                                            "history cause param")),
                        op_from_json(expect_field(j, "op", "history cause")));
  throw FormatError("unknown history cause '" + type + "'");
}

inline DriftStyle style_from_json(const Json& j) {
  const std::string s = expect_string(j, "drift style");
  if (s == "set-random")
    return DriftStyle::set_random;
  if (s == "add-random")
    return DriftStyle::add_random;
  throw FormatError("unknown drift style '" + s + "'");
}

} // namespace detail

inline Json trace_to_json(const Trace& trace) {
  Json history = Json::array();
  for (const HistoryEntry& h : trace.history) {
    Json hj;
    hj["tick"] = h.tick;
    hj["state"] = state_to_json(h.state);
    hj["cause"] = detail::cause_to_json(h.cause);
    history.push_back(std::move(hj));
  }
  Json drift;
  drift["rate"] = rational_to_json(trace.drift.rate);
  drift["seed"] = trace.drift.seed;
  drift["style"] = to_string(trace.drift.style);
  drift["count"] = trace.drift_count;

  Json j;
  j["format_version"] = kFormatVersion;
  j["schema"] = schema_to_json(trace.schema);
  j["ticks"] = trace.ticks;
  j["initial"] = state_to_json(trace.initial);
  j["journal"] = journal_to_json(trace.journal)["entries"];
  j["history"] = std::move(history);
  j["final"] = state_to_json(trace.final_state);
  j["drift"] = std::move(drift);
  return j;
}

inline Trace trace_from_json(const Json& j) {
  detail::expect_version(j, "trace file");
  SchemaFile schema = schema_from_json(detail::expect_field(j, "schema", "trace file"));
  const std::uint64_t ticks = detail::expect_u64(detail::expect_field(j, "ticks", "trace file"),
                                                 "trace 'ticks'");
  StateVec initial = state_from_json(detail::expect_field(j, "initial", "trace file"),
                                     "trace 'initial'");

  Json journal_wrapper;
  journal_wrapper["format_version"] = kFormatVersion;
  journal_wrapper["entries"] = detail::expect_field(j, "journal", "trace file");
  Journal journal = journal_from_json(journal_wrapper, schema);

  const Json& history_json = detail::expect_field(j, "history", "trace file");
  if (!history_json.is_array() || history_json.empty())
    throw FormatError("trace 'history' must be a non-empty array");
  std::vector<HistoryEntry> history;
  std::size_t drift_seen = 0;
  for (const Json& hj : history_json) {
    HistoryEntry entry{detail::expect_u64(detail::expect_field(hj, "tick", "history entry"),
                                          "history entry tick"),
                       state_from_json(detail::expect_field(hj, "state", "history entry"),
                                       "history entry state"),
                       detail::cause_from_json(detail::expect_field(hj, "cause",
                                                                    "history entry"))};
    if (entry.cause.kind == Cause::Kind::drift)
      ++drift_seen;
    history.push_back(std::move(entry));
  }
  if (history.front().cause.kind != Cause::Kind::initial)
    throw FormatError("trace history must start with the initial snapshot");

  StateVec final_state = state_from_json(detail::expect_field(j, "final", "trace file"),
                                         "trace 'final'");
  if (!(final_state == history.back().state))
    throw FormatError("trace 'final' does not match the last history snapshot");

  const Json& drift_json = detail::expect_field(j, "drift", "trace file");
  DriftModel drift{rational_from_json(detail::expect_field(drift_json, "rate", "trace 'drift'")),
                   detail::expect_u64(detail::expect_field(drift_json, "seed", "trace 'drift'"),
                                      "drift seed"),
                   detail::style_from_json(detail::expect_field(drift_json, "style",
                                                                "trace 'drift'"))};
  const std::size_t drift_count =
      static_cast<std::size_t>(detail::expect_u64(detail::expect_field(drift_json, "count",
                                                                       "trace 'drift'"),
                                                  "drift count"));
  if (drift_count != drift_seen)
    throw FormatError("trace drift count does not match the history causes");

  return Trace{std::move(schema),  ticks, std::move(initial), std::move(journal),
               std::move(history), std::move(final_state), std::move(drift), drift_count};
}

// ---------------------------------------------------------------------------
// file I/O

inline std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad())
    throw IoError("failed reading '" + path + "'");
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path + "' for writing");
  out << canonical_dump(j);
  out.flush();
  if (!out)
    throw IoError("failed writing '" + path + "'");
}

} // namespace cfgalg
