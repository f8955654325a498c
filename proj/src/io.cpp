#include "cyccon/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <iterator>

#include "cyccon/error.hpp"

namespace cyccon::io {

std::string NumberFormat::operator()(const Rational& value) const {
  return exact ? to_exact_string(value) : to_decimal_string(value, precision);
}

std::string NumberFormat::operator()(double value) const {
  if (!std::isfinite(value)) return value > 0 ? "inf" : (value < 0 ? "-inf" : "nan");
  if (!exact) return to_decimal_string(rational_exact_binary(value), precision);
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

Json read_json(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
}

namespace {

const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(ErrorCode::ParseError, where + ": missing field \"" + key + "\"");
  }
  return obj.at(key);
}

std::vector<std::string> string_list(const Json& value, const std::string& where) {
  if (!value.is_array()) throw Error(ErrorCode::ParseError, where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& v : value) {
    if (!v.is_string()) throw Error(ErrorCode::ParseError, where + ": expected an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

Rational parse_number(const Json& value, const std::string& where) {
  try {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number_integer()) return Rational(value.get<long>());
    if (value.is_number_unsigned()) return Rational(static_cast<unsigned long>(value.get<std::uint64_t>()));
    if (value.is_number_float()) return rational_from_double(value.get<double>());
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, where + ": " + e.what());
  }
  throw Error(ErrorCode::ParseError, where + ": expected a number or numeric string");
}

SystemLayout parse_layout(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "top level must be an object");
  SystemLayout layout;
  layout.properties = string_list(require(doc, "properties", "system"), "properties");
  const Json& contexts = require(doc, "contexts", "system");
  if (!contexts.is_array()) throw Error(ErrorCode::ParseError, "contexts: expected an array");
  for (std::size_t k = 0; k < contexts.size(); ++k) {
    layout.contexts.push_back(string_list(contexts[k], "contexts[" + std::to_string(k) + "]"));
  }
  return layout;
}

SystemDocument parse_system(const Json& doc) {
  SystemDocument out;
  out.layout = parse_layout(doc);
  const Json& moments = require(doc, "moments", "system");
  if (!moments.is_array()) throw Error(ErrorCode::ParseError, "moments: expected an array");
  for (std::size_t k = 0; k < moments.size(); ++k) {
    const std::string where = "moments[" + std::to_string(k) + "]";
    const Json& m = moments[k];
    MomentEntry entry;
    entry.members = string_list(require(m, "context", where), where + ".context");
    if (entry.members.size() != 2) {
      throw Error(ErrorCode::ContextArity, where + ": a context has exactly two members");
    }
    entry.e_first = parse_number(require(m, "e_first", where), where + ".e_first");
    entry.e_second = parse_number(require(m, "e_second", where), where + ".e_second");
    entry.corr = parse_number(require(m, "corr", where), where + ".corr");

    MomentErrors errors;
    if (m.contains("se")) {
      const Json& se = m.at("se");
      if (!se.is_object()) throw Error(ErrorCode::ParseError, where + ".se: expected an object");
      const auto field = [&](const char* key) -> std::optional<Rational> {
        if (!se.contains(key)) return std::nullopt;
        Rational v = parse_number(se.at(key), where + ".se." + key);
        if (v < 0) throw Error(ErrorCode::InvalidMoment, where + ".se." + key + ": negative standard error");
        return v;
      };
      errors.e_first = field("e_first");
      errors.e_second = field("e_second");
      errors.corr = field("corr");
    }
    if (m.contains("df")) {
      if (!m.at("df").is_number_integer() || m.at("df").get<long>() < 1) {
        throw Error(ErrorCode::ParseError, where + ".df: expected an integer >= 1");
      }
      errors.df = static_cast<int>(m.at("df").get<long>());
    }
    out.moments.push_back(std::move(entry));
    out.errors.push_back(errors);
  }
  return out;
}

Json system_to_json(const CyclicSystem& sys) {
  const std::size_t n = sys.rank();
  const auto& labels = sys.labels();
  Json doc;
  doc["properties"] = labels;
  Json contexts = Json::array();
  Json moments = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const Json pair = Json::array({labels[i], labels[(i + 1) % n]});
    contexts.push_back(pair);
    const auto& c = sys.context(i);
    moments.push_back(Json{{"context", pair},
                           {"e_first", to_exact_string(c.first)},
                           {"e_second", to_exact_string(c.second)},
                           {"corr", to_exact_string(c.corr)}});
  }
  doc["contexts"] = std::move(contexts);
  doc["moments"] = std::move(moments);
  return doc;
}

Json coupling_to_json(const JointDistribution& joint) {
  Json doc;
  doc["variables"] = joint.variables();
  Json atoms = Json::array();
  for (std::uint64_t a = 0; a < joint.atom_count(); ++a) {
    if (joint.probability(a) == 0) continue;
    atoms.push_back(Json{{"assignment", joint.assignment(a)}, {"prob", to_fraction_string(joint.probability(a))}});
  }
  doc["atoms"] = std::move(atoms);
  return doc;
}

JointDistribution parse_coupling(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "coupling: top level must be an object");
  auto variables = string_list(require(doc, "variables", "coupling"), "variables");
  if (variables.empty()) throw Error(ErrorCode::ParseError, "coupling: no variables");
  if (variables.size() > JointDistribution::kDefaultMaxVariables) {
    throw Error(ErrorCode::TooManyVariables, "coupling: too many variables");
  }
  JointDistribution joint(variables);
  std::vector<bool> seen(joint.atom_count(), false);
  const Json& atoms = require(doc, "atoms", "coupling");
  if (!atoms.is_array()) throw Error(ErrorCode::ParseError, "atoms: expected an array");
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const std::string where = "atoms[" + std::to_string(k) + "]";
    const Json& a = require(atoms[k], "assignment", where);
    if (!a.is_array() || a.size() != variables.size()) {
      throw Error(ErrorCode::ParseError, where + ": assignment must list one value per variable");
    }
    std::vector<int> values;
    for (const auto& v : a) {
      if (!v.is_number_integer() || (v.get<int>() != 1 && v.get<int>() != -1)) {
        throw Error(ErrorCode::ParseError, where + ": assignment values must be 1 or -1");
      }
      values.push_back(v.get<int>());
    }
    const std::uint64_t atom = joint.atom_of(values);
    if (seen[atom]) throw Error(ErrorCode::ParseError, where + ": duplicate assignment");
    seen[atom] = true;
    joint.set(atom, parse_number(require(atoms[k], "prob", where), where + ".prob"));
  }
  return joint;
}

Json verdict_to_json(const Verdict& verdict, const NumberFormat& fmt) {
  Json deltas = Json::array();
  for (const auto& d : verdict.deltas) deltas.push_back(fmt(d));
  return Json{{"kind", std::string(to_string(verdict.kind))},
              {"lhs", fmt(verdict.lhs)},
              {"bound", fmt(verdict.bound)},
              {"contextual", verdict.contextual},
              {"inconclusive", verdict.inconclusive},
              {"witness", verdict.witness.coefficients()},
              {"deltas", std::move(deltas)}};
}

Json interval_to_json(const Interval& interval, const NumberFormat& fmt) {
  return Json::array({fmt(interval.lo), fmt(interval.hi)});
}

std::vector<stats::ContextEstimate> estimates_from_document(const SystemDocument& doc,
                                                            const CyclicSystem& sys,
                                                            const Cycle& cycle, int default_df) {
  const auto entry_for_context = match_moment_entries(doc.layout, doc.moments);
  std::vector<stats::ContextEstimate> out;
  for (std::size_t i = 0; i < cycle.rank(); ++i) {
    const std::ptrdiff_t m = entry_for_context.at(cycle.contexts[i]);
    if (m < 0) throw Error(ErrorCode::MissingMoment, "no moments for context " + std::to_string(i + 1), i);
    const MomentEntry& entry = doc.moments[static_cast<std::size_t>(m)];
    const MomentErrors& err = doc.errors[static_cast<std::size_t>(m)];
    const bool swapped = entry.members[0] != cycle.properties[i];
    const int df = err.df.value_or(default_df);
    const auto se = [](const std::optional<Rational>& v) { return v.value_or(Rational(0)); };
    const auto& c = sys.context(i);
    stats::ContextEstimate e;
    e.first = {c.first, se(swapped ? err.e_second : err.e_first), df};
    e.second = {c.second, se(swapped ? err.e_first : err.e_second), df};
    e.corr = {c.corr, se(err.corr), df};
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace cyccon::io
