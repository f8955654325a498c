#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyccon/criterion.hpp"
#include "cyccon/joint_distribution.hpp"
#include "cyccon/model.hpp"
#include "cyccon/stats.hpp"

namespace cyccon::io {

using Json = nlohmann::ordered_json;

struct NumberFormat {
  bool exact = false;
  int precision = 3;

  std::string operator()(const Rational& value) const;
  std::string operator()(double value) const;
};

/// Optional standard errors attached to a moment entry.
struct MomentErrors {
  std::optional<Rational> e_first;
  std::optional<Rational> e_second;
  std::optional<Rational> corr;
  std::optional<int> df;
};

struct SystemDocument {
  SystemLayout layout;
  std::vector<MomentEntry> moments;
  std::vector<MomentErrors> errors;  // parallel to moments
};

/// Throws Error(ParseError | InvalidMoment).
Json read_json(std::istream& in);

SystemLayout parse_layout(const Json& doc);
SystemDocument parse_system(const Json& doc);

/// Decimal string or number; numbers are read by their shortest decimal form.
Rational parse_number(const Json& value, const std::string& where);

/// Exact serialization, round-trips through parse_system + build_cyclic_system.
Json system_to_json(const CyclicSystem& sys);

/// Nonzero atoms only, probabilities as fraction strings.
Json coupling_to_json(const JointDistribution& joint);
/// Missing atoms have probability zero. Throws Error(ParseError).
JointDistribution parse_coupling(const Json& doc);

Json verdict_to_json(const Verdict& verdict, const NumberFormat& fmt);
Json interval_to_json(const Interval& interval, const NumberFormat& fmt);

/// Estimates for a cycle from a system document carrying "se" fields.
/// Missing errors count as zero; df defaults to `default_df`.
std::vector<stats::ContextEstimate> estimates_from_document(const SystemDocument& doc,
                                                            const CyclicSystem& sys,
                                                            const Cycle& cycle, int default_df);

}  // namespace cyccon::io
