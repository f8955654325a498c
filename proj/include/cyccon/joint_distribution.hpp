#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cyccon/rational.hpp"

namespace cyccon {

/// Exact probability table over all +-1 assignments to k named variables.
///
/// Atom index: variable j is bit (k-1-j) (first variable most significant),
/// a clear bit meaning +1. Index 0 is therefore the all-(+1) assignment and
/// iteration order puts +1 before -1 in every position.
class JointDistribution {
 public:
  static constexpr std::size_t kDefaultMaxVariables = 16;

  JointDistribution() = default;
  /// All-zero table; fill with set() and check with is_distribution().
  explicit JointDistribution(std::vector<std::string> variables,
                             std::size_t max_variables = kDefaultMaxVariables);
  JointDistribution(std::vector<std::string> variables, std::vector<Rational> probabilities);

  std::size_t variable_count() const noexcept { return variables_.size(); }
  std::size_t atom_count() const noexcept { return probabilities_.size(); }
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const std::vector<Rational>& probabilities() const noexcept { return probabilities_; }

  const Rational& probability(std::uint64_t atom) const { return probabilities_.at(atom); }
  void set(std::uint64_t atom, Rational p) { probabilities_.at(atom) = std::move(p); }

  /// Value (+1 / -1) of variable j in atom.
  int value(std::uint64_t atom, std::size_t j) const noexcept {
    return (atom >> (variables_.size() - 1 - j)) & 1U ? -1 : 1;
  }
  std::vector<int> assignment(std::uint64_t atom) const;
  std::uint64_t atom_of(const std::vector<int>& assignment) const;

  std::size_t index_of(const std::string& variable) const;

  Rational total() const;
  /// Nonnegative atoms summing to exactly one.
  bool is_distribution() const;

  Rational expectation(std::size_t j) const;
  Rational expectation(std::size_t i, std::size_t j) const;
  Rational probability_equal(std::size_t i, std::size_t j) const;

  /// Marginal over the listed variables, in the listed order.
  JointDistribution marginal(const std::vector<std::size_t>& keep) const;

  friend bool operator==(const JointDistribution&, const JointDistribution&) = default;

 private:
  std::vector<std::string> variables_;
  std::vector<Rational> probabilities_;
};

}  // namespace cyccon
