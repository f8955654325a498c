#include "cyccon/joint_distribution.hpp"

#include "cyccon/error.hpp"

namespace cyccon {

JointDistribution::JointDistribution(std::vector<std::string> variables, std::size_t max_variables)
    : variables_(std::move(variables)) {
  if (variables_.size() > max_variables) {
    throw Error(ErrorCode::TooManyVariables,
                std::to_string(variables_.size()) + " variables exceeds the cap of " +
                    std::to_string(max_variables));
  }
  probabilities_.assign(std::size_t{1} << variables_.size(), Rational(0));
}

JointDistribution::JointDistribution(std::vector<std::string> variables,
                                     std::vector<Rational> probabilities)
    : variables_(std::move(variables)), probabilities_(std::move(probabilities)) {
  if (variables_.size() >= 63 || probabilities_.size() != (std::size_t{1} << variables_.size())) {
    throw Error(ErrorCode::DomainError, "probability table size does not match 2^k");
  }
}

std::vector<int> JointDistribution::assignment(std::uint64_t atom) const {
  std::vector<int> out(variables_.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = value(atom, j);
  return out;
}

std::uint64_t JointDistribution::atom_of(const std::vector<int>& assignment) const {
  if (assignment.size() != variables_.size()) {
    throw Error(ErrorCode::DomainError, "assignment length does not match variable count");
  }
  std::uint64_t atom = 0;
  for (int v : assignment) {
    if (v != 1 && v != -1) throw Error(ErrorCode::DomainError, "assignment values must be +1 or -1");
    atom = (atom << 1) | (v == -1 ? 1U : 0U);
  }
  return atom;
}

std::size_t JointDistribution::index_of(const std::string& variable) const {
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (variables_[j] == variable) return j;
  }
  throw Error(ErrorCode::DomainError, "no variable named '" + variable + "'");
}

Rational JointDistribution::total() const {
  Rational sum = 0;
  for (const auto& p : probabilities_) sum += p;
  return sum;
}

bool JointDistribution::is_distribution() const {
  for (const auto& p : probabilities_) {
    if (p < 0) return false;
  }
  return total() == 1;
}

Rational JointDistribution::expectation(std::size_t j) const {
  Rational sum = 0;
  for (std::uint64_t a = 0; a < probabilities_.size(); ++a) {
    if (value(a, j) > 0) {
      sum += probabilities_[a];
    } else {
      sum -= probabilities_[a];
    }
  }
  return sum;
}

Rational JointDistribution::expectation(std::size_t i, std::size_t j) const {
  Rational sum = 0;
  for (std::uint64_t a = 0; a < probabilities_.size(); ++a) {
    if (value(a, i) == value(a, j)) {
      sum += probabilities_[a];
    } else {
      sum -= probabilities_[a];
    }
  }
  return sum;
}

Rational JointDistribution::probability_equal(std::size_t i, std::size_t j) const {
  Rational sum = 0;
  for (std::uint64_t a = 0; a < probabilities_.size(); ++a) {
    if (value(a, i) == value(a, j)) sum += probabilities_[a];
  }
  return sum;
}

JointDistribution JointDistribution::marginal(const std::vector<std::size_t>& keep) const {
  std::vector<std::string> names;
  for (std::size_t j : keep) names.push_back(variables_.at(j));
  JointDistribution out(std::move(names), keep.size());
  for (std::uint64_t a = 0; a < probabilities_.size(); ++a) {
    if (probabilities_[a] == 0) continue;
    std::uint64_t b = 0;
    for (std::size_t j : keep) b = (b << 1) | ((a >> (variables_.size() - 1 - j)) & 1U);
    out.probabilities_[b] += probabilities_[a];
  }
  return out;
}

}  // namespace cyccon
