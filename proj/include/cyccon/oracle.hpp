#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cyccon/joint_distribution.hpp"
#include "cyccon/model.hpp"
#include "cyccon/rational.hpp"

namespace cyccon::oracle {

/// Linear system A x = b, x >= 0 over the 2^{2n} atoms of a global coupling.
/// Atom columns are implicit: every entry of A is +-1 except in the all-ones
/// normalization row.
struct FeasibilityProblem {
  std::size_t variable_count = 0;             // 2n coupling variables
  std::vector<std::string> variable_names;    // S1_c1, S2_c1, ...
  std::vector<std::string> row_labels;
  /// Each row is a product of the listed variables (empty = normalization).
  std::vector<std::vector<std::size_t>> row_terms;
  std::vector<Rational> rhs;

  std::uint64_t atom_count() const noexcept { return std::uint64_t{1} << variable_count; }
  std::size_t row_count() const noexcept { return rhs.size(); }
  /// Coefficient of atom in row: product of the atom's values on the row's variables.
  int coefficient(std::size_t row, std::uint64_t atom) const;
};

enum class ConnectionTarget {
  maximal,   // <S_i^{i-1} S_i^i> = 1 - |<R_i^i> - <R_i^{i-1}>|
  identity,  // <S_i^{i-1} S_i^i> = 1
};

FeasibilityProblem build_problem(const CyclicSystem& sys, ConnectionTarget target);

struct Options {
  std::size_t max_rank = 6;
};

struct Result {
  bool feasible = false;
  std::optional<JointDistribution> joint;  // when feasible
  /// When infeasible: y with y.A >= 0 on every atom column and y.b < 0.
  std::vector<Rational> certificate;
  Rational residual;  // optimal phase-1 objective
  std::size_t pivots = 0;
};

/// Exact phase-1 simplex (Bland's rule) on build_problem(sys, target).
Result solve(const FeasibilityProblem& problem);

/// Whether a coupling exists in which every connection pair is maximally
/// coupled. Throws Error(RankTooLarge).
Result feasible(const CyclicSystem& sys, const Options& options = {});

/// Whether a coupling exists in which every connection pair is equal with
/// probability one. Requires a consistently connected system unless `force`
/// is set, in which case inconsistent systems get the trivial answer "no".
/// Throws Error(NotConsistentlyConnected | RankTooLarge).
Result feasible_traditional(const CyclicSystem& sys, bool force = false, const Options& options = {});

/// Checks a Farkas certificate against the problem.
bool verify_certificate(const FeasibilityProblem& problem, const std::vector<Rational>& certificate);

/// Checks that a joint satisfies every row exactly.
bool satisfies(const FeasibilityProblem& problem, const JointDistribution& joint);

}  // namespace cyccon::oracle
