#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cyccon/joint_distribution.hpp"
#include "cyccon/model.hpp"
#include "cyccon/rational.hpp"
#include "cyccon/sfunc.hpp"

namespace cyccon {

/// <A>, <B>, <AB> of a pair of +-1 variables.
struct PairMoments {
  Rational e_a;
  Rational e_b;
  Rational e_ab;
};

/// The unique 2x2 table with the given moments, atoms ordered
/// (+,+), (+,-), (-,+), (-,-). Throws Error(InfeasiblePair).
JointDistribution pair_table(const PairMoments& m, std::string a = "A", std::string b = "B");

struct MaxPairCoupling {
  PairMoments moments;        // e_ab = 1 - |e_a - e_b|
  Rational equal_probability;  // 1 - |e_a - e_b| / 2
};

/// Coupling of two +-1 variables that makes them equal as often as their
/// marginals allow.
MaxPairCoupling max_pair_coupling(const Rational& e_a, const Rational& e_b);

/// Joint of three +-1 variables with given means and pairwise products;
/// the free three-way moment is set to the midpoint of its admissible range.
/// Throws Error(InfeasibleTriple).
JointDistribution triple_joint(const Rational& e1, const Rational& e2, const Rational& e3,
                               const Rational& c12, const Rational& c23, const Rational& c31,
                               std::vector<std::string> names = {"A", "B", "C"});

/// Markov-chain gluing of 2-variable tables over (V1,V2), (V2,V3), ...
/// Consecutive tables must agree exactly on the shared variable.
/// Throws Error(MarginalMismatch | DomainError | TooManyVariables).
JointDistribution chain_joint(std::span<const JointDistribution> tables);

struct InfeasibleCycle {
  Rational lhs;        // s1 of the cycle correlations
  Rational bound;      // m - 2
  SignVector witness;  // odd-parity sign vector attaining lhs
};

using CycleResult = std::variant<JointDistribution, InfeasibleCycle>;

/// Joint of V1..Vm (m >= 3) with <V_i> = means[i] and <V_i V_{i+1}> = corr[i]
/// (indices mod m), built by peeling one vertex at a time, or the
/// obstruction when s1(corr) > m - 2.
/// Throws Error(InfeasiblePair) if an adjacent pair is unrealizable.
CycleResult cycle_joint(std::span<const Rational> means, std::span<const Rational> corr,
                        std::vector<std::string> names = {});

/// S1_c1, S2_c1, S2_c2, S3_c2, ..., Sn_cn, S1_cn
std::vector<std::string> coupling_variable_names(std::size_t rank);

/// Coupling of all 2n variables of `sys` in which every connection pair is
/// maximally coupled, or the violated criterion instance when none exists.
/// On failure the witness is indexed like check_main's arguments
/// (corr_1, 1-|D_1|, corr_2, 1-|D_2|, ...).
CycleResult maximal_coupling(const CyclicSystem& sys);

}  // namespace cyccon
