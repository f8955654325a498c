#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "cyccon/model.hpp"
#include "cyccon/moment_box.hpp"
#include "cyccon/rational.hpp"
#include "cyccon/sfunc.hpp"

namespace cyccon {

enum class CriterionKind { main, consistent, necessary, kcbs };

std::string_view to_string(CriterionKind kind);
CriterionKind criterion_kind_from_string(std::string_view name);

/// Outcome of one (non)contextuality test. A left-hand side equal to the
/// bound counts as noncontextual.
struct Verdict {
  CriterionKind kind = CriterionKind::main;
  Rational lhs;
  Rational bound;
  bool contextual = false;
  /// Only for the necessary-condition test: the inequality holds, which by
  /// itself decides nothing.
  bool inconclusive = false;
  SignVector witness;
  std::vector<Rational> deltas;
};

/// s1(corr_1, 1-|D_1|, ..., corr_n, 1-|D_n|) <= 2n - 2.
Verdict check_main(const CyclicSystem& sys);

/// s1(corr_1, ..., corr_n) <= n - 2; requires every Delta_i == 0.
/// Throws Error(NotConsistentlyConnected).
Verdict check_consistent(const CyclicSystem& sys);

/// s1(corr) - sum |Delta_i| <= n - 2. A violation certifies contextuality,
/// satisfaction is reported as inconclusive.
Verdict check_necessary(const CyclicSystem& sys);

/// Rank-5 zero-overlap system: p_i = Pr[R_i = +1], Pr[R_i = R_{i+1} = +1] = 0.
/// Throws Error(OverlapViolation | InvalidMoment).
CyclicSystem kcbs_system(std::span<const Rational, 5> p);

/// K = sum p_i <= 2. Cross-checked against check_consistent on kcbs_system(p).
Verdict check_kcbs(std::span<const Rational, 5> p);

struct IntervalVerdict {
  Interval s1_range;         // range of s1(corr) over the correlation box
  Interval abs_delta_sum;    // range of sum |Delta_i| over the Delta box
  Interval lhs;              // [s1.lo - max sum|D|, s1.hi - min sum|D|]
  Rational bound;            // n - 2
  bool certified = false;    // lhs.lo > bound
};

/// Range of the necessary-condition left-hand side over a box of moments.
/// Delta intervals are on the signed difference; |.| is applied here.
IntervalVerdict interval_verdict(const MomentBox& box, const BoxMode& mode = BoxMode::conservative());

}  // namespace cyccon
