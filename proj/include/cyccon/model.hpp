#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cyccon/error.hpp"
#include "cyccon/rational.hpp"

namespace cyccon {

/// Properties and the (unordered) contexts they are measured in.
struct SystemLayout {
  std::vector<std::string> properties;
  std::vector<std::vector<std::string>> contexts;
};

struct LayoutIssue {
  ErrorCode code;                  // ContextArity, PropertyDegree, UnknownProperty, DuplicateProperty
  std::string subject;             // offending property id, or "context #k"
  std::string message;
};

/// Empty result means the layout satisfies the two-per-context and
/// two-contexts-per-property structure.
std::vector<LayoutIssue> validate_layout(const SystemLayout& layout);

/// One cycle q1 -> q2 -> ... -> qn -> q1 of a layout. `contexts[i]` is the
/// index into SystemLayout::contexts of the context {q_i, q_{i+1}}.
struct Cycle {
  std::vector<std::string> properties;
  std::vector<std::size_t> contexts;

  std::size_t rank() const noexcept { return properties.size(); }
};

/// Partitions a valid layout into disjoint cycles. Each cycle starts at its
/// lexicographically least property and walks toward the lesser of that
/// property's two neighbours; cycles are sorted by their first property.
/// Throws Error(ContextArity | PropertyDegree | ...) when validate_layout fails.
std::vector<Cycle> decompose_cycles(const SystemLayout& layout);

/// Observed moments of one context c_i = (q_i, q_{i+1}).
struct ContextMoments {
  Rational first;   // <R_i^i>
  Rational second;  // <R_{i+1}^i>
  Rational corr;    // <R_i^i R_{i+1}^i>
};

/// Moments as supplied alongside a layout; `members` gives the order in which
/// `e_first` / `e_second` are to be read.
struct MomentEntry {
  std::vector<std::string> members;
  Rational e_first;
  Rational e_second;
  Rational corr;
};

struct ClampAdjustment {
  std::size_t context;  // zero-based cycle position
  Rational original;
  Rational adjusted;
};

struct BuildOptions {
  /// Project correlations onto their realizable interval instead of failing.
  bool clamp = false;
};

struct ConnectionDelta {
  std::size_t property;   // zero-based cycle position
  Rational delta;         // <R_i^i> - <R_i^{i-1}>
  Rational max_equal_corr;  // 1 - |delta|
};

/// Realizable interval [lo, hi] for <AB> given <A>, <B>.
struct PairBounds {
  Rational lo;
  Rational hi;
};
PairBounds pair_corr_bounds(const Rational& e_a, const Rational& e_b);

/// A rank-n cyclic system of dichotomic variables, oriented q1 -> ... -> qn.
/// Immutable once constructed; all moments are exact rationals.
class CyclicSystem {
 public:
  /// Validates ranges and per-context realizability. Empty `labels` means q1..qn.
  /// Throws Error(RankTooSmall | InvalidMoment | InfeasibleContext).
  CyclicSystem(std::vector<std::string> labels, std::vector<ContextMoments> contexts,
               BuildOptions options = {});

  /// Convenience constructor with generated labels q1..qn.
  explicit CyclicSystem(std::vector<ContextMoments> contexts, BuildOptions options = {});

  std::size_t rank() const noexcept { return contexts_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<ContextMoments>& contexts() const noexcept { return contexts_; }
  const ContextMoments& context(std::size_t i) const { return contexts_.at(i); }
  const std::vector<ClampAdjustment>& adjustments() const noexcept { return adjustments_; }

  /// Delta_i = <R_i^i> - <R_i^{i-1}> for zero-based i (so i-1 wraps to n-1).
  Rational delta(std::size_t i) const;
  std::vector<ConnectionDelta> connection_deltas() const;
  bool consistently_connected() const;

  std::vector<Rational> correlations() const;

  /// The same system traversed from q_{k+1}: context i becomes context i-k.
  CyclicSystem rotated(std::size_t k) const;
  /// The same system traversed in the opposite direction.
  CyclicSystem reflected() const;

  friend bool operator==(const CyclicSystem& a, const CyclicSystem& b);

 private:
  std::vector<std::string> labels_;
  std::vector<ContextMoments> contexts_;
  std::vector<ClampAdjustment> adjustments_;
};

/// For each layout context, the moment entry attached to it (-1 if none):
/// the first unused entry with the same unordered member pair, contexts
/// taken in layout order.
std::vector<std::ptrdiff_t> match_moment_entries(const SystemLayout& layout,
                                                  std::span<const MomentEntry> moments);

/// Attaches moments to the cycle `cycle` of `layout`. Moment entries are
/// matched to contexts by unordered member pair; repeated pairs (rank 2)
/// are matched in order of appearance.
CyclicSystem build_cycle_system(const SystemLayout& layout, const Cycle& cycle,
                                std::span<const MomentEntry> moments,
                                BuildOptions options = {});

/// Single-cycle entry point. Throws Error(MultipleCycles) when the layout
/// decomposes into more than one cycle.
CyclicSystem build_cyclic_system(const SystemLayout& layout,
                                 std::span<const MomentEntry> moments,
                                 BuildOptions options = {});

}  // namespace cyccon
