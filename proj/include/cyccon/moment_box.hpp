#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cyccon/rational.hpp"
#include "cyccon/sfunc.hpp"

namespace cyccon {

/// Interval-valued moments of a rank-n system: one interval per context
/// correlation and one per signed connection difference Delta_i.
struct MomentBox {
  std::vector<Interval> corr;
  std::vector<Interval> delta;
  std::vector<Rational> corr_point;
  std::vector<Rational> delta_point;

  // construction metadata
  double alpha = 0.0;
  std::optional<Rational> factor;  // fixed multiplier of the standard error
  std::vector<double> quantiles;   // per-term multiplier when no factor is set

  std::size_t rank() const noexcept { return corr.size(); }
};

}  // namespace cyccon
