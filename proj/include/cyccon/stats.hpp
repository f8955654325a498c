#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cyccon/model.hpp"
#include "cyccon/moment_box.hpp"
#include "cyccon/rational.hpp"

namespace cyccon::stats {

// ---- Student t -----------------------------------------------------------

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double x, double a, double b);

/// Pr[T > t] for T ~ t(df).
double t_upper_tail(double t, int df);
double t_cdf(double t, int df);

/// Inverse CDF by bisection, absolute accuracy better than 1e-6.
/// Throws Error(DomainError) unless 0 < p < 1 and df >= 1.
double t_quantile(double p, int df);

// ---- moments -------------------------------------------------------------

struct EstimatedMoment {
  Rational point;
  Rational se;  // standard error, >= 0
  int df = 1;   // replications - 1
};

/// One row of raw data: outcomes of (R_i^i, R_{i+1}^i) in context i.
struct TrialRecord {
  long replication = 0;
  std::size_t context = 1;  // 1-based cycle index
  int first = 1;
  int second = 1;
};

struct TrialRecords {
  std::size_t rank = 0;
  std::vector<TrialRecord> rows;
};

/// CSV with header `replication,context,outcome_first,outcome_second`.
/// The rank is the largest context index; every context 1..rank must occur.
/// Throws Error(ParseError).
TrialRecords parse_records_csv(std::istream& in);
void write_records_csv(std::ostream& out, const TrialRecords& records);

struct ContextEstimate {
  EstimatedMoment first;   // <R_i^i>
  EstimatedMoment second;  // <R_{i+1}^i>
  EstimatedMoment corr;    // <R_i^i R_{i+1}^i>
};

/// Replication means, their grand mean, and its standard error.
/// Throws Error(TooFewReplications) for a context with fewer than 2 replications.
std::vector<ContextEstimate> estimate_moments(const TrialRecords& records);

/// Point-estimate system. With `clamp`, unrealizable correlations are projected.
CyclicSystem point_system(const std::vector<ContextEstimate>& estimates, BuildOptions options = {});

/// The 2n terms corr_1..corr_n, Delta_1..Delta_n. Delta standard errors
/// combine the two marginal errors in quadrature; df is the smaller of the two.
std::vector<EstimatedMoment> box_terms(const std::vector<ContextEstimate>& estimates);

// ---- tests and intervals -------------------------------------------------

struct TTest {
  double t = 0.0;
  int df = 1;
  double p_value = 1.0;  // two-sided

  /// Two-sided test at `level` (e.g. 0.001 for 0.1%).
  bool significant(double level) const;
};

/// t = (a - b) / sqrt(se_a^2 + se_b^2). Throws Error(ZeroVariance).
TTest two_sample_t(const EstimatedMoment& a, const EstimatedMoment& b, int df);

/// Bonferroni box over 2n terms (corr_1..corr_n then Delta_1..Delta_n).
/// Half-width is factor * se when `factor` is set, otherwise
/// t_quantile(1 - alpha / (2n), df) * se.
MomentBox conservative_box(std::span<const EstimatedMoment> terms, double alpha,
                           std::optional<Rational> factor = std::nullopt);

// ---- embedded KCBS photon data -------------------------------------------

struct MarginalComparison {
  std::size_t connection;  // 1-based property index
  EstimatedMoment here;    // <R_i^i>
  EstimatedMoment before;  // <R_i^{i-1}>
};

struct LapkiewiczData {
  std::vector<EstimatedMoment> corr;   // 5 context correlations
  std::vector<EstimatedMoment> delta;  // 5 connection differences
  std::vector<MarginalComparison> marginals;  // connections 1 and 4

  std::vector<EstimatedMoment> terms() const;
};

/// Published point estimates with standard errors (printed half-width / 14),
/// df = 19.
LapkiewiczData lapkiewicz_dataset();

/// A rank-5 system reproducing the published correlation and Delta point
/// estimates. The four quoted marginals are used as given; the other
/// marginals are filled in (as zero where free) to match the Deltas.
CyclicSystem lapkiewicz_point_system();

}  // namespace cyccon::stats
