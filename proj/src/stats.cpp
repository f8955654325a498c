#include "cyccon/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "cyccon/error.hpp"

namespace cyccon::stats {

// ---- Student t -----------------------------------------------------------

namespace {

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double x, double a, double b) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h;
  }
  throw Error(ErrorCode::DomainError, "incomplete beta continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double x, double a, double b) {
  if (!(a > 0) || !(b > 0) || x < 0 || x > 1 || std::isnan(x)) {
    throw Error(ErrorCode::DomainError, "incomplete beta outside its domain");
  }
  if (x == 0.0 || x == 1.0) return x;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // Use the symmetry relation where the fraction converges fastest.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double t_upper_tail(double t, int df) {
  if (df < 1) throw Error(ErrorCode::DomainError, "degrees of freedom must be >= 1");
  const double nu = df;
  const double x = nu / (nu + t * t);
  const double tail = 0.5 * incomplete_beta(x, nu / 2.0, 0.5);
  return t >= 0 ? tail : 1.0 - tail;
}

double t_cdf(double t, int df) {
  return 1.0 - t_upper_tail(t, df);
}

double t_quantile(double p, int df) {
  if (!(p > 0.0 && p < 1.0) || df < 1) {
    throw Error(ErrorCode::DomainError, "t_quantile needs 0 < p < 1 and df >= 1");
  }
  if (p == 0.5) return 0.0;
  // Solve upper_tail(t) = tail for t >= 0, then restore the sign.
  const double tail = p > 0.5 ? 1.0 - p : p;
  double lo = 0.0, hi = 1.0;
  while (t_upper_tail(hi, df) > tail) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw Error(ErrorCode::DomainError, "t quantile out of range");
  }
  while (hi - lo > 1e-10 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (t_upper_tail(mid, df) > tail) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double t = 0.5 * (lo + hi);
  return p > 0.5 ? t : -t;
}

// ---- records -------------------------------------------------------------

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) field.pop_back();
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) field.erase(0, 1);
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

long parse_integer(const std::string& text, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": '" + text + "' is not an integer");
}

}  // namespace

TrialRecords parse_records_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  TrialRecords records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (!header) {
      if (fields != std::vector<std::string>{"replication", "context", "outcome_first", "outcome_second"}) {
        throw Error(ErrorCode::ParseError,
                    "expected header 'replication,context,outcome_first,outcome_second'");
      }
      header = true;
      continue;
    }
    if (fields.size() != 4) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 4 fields");
    }
    TrialRecord r;
    r.replication = parse_integer(fields[0], line_no);
    const long context = parse_integer(fields[1], line_no);
    const long first = parse_integer(fields[2], line_no);
    const long second = parse_integer(fields[3], line_no);
    if (context < 1) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": context index must be >= 1");
    }
    if ((first != 1 && first != -1) || (second != 1 && second != -1)) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": outcomes must be -1 or 1");
    }
    r.context = static_cast<std::size_t>(context);
    r.first = static_cast<int>(first);
    r.second = static_cast<int>(second);
    records.rank = std::max(records.rank, r.context);
    records.rows.push_back(r);
  }
  if (!header) throw Error(ErrorCode::ParseError, "missing CSV header");
  std::vector<bool> seen(records.rank + 1, false);
  for (const auto& r : records.rows) seen[r.context] = true;
  for (std::size_t c = 1; c <= records.rank; ++c) {
    if (!seen[c]) throw Error(ErrorCode::ParseError, "no records for context " + std::to_string(c));
  }
  return records;
}

void write_records_csv(std::ostream& out, const TrialRecords& records) {
  out << "replication,context,outcome_first,outcome_second\n";
  for (const auto& r : records.rows) {
    out << r.replication << ',' << r.context << ',' << r.first << ',' << r.second << '\n';
  }
}

// ---- estimation ----------------------------------------------------------

namespace {

struct Tally {
  long count = 0;
  long first = 0;
  long second = 0;
  long product = 0;
};

// exact when the argument is a square of a rational
Rational rational_sqrt(const Rational& v) {
  if (v == 0) return 0;
  mpz_class num = v.get_num(), den = v.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) && mpz_perfect_square_p(den.get_mpz_t())) {
    mpz_class a, b;
    mpz_sqrt(a.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(b.get_mpz_t(), den.get_mpz_t());
    return Rational(a, b);
  }
  return rational_from_double(std::sqrt(v.get_d()));
}

EstimatedMoment summarize(const std::vector<Rational>& replication_means) {
  const long k = static_cast<long>(replication_means.size());
  Rational mean = 0;
  for (const auto& m : replication_means) mean += m;
  mean /= k;
  Rational ss = 0;
  for (const auto& m : replication_means) ss += (m - mean) * (m - mean);
  const Rational variance_of_mean = ss / (Rational(k - 1) * k);
  EstimatedMoment out;
  out.point = mean;
  out.se = rational_sqrt(variance_of_mean);
  out.df = static_cast<int>(k - 1);
  return out;
}

}  // namespace

std::vector<ContextEstimate> estimate_moments(const TrialRecords& records) {
  std::vector<std::map<long, Tally>> by_context(records.rank);
  for (const auto& r : records.rows) {
    if (r.context < 1 || r.context > records.rank) {
      throw Error(ErrorCode::DomainError, "context index outside rank");
    }
    Tally& t = by_context[r.context - 1][r.replication];
    ++t.count;
    t.first += r.first;
    t.second += r.second;
    t.product += r.first * r.second;
  }
  std::vector<ContextEstimate> out;
  for (std::size_t i = 0; i < records.rank; ++i) {
    const auto& reps = by_context[i];
    if (reps.size() < 2) {
      throw Error(ErrorCode::TooFewReplications,
                  "context " + std::to_string(i + 1) + " has " + std::to_string(reps.size()) +
                      " replication(s), need at least 2",
                  i);
    }
    std::vector<Rational> first, second, product;
    for (const auto& [id, t] : reps) {
      first.emplace_back(t.first, t.count);
      second.emplace_back(t.second, t.count);
      product.emplace_back(t.product, t.count);
    }
    for (auto* v : {&first, &second, &product}) {
      for (auto& x : *v) x.canonicalize();
    }
    out.push_back({summarize(first), summarize(second), summarize(product)});
  }
  return out;
}

CyclicSystem point_system(const std::vector<ContextEstimate>& estimates, BuildOptions options) {
  std::vector<ContextMoments> contexts;
  for (const auto& e : estimates) contexts.push_back({e.first.point, e.second.point, e.corr.point});
  return CyclicSystem(std::move(contexts), options);
}

std::vector<EstimatedMoment> box_terms(const std::vector<ContextEstimate>& estimates) {
  const std::size_t n = estimates.size();
  std::vector<EstimatedMoment> terms;
  for (const auto& e : estimates) terms.push_back(e.corr);
  for (std::size_t i = 0; i < n; ++i) {
    const EstimatedMoment& here = estimates[i].first;
    const EstimatedMoment& before = estimates[(i + n - 1) % n].second;
    EstimatedMoment d;
    d.point = here.point - before.point;
    const double se = std::hypot(here.se.get_d(), before.se.get_d());
    d.se = se == 0.0 ? Rational(0) : rational_from_double(se);
    d.df = std::min(here.df, before.df);
    terms.push_back(std::move(d));
  }
  return terms;
}

// ---- tests and intervals -------------------------------------------------

bool TTest::significant(double level) const {
  return std::fabs(t) > t_quantile(1.0 - level / 2.0, df);
}

TTest two_sample_t(const EstimatedMoment& a, const EstimatedMoment& b, int df) {
  const double se = std::hypot(a.se.get_d(), b.se.get_d());
  if (se == 0.0) throw Error(ErrorCode::ZeroVariance, "both standard errors are zero");
  TTest out;
  out.t = Rational(a.point - b.point).get_d() / se;
  out.df = df;
  out.p_value = std::min(1.0, 2.0 * t_upper_tail(std::fabs(out.t), df));
  return out;
}

MomentBox conservative_box(std::span<const EstimatedMoment> terms, double alpha,
                           std::optional<Rational> factor) {
  if (terms.empty() || terms.size() % 2 != 0) {
    throw Error(ErrorCode::DomainError, "expected 2n terms (n correlations, n deltas)");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::DomainError, "alpha must lie in (0, 1)");
  if (factor && *factor < 0) throw Error(ErrorCode::DomainError, "negative interval factor");
  const std::size_t n = terms.size() / 2;
  MomentBox box;
  box.alpha = alpha;
  box.factor = factor;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const EstimatedMoment& term = terms[k];
    if (term.se < 0) throw Error(ErrorCode::DomainError, "negative standard error", k);
    Rational half_width;
    if (factor) {
      half_width = *factor * term.se;
    } else {
      const double q = t_quantile(1.0 - alpha / static_cast<double>(terms.size()), term.df);
      box.quantiles.push_back(q);
      half_width = rational_exact_binary(q) * term.se;
    }
    Interval iv{term.point - half_width, term.point + half_width};
    if (k < n) {
      box.corr.push_back(std::move(iv));
      box.corr_point.push_back(term.point);
    } else {
      box.delta.push_back(std::move(iv));
      box.delta_point.push_back(term.point);
    }
  }
  return box;
}

// ---- embedded data -------------------------------------------------------

std::vector<EstimatedMoment> LapkiewiczData::terms() const {
  std::vector<EstimatedMoment> out = corr;
  out.insert(out.end(), delta.begin(), delta.end());
  return out;
}

LapkiewiczData lapkiewicz_dataset() {
  constexpr int kDf = 19;
  const Rational kFactor = 14;
  const auto term = [&](const char* point, const char* half_width) {
    return EstimatedMoment{parse_rational(point), parse_rational(half_width) / kFactor, kDf};
  };
  const auto marginal = [&](const char* point, const char* se) {
    return EstimatedMoment{parse_rational(point), parse_rational(se), kDf};
  };
  LapkiewiczData data;
  data.corr = {term("-0.805", "0.028"), term("-0.804", "0.042"), term("-0.709", "0.042"),
               term("-0.810", "0.028"), term("-0.766", "0.028")};
  data.delta = {term("-0.036", "0.101"), term("-0.004", "0.140"), term("0.006", "0.126"),
                term("-0.020", "0.080"), term("-0.006", "0.080")};
  data.marginals = {{1, marginal("0.136", "0.006"), marginal("0.172", "0.004")},
                    {4, marginal("0.122", "0.004"), marginal("0.142", "0.004")}};
  return data;
}

CyclicSystem lapkiewicz_point_system() {
  const auto r = [](const char* s) { return parse_rational(s); };
  // context i: (<R_i^i>, <R_{i+1}^i>, <R_i^i R_{i+1}^i>)
  std::vector<ContextMoments> contexts = {
      {r("0.136"), r("0"), r("-0.805")},
      {r("-0.004"), r("0"), r("-0.804")},
      {r("0.006"), r("0.142"), r("-0.709")},
      {r("0.122"), r("0"), r("-0.810")},
      {r("-0.006"), r("0.172"), r("-0.766")},
  };
  return CyclicSystem(std::move(contexts));
}

}  // namespace cyccon::stats
