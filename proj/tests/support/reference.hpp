#pragma once

// Test-only reference computations. Nothing here calls the s-function,
// criterion, coupling or oracle code of the library.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "cyccon/joint_distribution.hpp"
#include "cyccon/model.hpp"
#include "cyccon/rational.hpp"

namespace ref {

using cyccon::ContextMoments;
using cyccon::CyclicSystem;
using cyccon::Rational;

// Plain loop over all 2^n sign vectors; keeps the requested parity.
template <class T>
T brute_s(const std::vector<T>& x, bool odd) {
  const std::size_t n = x.size();
  bool have = false;
  T best{};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    int negatives = 0;
    T sum{};
    for (std::size_t k = 0; k < n; ++k) {
      if ((mask >> k) & 1U) {
        ++negatives;
        sum -= x[k];
      } else {
        sum += x[k];
      }
    }
    if ((negatives % 2 == 1) != odd) continue;
    if (!have || sum > best) best = sum;
    have = true;
  }
  return best;
}

template <class T>
T brute_s1(const std::vector<T>& x) { return brute_s(x, true); }
template <class T>
T brute_s0(const std::vector<T>& x) { return brute_s(x, false); }

inline Rational abs_r(const Rational& x) { return x < 0 ? Rational(-x) : x; }

// Main-criterion left-hand side written out by hand.
inline Rational main_lhs(const CyclicSystem& sys) {
  std::vector<Rational> args;
  const std::size_t n = sys.rank();
  for (std::size_t i = 0; i < n; ++i) {
    const Rational d = sys.context(i).first - sys.context((i + n - 1) % n).second;
    args.push_back(sys.context(i).corr);
    args.push_back(1 - abs_r(d));
  }
  return brute_s1(args);
}

inline bool main_contextual(const CyclicSystem& sys) {
  return main_lhs(sys) > Rational(2 * static_cast<long>(sys.rank()) - 2);
}

// Student t quantile by Simpson integration of the density, then bisection.
inline double t_density(double t, int df) {
  const double nu = df;
  const double c = std::exp(std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2)) / std::sqrt(nu * M_PI);
  return c * std::pow(1 + t * t / nu, -(nu + 1) / 2);
}

inline double t_cdf_integrated(double t, int df) {
  // 0.5 + integral_0^t of the density
  const int steps = 20000;
  const double h = t / steps;
  double s = t_density(0, df) + t_density(t, df);
  for (int k = 1; k < steps; ++k) s += (k % 2 ? 4 : 2) * t_density(k * h, df);
  return 0.5 + s * h / 3;
}

// Upper tail from t > 0 to infinity, substituting x = 1/u; accurate far out.
inline double t_tail_integrated(double t, int df) {
  const int steps = 20000;
  const double top = 1 / t;
  const double h = top / steps;
  const auto f = [&](double u) { return u == 0 ? 0.0 : t_density(1 / u, df) / (u * u); };
  double s = f(0) + f(top);
  for (int k = 1; k < steps; ++k) s += (k % 2 ? 4 : 2) * f(k * h);
  return s * h / 3;
}

inline double t_quantile_integrated(double p, int df) {
  double lo = 0, hi = 50;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (t_cdf_integrated(mid, df) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Moments of a joint computed by direct summation over atoms.
inline Rational sum_expectation(const cyccon::JointDistribution& j, std::vector<std::size_t> vars) {
  Rational total = 0;
  const std::size_t k = j.variable_count();
  for (std::uint64_t atom = 0; atom < j.atom_count(); ++atom) {
    int sign = 1;
    for (std::size_t v : vars) sign *= ((atom >> (k - 1 - v)) & 1U) ? -1 : 1;
    total += sign * j.probability(atom);
  }
  return total;
}

inline Rational sum_total(const cyccon::JointDistribution& j) { return sum_expectation(j, {}); }

// ---- generators ------------------------------------------------------------

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }

  /// k / den with k uniform in [-den, den].
  Rational unit(long den) {
    Rational r(integer(-den, den), den);
    r.canonicalize();
    return r;
  }

  /// Point of [lo, hi] on a grid of `steps`, endpoints with extra weight.
  Rational between(const Rational& lo, const Rational& hi, long steps) {
    const long pick = integer(-2, steps + 2);
    if (pick <= 0) return lo;
    if (pick >= steps) return hi;
    Rational r = lo + (hi - lo) * Rational(pick, steps);
    r.canonicalize();
    return r;
  }

  /// Random realizable system. Marginals are shared across a connection with
  /// probability `consistent`; correlations favour the realizable extremes,
  /// where contextual systems live.
  CyclicSystem system(std::size_t n, long den = 8, double consistent = 0.4) {
    const bool all_consistent = coin(consistent);
    std::vector<Rational> property(n);
    for (auto& p : property) p = small_marginal(den);
    std::vector<ContextMoments> contexts;
    for (std::size_t i = 0; i < n; ++i) {
      Rational a = all_consistent ? property[i] : (coin(0.5) ? property[i] : small_marginal(den));
      Rational b = all_consistent ? property[(i + 1) % n] : (coin(0.5) ? property[(i + 1) % n] : small_marginal(den));
      const Rational lo = abs_r(a + b) - 1;
      const Rational hi = 1 - abs_r(a - b);
      contexts.push_back({a, b, between(lo, hi, den)});
    }
    return CyclicSystem(std::move(contexts));
  }

  /// System on the boundary of the main criterion (lhs == 2n - 2), or
  /// nothing if the random draw cannot be completed.
  std::optional<CyclicSystem> boundary_system(std::size_t n, long den = 8) {
    CyclicSystem base = system(n, den, 0.5);
    std::vector<ContextMoments> contexts = base.contexts();
    int negatives = 0;
    Rational total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Rational d = contexts[i].first - contexts[(i + n - 1) % n].second;
      const Rational m = 1 - abs_r(d);
      total += abs_r(m);
      if (m < 0) ++negatives;
      if (i + 1 < n) {
        total += abs_r(contexts[i].corr);
        if (contexts[i].corr < 0) ++negatives;
      }
    }
    // With a negative product s1 is the plain absolute sum.
    const Rational need = Rational(2 * static_cast<long>(n) - 2) - total;
    if (need <= 0 || need > 1) return std::nullopt;
    const Rational corr = negatives % 2 == 0 ? Rational(-need) : need;
    auto& last = contexts[n - 1];
    if (corr < abs_r(last.first + last.second) - 1 || corr > 1 - abs_r(last.first - last.second)) {
      return std::nullopt;
    }
    last.corr = corr;
    return CyclicSystem(std::move(contexts));
  }

 private:
  Rational small_marginal(long den) {
    // marginals near zero leave room for extreme correlations
    const long span = coin(0.6) ? den / 4 : den;
    Rational r(integer(-span, span), den);
    r.canonicalize();
    return r;
  }

  std::mt19937_64 rng_;
};

// Realizable (e1, e2, corr) triples from {-1, -1/2, 0, 1/2, 1}.
inline std::vector<ContextMoments> grid_triples() {
  const std::vector<Rational> v = {Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(1)};
  std::vector<ContextMoments> out;
  for (const auto& a : v) {
    for (const auto& b : v) {
      for (const auto& c : v) {
        if (c >= abs_r(a + b) - 1 && c <= 1 - abs_r(a - b)) out.push_back({a, b, c});
      }
    }
  }
  return out;
}

}  // namespace ref
