#pragma once

// The parity-restricted signed-sum maxima
//
//   s1(x) = max { sum_k i_k x_k : i_k in {-1,+1}, prod_k i_k = -1 }
//   s0(x) = max { sum_k i_k x_k : i_k in {-1,+1}, prod_k i_k = +1 }
//
// Enumeration is the reference; the closed forms are the fast path.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cyccon/error.hpp"
#include "cyccon/rational.hpp"

namespace cyccon {

class SignVector {
 public:
  SignVector() = default;
  explicit SignVector(std::vector<int> coefficients);

  std::size_t size() const noexcept { return coefficients_.size(); }
  int operator[](std::size_t k) const { return coefficients_.at(k); }
  const std::vector<int>& coefficients() const noexcept { return coefficients_; }
  /// Product of the coefficients (+1 or -1); +1 for the empty vector.
  int parity() const noexcept;

  friend bool operator==(const SignVector&, const SignVector&) = default;

 private:
  std::vector<int> coefficients_;
};

template <class T>
struct SignedMax {
  T value;
  SignVector witness;
};

namespace detail {

inline constexpr std::size_t kMaxEnumerationSize = 24;

inline int sign_of(const Rational& x) { return sgn(x); }
inline int sign_of(double x) { return (x > 0) - (x < 0); }

inline Rational magnitude(const Rational& x) { return rabs(x); }
inline double magnitude(double x) { return x < 0 ? -x : x; }

/// Walks all 2^n sign vectors in Gray-code order, one coordinate flip per
/// step. Among vectors of the requested parity keeps the largest sum, ties
/// going to the lexicographically least vector with +1 ordered before -1.
/// Coordinate k maps to bit (n-1-k), bit set meaning -1, so lexicographic
/// order is numeric order of the mask.
template <class T>
SignedMax<T> parity_max(std::span<const T> x, bool odd) {
  const std::size_t n = x.size();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "s-function of an empty vector");
  if (n > kMaxEnumerationSize) {
    throw Error(ErrorCode::DomainError, "enumeration limited to 24 coordinates");
  }
  T sum = x[0];
  for (std::size_t k = 1; k < n; ++k) sum += x[k];
  std::vector<T> twice(x.begin(), x.end());
  for (auto& t : twice) t *= 2;

  std::uint32_t mask = 0;
  std::uint32_t best_mask = 0;
  T best = sum;
  bool have = false;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 0; step < total; ++step) {
    if (step > 0) {
      const int bit = std::countr_zero(step);
      const std::size_t k = n - 1 - static_cast<std::size_t>(bit);
      const std::uint32_t flag = std::uint32_t{1} << bit;
      if (mask & flag) {
        sum += twice[k];
      } else {
        sum -= twice[k];
      }
      mask ^= flag;
    }
    const bool mask_odd = (std::popcount(mask) & 1) != 0;
    if (mask_odd != odd) continue;
    if (!have || sum > best || (sum == best && mask < best_mask)) {
      best = sum;
      best_mask = mask;
      have = true;
    }
  }
  std::vector<int> coefficients(n);
  for (std::size_t k = 0; k < n; ++k) {
    coefficients[k] = (best_mask >> (n - 1 - k)) & 1U ? -1 : 1;
  }
  return {best, SignVector(std::move(coefficients))};
}

/// sum |x| - 2 [sign(prod x) == correction_sign] min |x|
template <class T>
T parity_closed(std::span<const T> x, int correction_sign) {
  if (x.empty()) throw Error(ErrorCode::EmptyInput, "s-function of an empty vector");
  T total = magnitude(x[0]);
  T smallest = total;
  int product_sign = sign_of(x[0]);
  for (std::size_t k = 1; k < x.size(); ++k) {
    T m = magnitude(x[k]);
    total += m;
    if (m < smallest) smallest = m;
    product_sign *= sign_of(x[k]);
  }
  if (product_sign == correction_sign) total -= 2 * smallest;
  return total;
}

}  // namespace detail

/// s1 by enumeration of all odd-parity sign vectors, with a maximizing witness.
template <class T>
SignedMax<T> s1_enum(std::span<const T> x) {
  return detail::parity_max(x, true);
}

/// s0 by enumeration of all even-parity sign vectors, with a maximizing witness.
template <class T>
SignedMax<T> s0_enum(std::span<const T> x) {
  return detail::parity_max(x, false);
}

/// sum |x_i| - 2 [x_1 ... x_n > 0] min |x_i|
template <class T>
T s1_closed(std::span<const T> x) {
  return detail::parity_closed(x, +1);
}

/// sum |x_i| - 2 [x_1 ... x_n < 0] min |x_i|
template <class T>
T s0_closed(std::span<const T> x) {
  return detail::parity_closed(x, -1);
}

inline Rational s1(std::span<const Rational> x) { return s1_closed(x); }
inline Rational s0(std::span<const Rational> x) { return s0_closed(x); }

/// Checks the concatenation identities
///   s1(a|b) = max{s0(a)+s1(b), s1(a)+s0(b)},  s0(a|b) = max{s0(a)+s0(b), s1(a)+s1(b)}
/// with every s-value computed by enumeration.
bool split_identity_check(std::span<const Rational> a, std::span<const Rational> b);

/// Checks s0(x) + s1(x) = 2 sum |x_i| - 2 min |x_i| (enumeration on the left).
bool s_pair_identity(std::span<const Rational> x);

// ---- interval extension -------------------------------------------------

struct Interval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

using Box = std::vector<Interval>;

struct BoxMode {
  enum class Kind { conservative, grid };
  Kind kind = Kind::conservative;
  /// Grid spacing h; the certificate slack is n*h/2.
  Rational spacing = Rational(1, 1000);
  /// Refuse grids with more points than this.
  std::uint64_t max_grid_points = 2'000'000;

  static BoxMode conservative() { return {}; }
  static BoxMode grid(Rational h) {
    BoxMode m;
    m.kind = Kind::grid;
    m.spacing = std::move(h);
    return m;
  }
};

/// Whether some point of the box has x_1 ... x_n > 0.
bool positive_product_attainable(const Box& box);

/// Range [lo, hi] of s1 over a box. `hi` is exact (vertex maximum of a
/// convex function). In conservative mode `lo` is exact and requires that no
/// point of the box has a positive coordinate product; in grid mode `lo` is a
/// certified lower bound min_grid s1 - n*h/2.
/// Throws Error(ConservativeModeInapplicable | NonPositiveSpacing | GridTooLarge | EmptyInput).
Interval s1_box_range(const Box& box, const BoxMode& mode = BoxMode::conservative());

}  // namespace cyccon
