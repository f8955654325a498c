#include "cyccon/sfunc.hpp"

#include <algorithm>

namespace cyccon {

SignVector::SignVector(std::vector<int> coefficients) : coefficients_(std::move(coefficients)) {
  for (int c : coefficients_) {
    if (c != 1 && c != -1) throw Error(ErrorCode::DomainError, "sign coefficients must be +1 or -1");
  }
}

int SignVector::parity() const noexcept {
  int p = 1;
  for (int c : coefficients_) p *= c;
  return p;
}

bool split_identity_check(std::span<const Rational> a, std::span<const Rational> b) {
  std::vector<Rational> joined(a.begin(), a.end());
  joined.insert(joined.end(), b.begin(), b.end());
  const std::span<const Rational> ab(joined);
  const Rational s0a = s0_enum(a).value, s1a = s1_enum(a).value;
  const Rational s0b = s0_enum(b).value, s1b = s1_enum(b).value;
  const Rational odd = rmax(Rational(s0a + s1b), Rational(s1a + s0b));
  const Rational even = rmax(Rational(s0a + s0b), Rational(s1a + s1b));
  return s1_enum(ab).value == odd && s0_enum(ab).value == even;
}

bool s_pair_identity(std::span<const Rational> x) {
  Rational total = 0;
  Rational smallest = rabs(x[0]);
  for (const auto& v : x) {
    total += rabs(v);
    if (rabs(v) < smallest) smallest = rabs(v);
  }
  return s0_enum(x).value + s1_enum(x).value == 2 * total - 2 * smallest;
}

bool positive_product_attainable(const Box& box) {
  // reachable[p]: some strictly-signed choice so far has parity p of negatives
  bool even = true, odd = false;
  for (const auto& iv : box) {
    const bool can_pos = iv.hi > 0;
    const bool can_neg = iv.lo < 0;
    const bool next_even = (even && can_pos) || (odd && can_neg);
    const bool next_odd = (odd && can_pos) || (even && can_neg);
    even = next_even;
    odd = next_odd;
  }
  return even;
}

namespace {

Rational vertex_maximum(const Box& box) {
  const std::size_t n = box.size();
  std::vector<Rational> vertex(n);
  Rational best;
  for (std::uint64_t corner = 0; corner < (std::uint64_t{1} << n); ++corner) {
    for (std::size_t k = 0; k < n; ++k) vertex[k] = (corner >> k) & 1U ? box[k].hi : box[k].lo;
    Rational v = s1_enum(std::span<const Rational>(vertex)).value;
    if (corner == 0 || v > best) best = std::move(v);
  }
  return best;
}

Rational closest_to_zero(const Interval& iv) {
  if (iv.lo > 0) return iv.lo;
  if (iv.hi < 0) return iv.hi;
  return Rational(0);
}

Rational grid_minimum(const Box& box, const BoxMode& mode) {
  const std::size_t n = box.size();
  std::vector<std::vector<Rational>> axes(n);
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const Rational width = box[k].width();
    std::uint64_t points = 1;
    if (width > 0) {
      const Rational cells = width / mode.spacing;
      mpz_class ceil_cells;
      mpz_cdiv_q(ceil_cells.get_mpz_t(), cells.get_num_mpz_t(), cells.get_den_mpz_t());
      if (!ceil_cells.fits_ulong_p() || ceil_cells.get_ui() >= mode.max_grid_points) {
        throw Error(ErrorCode::GridTooLarge, "grid spacing too fine for the box");
      }
      points = ceil_cells.get_ui() + 1;
    }
    if (total > mode.max_grid_points / points) {
      throw Error(ErrorCode::GridTooLarge,
                  "grid would exceed " + std::to_string(mode.max_grid_points) + " points");
    }
    total *= points;
    axes[k].reserve(points);
    if (points == 1) {
      axes[k].push_back(box[k].lo);
    } else {
      const Rational step = width / Rational(static_cast<long>(points - 1));
      for (std::uint64_t j = 0; j < points; ++j) {
        axes[k].push_back(box[k].lo + step * Rational(static_cast<long>(j)));
      }
    }
  }
  std::vector<std::size_t> index(n, 0);
  std::vector<Rational> point(n);
  for (std::size_t k = 0; k < n; ++k) point[k] = axes[k][0];
  Rational best = s1_closed(std::span<const Rational>(point));
  for (;;) {
    std::size_t k = 0;
    while (k < n && index[k] + 1 == axes[k].size()) {
      index[k] = 0;
      point[k] = axes[k][0];
      ++k;
    }
    if (k == n) break;
    point[k] = axes[k][++index[k]];
    Rational v = s1_closed(std::span<const Rational>(point));
    if (v < best) best = std::move(v);
  }
  return best;
}

}  // namespace

Interval s1_box_range(const Box& box, const BoxMode& mode) {
  if (box.empty()) throw Error(ErrorCode::EmptyInput, "empty box");
  for (const auto& iv : box) {
    if (iv.lo > iv.hi) throw Error(ErrorCode::DomainError, "box interval with lo > hi");
  }
  Interval range;
  range.hi = vertex_maximum(box);
  if (mode.kind == BoxMode::Kind::conservative) {
    if (positive_product_attainable(box)) {
      throw Error(ErrorCode::ConservativeModeInapplicable,
                  "box contains points with positive coordinate product; use grid mode");
    }
    std::vector<Rational> nearest;
    nearest.reserve(box.size());
    for (const auto& iv : box) nearest.push_back(closest_to_zero(iv));
    range.lo = s1_enum(std::span<const Rational>(nearest)).value;
  } else {
    if (mode.spacing <= 0) throw Error(ErrorCode::NonPositiveSpacing, "grid spacing must be positive");
    const Rational slack = Rational(static_cast<long>(box.size())) * mode.spacing / 2;
    range.lo = grid_minimum(box, mode) - slack;
  }
  return range;
}

}  // namespace cyccon
