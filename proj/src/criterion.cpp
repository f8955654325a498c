#include "cyccon/criterion.hpp"

#include <string>

namespace cyccon {

std::string_view to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::main: return "main";
    case CriterionKind::consistent: return "consistent";
    case CriterionKind::necessary: return "necessary";
    case CriterionKind::kcbs: return "kcbs";
  }
  return "main";
}

CriterionKind criterion_kind_from_string(std::string_view name) {
  if (name == "main") return CriterionKind::main;
  if (name == "consistent") return CriterionKind::consistent;
  if (name == "necessary") return CriterionKind::necessary;
  if (name == "kcbs") return CriterionKind::kcbs;
  throw Error(ErrorCode::ParseError, "unknown criterion kind '" + std::string(name) + "'");
}

namespace {

std::vector<Rational> deltas_of(const CyclicSystem& sys) {
  std::vector<Rational> out;
  out.reserve(sys.rank());
  for (std::size_t i = 0; i < sys.rank(); ++i) out.push_back(sys.delta(i));
  return out;
}

}  // namespace

Verdict check_main(const CyclicSystem& sys) {
  const std::size_t n = sys.rank();
  std::vector<Rational> args;
  args.reserve(2 * n);
  Verdict v;
  v.kind = CriterionKind::main;
  v.deltas = deltas_of(sys);
  for (std::size_t i = 0; i < n; ++i) {
    args.push_back(sys.context(i).corr);
    args.push_back(1 - rabs(v.deltas[i]));
  }
  auto best = s1_enum(std::span<const Rational>(args));
  v.lhs = std::move(best.value);
  v.witness = std::move(best.witness);
  v.bound = Rational(static_cast<long>(2 * n - 2));
  v.contextual = v.lhs > v.bound;
  return v;
}

Verdict check_consistent(const CyclicSystem& sys) {
  const std::size_t n = sys.rank();
  Verdict v;
  v.kind = CriterionKind::consistent;
  v.deltas = deltas_of(sys);
  std::string offending;
  for (std::size_t i = 0; i < n; ++i) {
    if (v.deltas[i] != 0) {
      if (!offending.empty()) offending += ", ";
      offending += "connection " + std::to_string(i + 1) + " (delta " + to_exact_string(v.deltas[i]) + ")";
    }
  }
  if (!offending.empty()) {
    throw Error(ErrorCode::NotConsistentlyConnected, offending);
  }
  const auto corr = sys.correlations();
  auto best = s1_enum(std::span<const Rational>(corr));
  v.lhs = std::move(best.value);
  v.witness = std::move(best.witness);
  v.bound = Rational(static_cast<long>(n) - 2);
  v.contextual = v.lhs > v.bound;
  return v;
}

Verdict check_necessary(const CyclicSystem& sys) {
  const std::size_t n = sys.rank();
  Verdict v;
  v.kind = CriterionKind::necessary;
  v.deltas = deltas_of(sys);
  const auto corr = sys.correlations();
  auto best = s1_enum(std::span<const Rational>(corr));
  Rational spread = 0;
  for (const auto& d : v.deltas) spread += rabs(d);
  v.lhs = best.value - spread;
  v.witness = std::move(best.witness);
  v.bound = Rational(static_cast<long>(n) - 2);
  v.contextual = v.lhs > v.bound;
  v.inconclusive = !v.contextual;
  return v;
}

CyclicSystem kcbs_system(std::span<const Rational, 5> p) {
  for (std::size_t i = 0; i < 5; ++i) {
    if (p[i] < 0 || p[i] > 1) {
      throw Error(ErrorCode::InvalidMoment, "p" + std::to_string(i + 1) + " outside [0, 1]", i);
    }
  }
  std::vector<ContextMoments> contexts;
  for (std::size_t i = 0; i < 5; ++i) {
    const Rational& here = p[i];
    const Rational& next = p[(i + 1) % 5];
    if (here + next > 1) {
      throw Error(ErrorCode::OverlapViolation,
                  "p" + std::to_string(i + 1) + " + p" + std::to_string((i + 1) % 5 + 1) + " > 1", i);
    }
    contexts.push_back({Rational(2 * here - 1), Rational(2 * next - 1), Rational(1 - 2 * (here + next))});
  }
  return CyclicSystem(std::move(contexts));
}

Verdict check_kcbs(std::span<const Rational, 5> p) {
  const CyclicSystem induced = kcbs_system(p);
  const Verdict consistent = check_consistent(induced);
  Verdict v;
  v.kind = CriterionKind::kcbs;
  v.lhs = p[0] + p[1] + p[2] + p[3] + p[4];
  v.bound = 2;
  v.contextual = v.lhs > v.bound;
  v.witness = consistent.witness;
  v.deltas = consistent.deltas;
  if (v.contextual != consistent.contextual) {
    throw InternalError("KCBS sum and consistent-connectedness criterion disagree");
  }
  return v;
}

IntervalVerdict interval_verdict(const MomentBox& box, const BoxMode& mode) {
  const std::size_t n = box.rank();
  if (n < 2 || box.delta.size() != n) {
    throw Error(ErrorCode::DomainError, "moment box needs n >= 2 correlation and n delta intervals");
  }
  IntervalVerdict out;
  out.s1_range = s1_box_range(box.corr, mode);
  out.abs_delta_sum = {Rational(0), Rational(0)};
  for (const auto& d : box.delta) {
    if (d.lo > d.hi) throw Error(ErrorCode::DomainError, "delta interval with lo > hi");
    const Rational nearest = d.lo > 0 ? d.lo : (d.hi < 0 ? Rational(-d.hi) : Rational(0));
    const Rational farthest = rmax(rabs(d.lo), rabs(d.hi));
    out.abs_delta_sum.lo += nearest;
    out.abs_delta_sum.hi += farthest;
  }
  out.lhs = {out.s1_range.lo - out.abs_delta_sum.hi, out.s1_range.hi - out.abs_delta_sum.lo};
  out.bound = Rational(static_cast<long>(n) - 2);
  out.certified = out.lhs.lo > out.bound;
  return out;
}

}  // namespace cyccon
