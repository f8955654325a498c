#include "cyccon/coupling.hpp"

#include <array>
#include <utility>

#include "cyccon/error.hpp"

namespace cyccon {
namespace {

void require_pair(const Rational& e_a, const Rational& e_b, const Rational& e_ab, ErrorCode code,
                  const std::string& where) {
  if (e_a < -1 || e_a > 1 || e_b < -1 || e_b > 1) {
    throw Error(code, where + ": marginal expectation outside [-1, 1]");
  }
  const PairBounds b = pair_corr_bounds(e_a, e_b);
  if (e_ab < b.lo) {
    throw Error(code, where + ": product moment " + to_exact_string(e_ab) + " below lower bound " +
                          to_exact_string(b.lo));
  }
  if (e_ab > b.hi) {
    throw Error(code, where + ": product moment " + to_exact_string(e_ab) + " above upper bound " +
                          to_exact_string(b.hi));
  }
}

}  // namespace

JointDistribution pair_table(const PairMoments& m, std::string a, std::string b) {
  require_pair(m.e_a, m.e_b, m.e_ab, ErrorCode::InfeasiblePair, "pair");
  const Rational p = (1 + m.e_a) / 2;
  const Rational q = (1 + m.e_b) / 2;
  const Rational r = (1 + m.e_a + m.e_b + m.e_ab) / 4;
  return JointDistribution({std::move(a), std::move(b)},
                           {r, Rational(p - r), Rational(q - r), Rational(1 - p - q + r)});
}

MaxPairCoupling max_pair_coupling(const Rational& e_a, const Rational& e_b) {
  if (e_a < -1 || e_a > 1 || e_b < -1 || e_b > 1) {
    throw Error(ErrorCode::InfeasiblePair, "marginal expectation outside [-1, 1]");
  }
  const Rational gap = rabs(e_a - e_b);
  return {{e_a, e_b, Rational(1 - gap)}, Rational(1 - gap / 2)};
}

JointDistribution triple_joint(const Rational& e1, const Rational& e2, const Rational& e3,
                               const Rational& c12, const Rational& c23, const Rational& c31,
                               std::vector<std::string> names) {
  require_pair(e1, e2, c12, ErrorCode::InfeasibleTriple, "pair (1,2)");
  require_pair(e2, e3, c23, ErrorCode::InfeasibleTriple, "pair (2,3)");
  require_pair(e3, e1, c31, ErrorCode::InfeasibleTriple, "pair (3,1)");
  const std::array<Rational, 3> corr{c12, c23, c31};
  const Rational s = s1(corr);
  if (s > 1) {
    throw Error(ErrorCode::InfeasibleTriple,
                "s1 of the pairwise products is " + to_exact_string(s) + " > 1");
  }
  // 8 p_abc = base_abc + abc * theta; nonnegativity bounds theta.
  std::array<Rational, 8> base;
  Rational lo = -1, hi = 1;
  for (unsigned atom = 0; atom < 8; ++atom) {
    const int a = atom & 4U ? -1 : 1;
    const int b = atom & 2U ? -1 : 1;
    const int c = atom & 1U ? -1 : 1;
    base[atom] = 1 + a * e1 + b * e2 + c * e3 + (a * b) * c12 + (b * c) * c23 + (c * a) * c31;
    if (a * b * c > 0) {
      lo = rmax(lo, Rational(-base[atom]));
    } else {
      hi = rmin(hi, base[atom]);
    }
  }
  if (lo > hi) {
    throw InternalError("empty three-way moment interval for a realizable triple");
  }
  const Rational theta = (lo + hi) / 2;
  std::vector<Rational> probabilities(8);
  for (unsigned atom = 0; atom < 8; ++atom) {
    const int abc = std::popcount(atom) % 2 == 0 ? 1 : -1;
    probabilities[atom] = (base[atom] + abc * theta) / 8;
  }
  return JointDistribution(std::move(names), std::move(probabilities));
}

JointDistribution chain_joint(std::span<const JointDistribution> tables) {
  if (tables.empty()) throw Error(ErrorCode::EmptyInput, "no pair tables to chain");
  for (const auto& t : tables) {
    if (t.variable_count() != 2 || !t.is_distribution()) {
      throw Error(ErrorCode::DomainError, "chain_joint expects 2-variable probability tables");
    }
  }
  for (std::size_t j = 0; j + 1 < tables.size(); ++j) {
    // Pr[shared = +1] from both sides.
    const Rational left = tables[j].probability(0) + tables[j].probability(2);
    const Rational right = tables[j + 1].probability(0) + tables[j + 1].probability(1);
    if (left != right) {
      throw Error(ErrorCode::MarginalMismatch,
                  "tables " + std::to_string(j + 1) + " and " + std::to_string(j + 2) +
                      " disagree on the shared variable",
                  j);
    }
  }
  std::vector<std::string> names{tables[0].variables()[0]};
  for (const auto& t : tables) names.push_back(t.variables()[1]);
  JointDistribution out(names);
  const std::size_t k = names.size();

  // Conditional Pr[V_{j+1} = w | V_j = v] for each table, uniform on null events.
  std::vector<std::array<Rational, 4>> conditional(tables.size());
  for (std::size_t j = 1; j < tables.size(); ++j) {
    for (unsigned v = 0; v < 2; ++v) {
      const Rational pv = tables[j].probability(2 * v) + tables[j].probability(2 * v + 1);
      for (unsigned w = 0; w < 2; ++w) {
        conditional[j][2 * v + w] = pv == 0 ? Rational(1, 2) : Rational(tables[j].probability(2 * v + w) / pv);
      }
    }
  }
  for (std::uint64_t atom = 0; atom < out.atom_count(); ++atom) {
    const auto bit = [&](std::size_t j) -> unsigned { return (atom >> (k - 1 - j)) & 1U; };
    Rational p = tables[0].probability(2 * bit(0) + bit(1));
    for (std::size_t j = 1; j < tables.size() && p != 0; ++j) {
      p *= conditional[j][2 * bit(j) + bit(j + 1)];
    }
    out.set(atom, std::move(p));
  }
  return out;
}

namespace {

std::vector<Rational> slice(std::span<const Rational> x, std::size_t begin, std::size_t end) {
  return std::vector<Rational>(x.begin() + static_cast<std::ptrdiff_t>(begin),
                               x.begin() + static_cast<std::ptrdiff_t>(end));
}

/// Joint over V_0..V_{m-1}; assumes pairwise realizability and s1(corr) <= m-2.
std::vector<Rational> peel(std::span<const Rational> means, std::span<const Rational> corr) {
  const std::size_t m = means.size();
  if (m == 3) {
    return triple_joint(means[0], means[1], means[2], corr[0], corr[1], corr[2]).probabilities();
  }
  // Close V_1..V_{m-1} (0-based 0..m-2) into a shorter cycle with
  // t = <V_{m-2} V_0>, and keep the triangle (V_{m-2}, V_{m-1}, V_0).
  const Rational& e_last = means[m - 2];
  const Rational& e_first = means[0];
  const std::vector<Rational> tail = slice(corr, m - 2, m);   // <V_{m-2}V_{m-1}>, <V_{m-1}V_0>
  const std::vector<Rational> head = slice(corr, 0, m - 2);   // corr of the open chain V_0..V_{m-2}
  const Rational shorter_bound = Rational(static_cast<long>(m) - 3);

  const PairBounds pair = pair_corr_bounds(e_last, e_first);
  Rational lo = pair.lo;
  Rational hi = pair.hi;
  lo = rmax(lo, Rational(s0(tail) - 1));
  hi = rmin(hi, Rational(1 - s1(tail)));
  lo = rmax(lo, Rational(s0(head) - shorter_bound));
  hi = rmin(hi, Rational(shorter_bound - s1(head)));
  if (lo > hi) {
    throw InternalError("empty closing-correlation interval while peeling a feasible cycle of length " +
                        std::to_string(m));
  }
  const Rational t = (lo + hi) / 2;

  std::vector<Rational> shorter_corr = head;
  shorter_corr.push_back(t);
  const std::vector<Rational> shorter = peel(means.subspan(0, m - 1), shorter_corr);
  const JointDistribution triangle =
      triple_joint(e_last, means[m - 1], e_first, corr[m - 2], corr[m - 1], t);

  // Pr[V_{m-2} = x, V_0 = z] from the triangle; the shorter cycle induces the
  // same pair distribution since both use (e_last, e_first, t).
  std::array<Rational, 4> shared;
  for (unsigned x = 0; x < 2; ++x) {
    for (unsigned z = 0; z < 2; ++z) {
      shared[2 * x + z] = triangle.probability(4 * x + z) + triangle.probability(4 * x + 2 + z);
    }
  }
  std::vector<Rational> out(std::size_t{1} << m);
  for (std::uint64_t atom = 0; atom < out.size(); ++atom) {
    const std::uint64_t prefix = atom >> 1;
    const Rational& p_short = shorter[prefix];
    if (p_short == 0) continue;
    const unsigned x = (atom >> 1) & 1U;        // V_{m-2}
    const unsigned y = atom & 1U;               // V_{m-1}
    const unsigned z = (atom >> (m - 1)) & 1U;  // V_0
    const Rational& p_pair = shared[2 * x + z];
    if (p_pair == 0) continue;
    out[atom] = p_short * triangle.probability(4 * x + 2 * y + z) / p_pair;
  }
  return out;
}

}  // namespace

CycleResult cycle_joint(std::span<const Rational> means, std::span<const Rational> corr,
                        std::vector<std::string> names) {
  const std::size_t m = means.size();
  if (m < 3 || corr.size() != m) {
    throw Error(ErrorCode::DomainError, "cycle_joint needs m >= 3 means and m correlations");
  }
  if (m > JointDistribution::kDefaultMaxVariables) {
    throw Error(ErrorCode::TooManyVariables, "cycle of " + std::to_string(m) + " variables exceeds the cap");
  }
  if (names.empty()) {
    for (std::size_t i = 0; i < m; ++i) names.push_back("V" + std::to_string(i + 1));
  }
  if (names.size() != m) throw Error(ErrorCode::DomainError, "name count does not match cycle length");
  for (std::size_t i = 0; i < m; ++i) {
    require_pair(means[i], means[(i + 1) % m], corr[i], ErrorCode::InfeasiblePair,
                 "pair (" + names[i] + ", " + names[(i + 1) % m] + ")");
  }
  auto obstruction = s1_enum(corr);
  const Rational bound = Rational(static_cast<long>(m) - 2);
  if (obstruction.value > bound) {
    return InfeasibleCycle{std::move(obstruction.value), bound, std::move(obstruction.witness)};
  }
  return JointDistribution(std::move(names), peel(means, corr));
}

std::vector<std::string> coupling_variable_names(std::size_t rank) {
  std::vector<std::string> names;
  names.reserve(2 * rank);
  for (std::size_t i = 0; i < rank; ++i) {
    const std::string context = "_c" + std::to_string(i + 1);
    names.push_back("S" + std::to_string(i + 1) + context);
    names.push_back("S" + std::to_string((i + 1) % rank + 1) + context);
  }
  return names;
}

CycleResult maximal_coupling(const CyclicSystem& sys) {
  const std::size_t n = sys.rank();
  std::vector<Rational> means;
  std::vector<Rational> corr;
  means.reserve(2 * n);
  corr.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const ContextMoments& here = sys.context(i);
    const ContextMoments& next = sys.context((i + 1) % n);
    means.push_back(here.first);
    means.push_back(here.second);
    corr.push_back(here.corr);
    // connection of q_{i+1}: (R_{i+1}^i, R_{i+1}^{i+1})
    corr.push_back(max_pair_coupling(here.second, next.first).moments.e_ab);
  }
  CycleResult result = cycle_joint(means, corr, coupling_variable_names(n));
  if (auto* failure = std::get_if<InfeasibleCycle>(&result)) {
    // Cycle edge 2i+1 is the connection of property i+1, which sits at
    // argument 2(i+1)+1 in the (corr_1, 1-|D_1|, ...) ordering.
    std::vector<int> reordered(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      reordered[2 * i] = failure->witness[2 * i];
      reordered[2 * ((i + 1) % n) + 1] = failure->witness[2 * i + 1];
    }
    failure->witness = SignVector(std::move(reordered));
  }
  return result;
}

}  // namespace cyccon
