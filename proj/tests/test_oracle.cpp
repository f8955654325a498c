#include <doctest.h>

#include "cyccon/oracle.hpp"
#include "support/reference.hpp"

using namespace cyccon;

namespace {

Rational q(const char* s) { return parse_rational(s); }

struct Row {
  std::vector<std::size_t> vars;
  Rational rhs;
};

// The constraint list written out independently: variable 2i is S_{i+1} in
// context i+1, variable 2i+1 is S_{i+2} in context i+1.
std::vector<Row> hand_rows(const CyclicSystem& sys, bool identity) {
  const std::size_t n = sys.rank();
  std::vector<Row> rows = {{{}, 1}};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = sys.context(i);
    rows.push_back({{2 * i}, c.first});
    rows.push_back({{2 * i + 1}, c.second});
    rows.push_back({{2 * i, 2 * i + 1}, c.corr});
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Rational d = sys.context(i).first - sys.context((i + n - 1) % n).second;
    rows.push_back({{(2 * i + 2 * n - 1) % (2 * n), 2 * i}, identity ? Rational(1) : Rational(1 - ref::abs_r(d))});
  }
  return rows;
}

int sign_of(std::uint64_t atom, std::size_t var, std::size_t k) { return ((atom >> (k - 1 - var)) & 1U) ? -1 : 1; }

// y.A >= 0 on every atom and y.b < 0
bool farkas_holds(const std::vector<Row>& rows, const std::vector<Rational>& y, std::size_t k) {
  if (y.size() != rows.size()) return false;
  Rational yb = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) yb += y[r] * rows[r].rhs;
  if (yb >= 0) return false;
  for (std::uint64_t atom = 0; atom < (std::uint64_t{1} << k); ++atom) {
    Rational col = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      int s = 1;
      for (std::size_t v : rows[r].vars) s *= sign_of(atom, v, k);
      col += s * y[r];
    }
    if (col < 0) return false;
  }
  return true;
}

bool joint_satisfies(const std::vector<Row>& rows, const JointDistribution& j) {
  for (const auto& p : j.probabilities()) {
    if (p < 0) return false;
  }
  for (const auto& row : rows) {
    if (ref::sum_expectation(j, row.vars) != row.rhs) return false;
  }
  return true;
}

CyclicSystem zero_marginals(std::vector<Rational> corrs) {
  std::vector<ContextMoments> c;
  for (auto& r : corrs) c.push_back({0, 0, r});
  return CyclicSystem(std::move(c));
}

}  // namespace

TEST_CASE("build_problem matches the hand-written constraint list") {
  ref::Generator g(1);
  for (int trial = 0; trial < 50; ++trial) {
    const CyclicSystem sys = g.system(static_cast<std::size_t>(g.integer(2, 5)));
    for (bool identity : {false, true}) {
      const auto p = oracle::build_problem(sys, identity ? oracle::ConnectionTarget::identity
                                                         : oracle::ConnectionTarget::maximal);
      const auto rows = hand_rows(sys, identity);
      REQUIRE(p.row_count() == rows.size());
      CHECK(p.variable_count == 2 * sys.rank());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        auto a = p.row_terms[r];
        auto b = rows[r].vars;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
        CHECK(p.rhs[r] == rows[r].rhs);
      }
    }
  }
}

TEST_CASE("feasible: perfect triangle") {
  const CyclicSystem sys = zero_marginals({1, 1, 1});
  const auto r = oracle::feasible(sys);
  CHECK(r.feasible);
  REQUIRE(r.joint.has_value());
  CHECK(joint_satisfies(hand_rows(sys, false), *r.joint));
  CHECK(r.residual == 0);
}

TEST_CASE("feasible: PR box has a certificate") {
  const CyclicSystem sys = zero_marginals({1, 1, 1, -1});
  const auto r = oracle::feasible(sys);
  CHECK_FALSE(r.feasible);
  CHECK_FALSE(r.joint.has_value());
  CHECK(r.residual > 0);
  CHECK(farkas_holds(hand_rows(sys, false), r.certificate, 8));
  CHECK(oracle::verify_certificate(oracle::build_problem(sys, oracle::ConnectionTarget::maximal), r.certificate));
}

TEST_CASE("feasible agrees with the criterion on random systems") {
  ref::Generator g(2);
  int yes = 0, no = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const std::size_t n = static_cast<std::size_t>(g.integer(2, trial < 500 ? 4 : 5));
    const CyclicSystem sys = g.system(n);
    const auto r = oracle::feasible(sys);
    const bool contextual = ref::main_contextual(sys);
    REQUIRE(r.feasible == !contextual);
    const auto rows = hand_rows(sys, false);
    if (r.feasible) {
      ++yes;
      REQUIRE(r.joint.has_value());
      CHECK(joint_satisfies(rows, *r.joint));
    } else {
      ++no;
      CHECK(farkas_holds(rows, r.certificate, 2 * n));
    }
  }
  CHECK(yes > 50);
  CHECK(no > 50);
}

TEST_CASE("feasible: boundary systems") {
  ref::Generator g(3);
  int tested = 0;
  while (tested < 60) {
    const auto sys = g.boundary_system(static_cast<std::size_t>(g.integer(2, 4)));
    if (!sys) continue;
    ++tested;
    REQUIRE(ref::main_lhs(*sys) == Rational(2 * static_cast<long>(sys->rank()) - 2));
    CHECK(oracle::feasible(*sys).feasible);
  }
}

TEST_CASE("feasible_traditional examples") {
  const CyclicSystem k = zero_marginals(std::vector<Rational>(5, q("-0.6")));
  auto r = oracle::feasible_traditional(k);
  CHECK(r.feasible);
  CHECK(joint_satisfies(hand_rows(k, true), *r.joint));

  const CyclicSystem pr = zero_marginals({1, 1, 1, -1});
  r = oracle::feasible_traditional(pr);
  CHECK_FALSE(r.feasible);
  CHECK(farkas_holds(hand_rows(pr, true), r.certificate, 8));

  std::vector<ContextMoments> c = {{q("0.2"), 0, 0}, {0, 0, 0}, {0, 0, 0}};
  const CyclicSystem inconsistent(c);
  try {
    oracle::feasible_traditional(inconsistent);
    FAIL("expected NotConsistentlyConnected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotConsistentlyConnected);
  }
  CHECK_FALSE(oracle::feasible_traditional(inconsistent, true).feasible);
}

TEST_CASE("feasible_traditional agrees with feasible on consistent systems") {
  ref::Generator g(4);
  int tested = 0;
  while (tested < 100) {
    const CyclicSystem sys = g.system(static_cast<std::size_t>(g.integer(2, 4)), 8, 1.0);
    REQUIRE(sys.consistently_connected());
    ++tested;
    CHECK(oracle::feasible_traditional(sys).feasible == oracle::feasible(sys).feasible);
  }
}

TEST_CASE("rank cap") {
  const CyclicSystem big = zero_marginals(std::vector<Rational>(7, Rational(0)));
  try {
    oracle::feasible(big);
    FAIL("expected RankTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankTooLarge);
  }
  oracle::Options small;
  small.max_rank = 3;
  CHECK_THROWS_AS(oracle::feasible(zero_marginals({0, 0, 0, 0}), small), Error);
}

TEST_CASE("verify_certificate and satisfies reject bad evidence") {
  const CyclicSystem pr = zero_marginals({1, 1, 1, -1});
  const auto p = oracle::build_problem(pr, oracle::ConnectionTarget::maximal);
  auto r = oracle::feasible(pr);
  auto y = r.certificate;
  for (auto& v : y) v = -v;
  CHECK_FALSE(oracle::verify_certificate(p, y));
  CHECK_FALSE(oracle::verify_certificate(p, {}));

  const CyclicSystem tri = zero_marginals({1, 1, 1});
  const auto pt = oracle::build_problem(tri, oracle::ConnectionTarget::maximal);
  auto j = *oracle::feasible(tri).joint;
  CHECK(oracle::satisfies(pt, j));
  j.set(0, j.probability(0) + Rational(1, 100));
  CHECK_FALSE(oracle::satisfies(pt, j));
}
