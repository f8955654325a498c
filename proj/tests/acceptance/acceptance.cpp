// Runs the acceptance criteria; one PASS/FAIL line each, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "cyccon/cli.hpp"
#include "cyccon/coupling.hpp"
#include "cyccon/criterion.hpp"
#include "cyccon/io.hpp"
#include "cyccon/oracle.hpp"
#include "cyccon/sfunc.hpp"
#include "cyccon/stats.hpp"
#include "support/reference.hpp"

using namespace cyccon;
using io::Json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("cyccon_acceptance_" + std::to_string(::getpid()) + "_" + name)).string();
}

void write_file(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CyclicSystem zero_marginals(std::vector<Rational> corrs) {
  std::vector<ContextMoments> c;
  for (auto& r : corrs) c.push_back({0, 0, r});
  return CyclicSystem(std::move(c));
}

std::span<const Rational> sp(const std::vector<Rational>& v) { return {v.data(), v.size()}; }

// ---------------------------------------------------------------------------

Outcome published_interval() {
  Outcome o;
  const auto t0 = Clock::now();
  const Invocation r = invoke({"analyze", "--demo", "lapkiewicz", "--factor", "14"});
  const double elapsed = seconds_since(t0);
  const Json j = Json::parse(r.out);
  const Json lhs = j.at("interval").at("lhs");
  o.detail = "interval [" + lhs[0].get<std::string>() + ", " + lhs[1].get<std::string>() + "], " +
             std::to_string(elapsed) + " s";
  o.require(lhs == Json::array({"3.127", "4.062"}), "interval mismatch: " + lhs.dump());
  o.require(j.at("interval").at("certified") == true, "not certified");
  o.require(parse_rational(lhs[0].get<std::string>()) > 3, "lower endpoint not above 3");
  o.require(r.code == cli::kContextual, "exit code " + std::to_string(r.code));
  o.require(elapsed < 1.0, "too slow");
  return o;
}

Outcome point_estimate() {
  Outcome o;
  const Verdict v = check_necessary(stats::lapkiewicz_point_system());
  const std::string lhs = to_decimal_string(v.lhs, 3);
  o.detail = "lhs " + lhs + ", bound " + to_decimal_string(v.bound, 0);
  o.require(lhs == "3.822", "lhs " + lhs);
  o.require(v.bound == 3, "bound");
  o.require(v.contextual, "not contextual");

  // same through the command line
  const std::string f = temp_path("point.json");
  write_file(f, io::system_to_json(stats::lapkiewicz_point_system()).dump());
  const Invocation r = invoke({"check", f, "--kind", "necessary"});
  std::filesystem::remove(f);
  const Json j = Json::parse(r.out);
  o.require(j.at("verdicts")[0].at("lhs") == "3.822", "cli lhs " + j.at("verdicts")[0].at("lhs").dump());
  return o;
}

Outcome consistency_tests() {
  Outcome o;
  using stats::EstimatedMoment;
  const auto t1 = stats::two_sample_t(EstimatedMoment{parse_rational("0.136"), parse_rational("0.006"), 19},
                                      EstimatedMoment{parse_rational("0.172"), parse_rational("0.004"), 19}, 19);
  const auto t4 = stats::two_sample_t(EstimatedMoment{parse_rational("0.122"), parse_rational("0.004"), 19},
                                      EstimatedMoment{parse_rational("0.142"), parse_rational("0.004"), 19}, 19);
  char buf[128];
  std::snprintf(buf, sizeof buf, "t1 = %.3f (p = %.2g), t4 = %.3f (p = %.2g)", t1.t, t1.p_value, t4.t, t4.p_value);
  o.detail = buf;
  o.require(t1.significant(0.001), "connection 1 not significant at 0.1%");
  o.require(t4.significant(0.01), "connection 4 not significant at 1%");
  o.require(!t4.significant(0.001), "connection 4 significant at 0.1%");

  // and in the analyze report
  const Json j = Json::parse(invoke({"analyze", "--demo", "lapkiewicz", "--factor", "14"}).out).at("t_tests");
  o.require(j.size() == 2 && j[0].at("significant_0.1%") == true && j[1].at("significant_1%") == true &&
                j[1].at("significant_0.1%") == false,
            "analyze t_tests: " + j.dump());
  return o;
}

Outcome quantile_bound() {
  Outcome o;
  const double q = stats::t_quantile(1 - 1e-11, 19);
  char buf[64];
  std::snprintf(buf, sizeof buf, "t_quantile(1 - 1e-11, 19) = %.4f", q);
  o.detail = buf;
  o.require(q < 14, "quantile not below 14");
  o.require(std::fabs(ref::t_tail_integrated(q, 19) / 1e-11 - 1) < 1e-6, "tail disagrees with integrated density");
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto t0 = Clock::now();
  long count = 0, contextual = 0, boundary = 0;
  const auto check_one = [&](const CyclicSystem& sys) {
    ++count;
    const Verdict v = check_main(sys);
    const auto coupling = maximal_coupling(sys);
    const auto* joint = std::get_if<JointDistribution>(&coupling);
    const auto orc = oracle::feasible(sys);
    contextual += v.contextual;
    boundary += v.lhs == v.bound;
    const bool agree = (joint != nullptr) == !v.contextual && orc.feasible == !v.contextual;
    if (!agree) {
      o.require(false, "disagreement on " + io::system_to_json(sys).dump());
      return;
    }
    if (joint) {
      const auto problem = oracle::build_problem(sys, oracle::ConnectionTarget::maximal);
      o.require(oracle::satisfies(problem, *joint), "coupling fails constraints: " + io::system_to_json(sys).dump());
      o.require(orc.joint && oracle::satisfies(problem, *orc.joint), "oracle joint invalid");
    }
  };

  const auto triples = ref::grid_triples();
  long grid2 = 0, grid3 = 0;
  for (const auto& a : triples) {
    for (const auto& b : triples) {
      check_one(CyclicSystem(std::vector<ContextMoments>{a, b}));
      ++grid2;
      for (const auto& c : triples) {
        check_one(CyclicSystem(std::vector<ContextMoments>{a, b, c}));
        ++grid3;
      }
    }
  }

  ref::Generator g(20240605);
  long random = 0;
  while (random < 10000) {
    const std::size_t n = random % 2 == 0 ? 4 : 5;
    if (random % 5 == 0) {
      const auto sys = g.boundary_system(n, 8);
      if (!sys) continue;
      check_one(*sys);
    } else {
      check_one(g.system(n, random % 3 == 0 ? 4 : 12));
    }
    ++random;
  }
  const double elapsed = seconds_since(t0);
  if (o.pass) {
    o.detail = std::to_string(grid2) + " + " + std::to_string(grid3) + " grid, " + std::to_string(random) +
               " random systems; " + std::to_string(contextual) + " contextual, " + std::to_string(boundary) +
               " on the boundary; " + std::to_string(static_cast<int>(elapsed)) + " s";
  }
  o.require(grid2 == 2025 && grid3 == 91125, "grid size");
  o.require(boundary > 100, "too few boundary instances");
  o.require(elapsed < 300, "too slow: " + std::to_string(elapsed) + " s");
  return o;
}

Outcome closed_form_identity() {
  Outcome o;
  ref::Generator g(606);
  long n_checked = 0;
  for (long trial = 0; trial < 100000; ++trial) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 10));
    std::vector<Rational> x(n);
    const long den = trial % 4 == 0 ? 2 : 64;
    for (auto& v : x) v = g.unit(den);
    const Rational closed = s1_closed(sp(x));
    if (closed != s1_enum(sp(x)).value) {
      o.require(false, "s1 mismatch at trial " + std::to_string(trial));
      break;
    }
    if (!s_pair_identity(sp(x))) {
      o.require(false, "pair identity fails at trial " + std::to_string(trial));
      break;
    }
    ++n_checked;
  }
  if (o.pass) o.detail = std::to_string(n_checked) + " vectors";
  return o;
}

Outcome coupling_validity() {
  Outcome o;
  const std::string sys_path = temp_path("sys.json");
  const std::string coupling_path = temp_path("coupling.json");
  ref::Generator g(707);
  long emitted = 0;
  for (int trial = 0; trial < 400 && o.pass; ++trial) {
    const std::size_t n = static_cast<std::size_t>(g.integer(2, 6));
    std::optional<CyclicSystem> sys = trial % 4 == 0 ? g.boundary_system(n) : std::optional(g.system(n));
    if (!sys) continue;
    write_file(sys_path, io::system_to_json(*sys).dump());
    const Invocation c = invoke({"couple", sys_path, "--out", coupling_path});
    if (c.code == cli::kContextual) {
      o.require(ref::main_contextual(*sys), "couple refused a noncontextual system");
      continue;
    }
    o.require(c.code == cli::kOk, "couple exit " + std::to_string(c.code));
    ++emitted;
    const Invocation v = invoke({"verify", coupling_path, sys_path});
    o.require(v.code == cli::kOk && Json::parse(v.out).at("ok") == true, "verify failed: " + v.err);

    const JointDistribution joint = io::parse_coupling(Json::parse(read_file(coupling_path)));
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t a = (2 * i + 2 * n - 1) % (2 * n), b = 2 * i;
      // P(a == b) = (1 + <ab>) / 2
      const Rational equal = (1 + ref::sum_expectation(joint, {a, b})) / 2;
      o.require(equal == 1 - ref::abs_r(sys->delta(i)) / 2, "connection " + std::to_string(i + 1) + " not maximal");
    }
  }
  std::filesystem::remove(sys_path);
  std::filesystem::remove(coupling_path);
  if (o.pass) o.detail = std::to_string(emitted) + " couplings verified";
  o.require(emitted > 100, "too few couplings emitted");
  return o;
}

Outcome classical_inequalities() {
  Outcome o;
  ref::Generator g(808);

  // n = 3: four Suppes-Zanotti / Leggett-Garg inequalities
  const auto lg_holds = [](const Rational& a, const Rational& b, const Rational& c) {
    return a + b + c >= -1 && -a - b + c >= -1 && -a + b - c >= -1 && a - b - c >= -1;
  };
  long n3 = 0;
  const auto triples = ref::grid_triples();
  for (const auto& x : triples) {
    for (const auto& y : triples) {
      for (const auto& z : triples) {
        // consistent: connection i links second of context i-1 with first of context i
        if (x.first != z.second || y.first != x.second || z.first != y.second) continue;
        const CyclicSystem sys(std::vector<ContextMoments>{x, y, z});
        ++n3;
        o.require(check_consistent(sys).contextual == !lg_holds(x.corr, y.corr, z.corr), "n=3 mismatch");
      }
    }
  }
  for (int trial = 0; trial < 5000; ++trial) {
    const CyclicSystem sys = g.system(3, 16, 1.0);
    const auto& c = sys.contexts();
    ++n3;
    o.require(check_consistent(sys).contextual == !lg_holds(c[0].corr, c[1].corr, c[2].corr), "n=3 random mismatch");
  }

  // n = 4: eight CHSH inequalities
  const auto chsh_holds = [](const CyclicSystem& sys) {
    for (std::size_t odd = 0; odd < 4; ++odd) {
      Rational s = 0;
      for (std::size_t i = 0; i < 4; ++i) s += (i == odd ? -1 : 1) * sys.context(i).corr;
      if (s > 2 || s < -2) return false;
    }
    return true;
  };
  o.require(check_consistent(zero_marginals({1, 1, 1, -1})).contextual, "PR box");
  const Rational r = rational_from_double(std::sqrt(2.0) / 2);
  const Verdict ts = check_consistent(zero_marginals({r, r, r, Rational(-r)}));
  o.require(ts.contextual && std::fabs(ts.lhs.get_d() - 2 * std::sqrt(2.0)) < 1e-12, "Tsirelson pattern");
  for (int v = 0; v < 16; ++v) {
    std::array<int, 4> a;
    for (int k = 0; k < 4; ++k) a[k] = (v >> k) & 1 ? -1 : 1;
    std::vector<ContextMoments> c;
    for (int k = 0; k < 4; ++k) c.push_back({a[k], a[(k + 1) % 4], a[k] * a[(k + 1) % 4]});
    const CyclicSystem sys(c);
    o.require(!check_consistent(sys).contextual && !check_main(sys).contextual, "classical vertex " + std::to_string(v));
  }
  long n4 = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    const CyclicSystem sys = g.system(4, 16, 1.0);
    ++n4;
    o.require(check_consistent(sys).contextual == !chsh_holds(sys), "n=4 random mismatch");
  }

  // n = 5: K <= 2 on zero-overlap probability vectors
  long n5 = 0, violating = 0, on_bound = 0;
  while (n5 < 10000) {
    const long den = n5 % 2 == 0 ? 10 : 1000;
    std::array<Rational, 5> p;
    for (auto& x : p) x = Rational(g.integer(0, den), den);
    bool overlap_ok = true;
    for (std::size_t i = 0; i < 5; ++i) overlap_ok = overlap_ok && p[i] + p[(i + 1) % 5] <= 1;
    if (!overlap_ok) continue;
    ++n5;
    Rational k = 0;
    for (const auto& x : p) k += x;
    violating += k > 2;
    on_bound += k == 2;
    const bool contextual = check_consistent(kcbs_system(p)).contextual;
    o.require(contextual == (k > 2), "KCBS mismatch");
    o.require(check_kcbs(p).contextual == (k > 2), "check_kcbs mismatch");
  }
  o.require(violating > 0 && on_bound > 0, "KCBS sample lacks violations or boundary points");
  if (o.pass) {
    o.detail = std::to_string(n3) + " triangles, " + std::to_string(n4) + "+16+2 squares, " + std::to_string(n5) +
               " pentagons (" + std::to_string(violating) + " with K > 2, " + std::to_string(on_bound) + " with K = 2)";
  }
  return o;
}

Outcome necessity_direction() {
  Outcome o;
  ref::Generator g(909);
  long hits = 0;
  for (long trial = 0; trial < 100000; ++trial) {
    const CyclicSystem sys = g.system(static_cast<std::size_t>(g.integer(2, 8)), trial % 2 ? 8 : 40, 0.3);
    if (check_necessary(sys).contextual) {
      ++hits;
      if (!check_main(sys).contextual) {
        o.require(false, "counterexample: " + io::system_to_json(sys).dump());
        break;
      }
    }
  }
  if (o.pass) o.detail = "100000 systems, " + std::to_string(hits) + " contextual by the necessary criterion";
  o.require(hits > 0, "no system triggered the necessary criterion");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, published_interval},   {2, point_estimate},         {3, consistency_tests},
      {4, quantile_bound},       {5, oracle_equivalence},     {6, closed_form_identity},
      {7, coupling_validity},    {8, classical_inequalities}, {9, necessity_direction},
  };
  // optional: run a subset, e.g. `acceptance 1 4`
  std::vector<int> only;
  for (int k = 1; k < argc; ++k) only.push_back(std::atoi(argv[k]));

  int failures = 0;
  for (const auto& [id, fn] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    failures += !out.pass;
    std::cout << "criterion " << id << ": " << (out.pass ? "PASS" : "FAIL") << "  " << out.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
