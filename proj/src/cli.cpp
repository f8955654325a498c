#include "cyccon/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>

#include "cyccon/coupling.hpp"
#include "cyccon/criterion.hpp"
#include "cyccon/error.hpp"
#include "cyccon/io.hpp"
#include "cyccon/oracle.hpp"
#include "cyccon/stats.hpp"

namespace cyccon::cli {

using io::Json;

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return hex.str();
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Json parse_json_text(const std::string& text) {
  std::istringstream in(text);
  return io::read_json(in);
}

struct Session {
  io::NumberFormat fmt;
  std::uint64_t seed = 0;
  std::ostream& out;
  std::ostream& err;
  std::string command;
  std::string inputs;  // concatenated input bytes, digested into the report
  std::vector<std::string> warnings;

  std::string add_input(const std::string& path) {
    std::string text = read_file(path);
    inputs += text;
    return text;
  }

  Json report() const {
    Json r;
    r["command"] = command;
    r["tool_version"] = std::string(kToolVersion);
    r["input_digest"] = "sha256:" + sha256_hex(inputs);
    r["verdicts"] = Json::array();
    r["coupling"] = nullptr;
    r["warnings"] = Json::array();
    return r;
  }

  void emit(Json& r) const {
    r["warnings"] = warnings;
    out << r.dump(2) << '\n';
  }

  void note_adjustments(const CyclicSystem& sys) {
    for (const auto& a : sys.adjustments()) {
      warnings.push_back("context " + std::to_string(a.context + 1) + ": correlation " +
                         to_exact_string(a.original) + " clamped to " + to_exact_string(a.adjusted));
    }
  }
};

std::string describe_layout_issues(const std::vector<LayoutIssue>& issues) {
  std::string text;
  for (const auto& i : issues) text += "\n  " + std::string(to_string(i.code)) + " " + i.subject + ": " + i.message;
  return text;
}

std::vector<Cycle> checked_cycles(const SystemLayout& layout) {
  if (const auto issues = validate_layout(layout); !issues.empty()) {
    throw Error(issues.front().code, "invalid layout:" + describe_layout_issues(issues));
  }
  return decompose_cycles(layout);
}

CyclicSystem single_cycle_system(const io::SystemDocument& doc, BuildOptions options) {
  const auto cycles = checked_cycles(doc.layout);
  if (cycles.size() != 1) {
    throw Error(ErrorCode::MultipleCycles,
                "layout decomposes into " + std::to_string(cycles.size()) + " cycles; this command needs one");
  }
  return build_cycle_system(doc.layout, cycles.front(), doc.moments, options);
}

std::string decision_word(const Verdict& v) {
  if (v.contextual) return "contextual";
  return v.inconclusive ? "inconclusive" : "noncontextual";
}

std::string decision_line(const Verdict& v, const io::NumberFormat& fmt) {
  return decision_word(v) + ": " + std::string(to_string(v.kind)) + " lhs " + fmt(v.lhs) +
         (v.contextual ? " > " : " <= ") + "bound " + fmt(v.bound);
}

Json witness_json(const SignVector& w) { return w.coefficients(); }

// ---- check ---------------------------------------------------------------

struct CheckArgs {
  std::string system;
  std::string kind = "main";
  std::vector<std::string> probabilities;
  bool clamp = false;
};

Verdict kcbs_from_system(const CyclicSystem& sys) {
  if (sys.rank() != 5) {
    throw Error(ErrorCode::NotZeroOverlap, "the kcbs form needs a rank-5 system, got rank " + std::to_string(sys.rank()));
  }
  std::array<Rational, 5> p;
  for (std::size_t i = 0; i < 5; ++i) p[i] = (1 + sys.context(i).first) / 2;
  const CyclicSystem expected = kcbs_system(p);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& a = sys.context(i);
    const auto& b = expected.context(i);
    if (a.first != b.first || a.second != b.second || a.corr != b.corr) {
      throw Error(ErrorCode::NotZeroOverlap,
                  "context " + std::to_string(i + 1) +
                      " is not of the zero-overlap form corr = 1 - 2(p_i + p_{i+1}), e = 2p - 1",
                  i);
    }
  }
  return check_kcbs(p);
}

int cmd_check(Session& s, const CheckArgs& a) {
  const CriterionKind kind = criterion_kind_from_string(a.kind);
  Json r;
  std::vector<Verdict> verdicts;
  std::vector<std::vector<std::string>> labels;
  if (!a.probabilities.empty()) {
    if (kind != CriterionKind::kcbs) throw Error(ErrorCode::ParseError, "--probabilities needs --kind kcbs");
    if (a.probabilities.size() != 5) throw Error(ErrorCode::ParseError, "--probabilities takes five values");
    std::array<Rational, 5> p;
    for (std::size_t i = 0; i < 5; ++i) {
      p[i] = parse_rational(a.probabilities[i]);
      s.inputs += a.probabilities[i] + (i + 1 < 5 ? "," : "");
    }
    r = s.report();
    verdicts.push_back(check_kcbs(p));
  } else {
    if (a.system.empty()) throw Error(ErrorCode::ParseError, "check needs a system file");
    const auto doc = io::parse_system(parse_json_text(s.add_input(a.system)));
    r = s.report();
    const auto cycles = checked_cycles(doc.layout);
    for (const auto& cycle : cycles) {
      const CyclicSystem sys = build_cycle_system(doc.layout, cycle, doc.moments, {a.clamp});
      s.note_adjustments(sys);
      switch (kind) {
        case CriterionKind::main: verdicts.push_back(check_main(sys)); break;
        case CriterionKind::consistent: verdicts.push_back(check_consistent(sys)); break;
        case CriterionKind::necessary: verdicts.push_back(check_necessary(sys)); break;
        case CriterionKind::kcbs: verdicts.push_back(kcbs_from_system(sys)); break;
      }
      labels.push_back(cycle.properties);
    }
  }
  bool contextual = false;
  for (std::size_t k = 0; k < verdicts.size(); ++k) {
    Json v = io::verdict_to_json(verdicts[k], s.fmt);
    if (labels.size() > 1) v["cycle"] = labels[k];
    r["verdicts"].push_back(std::move(v));
    contextual = contextual || verdicts[k].contextual;
    s.err << (labels.size() > 1 ? "cycle " + std::to_string(k + 1) + ": " : "")
          << decision_line(verdicts[k], s.fmt) << '\n';
  }
  s.emit(r);
  return contextual ? kContextual : kOk;
}

// ---- couple --------------------------------------------------------------

struct CoupleArgs {
  std::string system;
  std::string out_path;
};

int cmd_couple(Session& s, const CoupleArgs& a) {
  const auto doc = io::parse_system(parse_json_text(s.add_input(a.system)));
  Json r = s.report();
  const CyclicSystem sys = single_cycle_system(doc, {});
  const Verdict verdict = check_main(sys);
  r["verdicts"].push_back(io::verdict_to_json(verdict, s.fmt));
  const CycleResult result = maximal_coupling(sys);
  if (const auto* bad = std::get_if<InfeasibleCycle>(&result)) {
    r["infeasibility"] = Json{{"lhs", s.fmt(bad->lhs)}, {"bound", s.fmt(bad->bound)}, {"witness", witness_json(bad->witness)}};
    std::string w;
    for (int c : bad->witness.coefficients()) w += c > 0 ? '+' : '-';
    s.err << "no maximally noncontextual coupling: s1 = " << s.fmt(bad->lhs) << " > " << s.fmt(bad->bound)
          << ", witness (" << w << ")\n";
    s.emit(r);
    return kContextual;
  }
  const auto& joint = std::get<JointDistribution>(result);
  const Json coupling = io::coupling_to_json(joint);
  if (!a.out_path.empty()) {
    std::ofstream file(a.out_path, std::ios::binary);
    if (!file) throw Error(ErrorCode::ParseError, "cannot write '" + a.out_path + "'");
    file << coupling.dump(2) << '\n';
    r["coupling"] = a.out_path;
  } else {
    r["coupling"] = coupling;
  }
  s.err << "coupling constructed over " << joint.variable_count() << " variables, "
        << coupling["atoms"].size() << " atoms with nonzero mass\n";
  s.emit(r);
  return kOk;
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
  std::string coupling;
  std::string system;
};

int cmd_verify(Session& s, const VerifyArgs& a) {
  const Json coupling_doc = parse_json_text(s.add_input(a.coupling));
  const auto doc = io::parse_system(parse_json_text(s.add_input(a.system)));
  Json r = s.report();
  const JointDistribution joint = io::parse_coupling(coupling_doc);
  const CyclicSystem sys = single_cycle_system(doc, {});
  const std::size_t n = sys.rank();

  Json mismatches = Json::array();
  const auto mismatch = [&](const std::string& what, const Rational& expected, const Rational& actual) {
    mismatches.push_back(Json{{"moment", what}, {"expected", to_exact_string(expected)}, {"actual", to_exact_string(actual)}});
  };

  const auto names = coupling_variable_names(n);
  if (joint.variables() != names) {
    Json expected = names;
    Json actual = joint.variables();
    mismatches.push_back(Json{{"moment", "variables"}, {"expected", expected.dump()}, {"actual", actual.dump()}});
  } else {
    for (std::uint64_t atom = 0; atom < joint.atom_count(); ++atom) {
      if (joint.probability(atom) < 0) mismatch("Pr[atom " + std::to_string(atom) + "]", 0, joint.probability(atom));
    }
    if (joint.total() != 1) mismatch("total probability", 1, joint.total());
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t x = 2 * i, y = 2 * i + 1;
      const auto& c = sys.context(i);
      const auto check = [&](const std::string& what, const Rational& expected, const Rational& actual) {
        if (expected != actual) mismatch(what, expected, actual);
      };
      check("<" + names[x] + ">", c.first, joint.expectation(x));
      check("<" + names[y] + ">", c.second, joint.expectation(y));
      check("<" + names[x] + " " + names[y] + ">", c.corr, joint.expectation(x, y));
      // connection of property i: S_i in context i-1 and in context i
      const std::size_t before = (2 * i + 2 * n - 1) % (2 * n);
      check("<" + names[before] + " " + names[x] + ">", 1 - rabs(sys.delta(i)), joint.expectation(before, x));
    }
  }
  const bool ok = mismatches.empty();
  r["ok"] = ok;
  r["mismatches"] = mismatches;
  if (ok) {
    s.err << "ok\n";
  } else {
    for (const auto& m : mismatches) {
      s.err << "mismatch " << m["moment"].get<std::string>() << ": expected " << m["expected"].get<std::string>()
            << ", got " << m["actual"].get<std::string>() << '\n';
    }
  }
  s.emit(r);
  return ok ? kOk : kInputError;
}

// ---- oracle --------------------------------------------------------------

struct OracleArgs {
  std::string system;
  bool traditional = false;
  bool force = false;
  std::size_t max_rank = 6;
};

int cmd_oracle(Session& s, const OracleArgs& a) {
  const auto doc = io::parse_system(parse_json_text(s.add_input(a.system)));
  Json r = s.report();
  const CyclicSystem sys = single_cycle_system(doc, {});
  oracle::Options options;
  options.max_rank = a.max_rank;

  const bool inconsistent = !sys.consistently_connected();
  std::optional<Verdict> criterion;
  if (!a.traditional) {
    criterion = check_main(sys);
  } else if (!inconsistent) {
    criterion = check_consistent(sys);
  } else if (!a.force) {
    // same rejection as the oracle itself
    (void)oracle::feasible_traditional(sys, false, options);
  }

  const oracle::Result result =
      a.traditional ? oracle::feasible_traditional(sys, a.force, options) : oracle::feasible(sys, options);
  const auto problem =
      oracle::build_problem(sys, a.traditional ? oracle::ConnectionTarget::identity : oracle::ConnectionTarget::maximal);

  bool evidence_ok = true;
  Json oracle_json{{"kind", a.traditional ? "oracle-traditional" : "oracle"},
                   {"feasible", result.feasible},
                   {"contextual", !result.feasible},
                   {"pivots", result.pivots}};
  if (result.feasible && result.joint) {
    evidence_ok = oracle::satisfies(problem, *result.joint);
    oracle_json["joint_valid"] = evidence_ok;
  } else if (!result.certificate.empty()) {
    evidence_ok = oracle::verify_certificate(problem, result.certificate);
    Json values = Json::array();
    for (const auto& y : result.certificate) values.push_back(to_fraction_string(y));
    r["certificate"] = Json{{"rows", problem.row_labels}, {"values", values}};
    oracle_json["certificate_valid"] = evidence_ok;
  }

  if (criterion) r["verdicts"].push_back(io::verdict_to_json(*criterion, s.fmt));
  r["verdicts"].push_back(oracle_json);

  std::string agreement = "N/A";
  if (criterion) agreement = (criterion->contextual == !result.feasible && evidence_ok) ? "AGREE" : "DISAGREE";
  r["agreement"] = agreement;

  if (criterion) s.err << "criterion " << decision_line(*criterion, s.fmt) << '\n';
  s.err << "oracle " << (result.feasible ? "noncontextual: coupling found" : "contextual: infeasible")
        << " after " << result.pivots << " pivots" << (evidence_ok ? "" : " (evidence check FAILED)") << '\n';
  s.err << agreement << '\n';
  s.emit(r);
  if (agreement == "DISAGREE" || !evidence_ok) return kDisagreement;
  return result.feasible ? kOk : kContextual;
}

// ---- analyze -------------------------------------------------------------

struct AnalyzeArgs {
  std::string input;
  std::string demo;
  double alpha = 0.05;
  std::optional<std::string> factor;
  std::string mode = "conservative";
  std::string spacing = "0.001";
  std::optional<int> df;
  bool clamp = false;
};

Json t_test_json(std::size_t connection, const stats::TTest& t, const io::NumberFormat& fmt) {
  return Json{{"connection", connection},
              {"t", fmt(t.t)},
              {"df", t.df},
              {"p_value", fmt(t.p_value)},
              {"significant_0.1%", t.significant(0.001)},
              {"significant_1%", t.significant(0.01)}};
}

bool is_json_path(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

int cmd_analyze(Session& s, const AnalyzeArgs& a) {
  if (a.demo.empty() == a.input.empty()) {
    throw Error(ErrorCode::ParseError, "analyze needs exactly one of an input file or --demo lapkiewicz");
  }
  if (!a.demo.empty() && a.demo != "lapkiewicz") {
    throw Error(ErrorCode::ParseError, "unknown demo '" + a.demo + "' (available: lapkiewicz)");
  }

  std::vector<stats::EstimatedMoment> terms;
  Json tests = Json::array();
  std::optional<CyclicSystem> point;
  Json r;

  const auto run_tests = [&](const std::vector<stats::ContextEstimate>& est) {
    const std::size_t n = est.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& here = est[i].first;
      const auto& before = est[(i + n - 1) % n].second;
      try {
        tests.push_back(t_test_json(i + 1, stats::two_sample_t(here, before, std::min(here.df, before.df)), s.fmt));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ZeroVariance) throw;
        s.warnings.push_back("connection " + std::to_string(i + 1) + ": no t-test, both standard errors are zero");
      }
    }
  };
  const auto try_point = [&](auto&& build) {
    try {
      point = build();
      s.note_adjustments(*point);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InfeasibleContext) throw;
      s.warnings.push_back(std::string(e.what()) + "; point verdict skipped (use --clamp)");
    }
  };

  if (!a.demo.empty()) {
    s.inputs = "demo:" + a.demo;
    r = s.report();
    const auto data = stats::lapkiewicz_dataset();
    terms = data.terms();
    for (const auto& m : data.marginals) {
      tests.push_back(t_test_json(m.connection, stats::two_sample_t(m.here, m.before, m.here.df), s.fmt));
    }
    point = stats::lapkiewicz_point_system();
  } else if (is_json_path(a.input)) {
    const auto doc = io::parse_system(parse_json_text(s.add_input(a.input)));
    r = s.report();
    const auto cycles = checked_cycles(doc.layout);
    if (cycles.size() != 1) {
      throw Error(ErrorCode::MultipleCycles, "analyze needs a single-cycle system");
    }
    // estimates are taken before any clamping
    const CyclicSystem raw = build_cycle_system(doc.layout, cycles.front(), doc.moments, {true});
    auto est = io::estimates_from_document(doc, raw, cycles.front(), a.df.value_or(0));
    for (const auto& adj : raw.adjustments()) est[adj.context].corr.point = adj.original;
    if (!a.factor) {
      for (const auto& e : est) {
        if (e.first.df < 1 || e.second.df < 1 || e.corr.df < 1) {
          throw Error(ErrorCode::DomainError, "degrees of freedom missing: add \"df\" to each moment or pass --df");
        }
      }
    }
    terms = stats::box_terms(est);
    run_tests(est);
    try_point([&] { return build_cycle_system(doc.layout, cycles.front(), doc.moments, {a.clamp}); });
  } else {
    std::istringstream csv(s.add_input(a.input));
    r = s.report();
    const auto records = stats::parse_records_csv(csv);
    const auto est = stats::estimate_moments(records);
    terms = stats::box_terms(est);
    run_tests(est);
    try_point([&] { return stats::point_system(est, {a.clamp}); });
  }

  std::optional<Rational> factor;
  if (a.factor) factor = parse_rational(*a.factor);
  const MomentBox box = stats::conservative_box(terms, a.alpha, factor);

  BoxMode mode;
  if (a.mode == "grid") {
    mode = BoxMode::grid(parse_rational(a.spacing));
  } else if (a.mode != "conservative") {
    throw Error(ErrorCode::ParseError, "unknown mode '" + a.mode + "' (conservative|grid)");
  }
  const IntervalVerdict iv = interval_verdict(box, mode);

  Json quantiles = Json::array();
  for (double q : box.quantiles) quantiles.push_back(s.fmt(q));
  Json interval{{"kind", "interval"},
                {"mode", a.mode},
                {"alpha", s.fmt(a.alpha)},
                {"factor", factor ? Json(s.fmt(*factor)) : Json(nullptr)},
                {"quantiles", quantiles},
                {"s1_range", io::interval_to_json(iv.s1_range, s.fmt)},
                {"abs_delta_sum", io::interval_to_json(iv.abs_delta_sum, s.fmt)},
                {"lhs", io::interval_to_json(iv.lhs, s.fmt)},
                {"bound", s.fmt(iv.bound)},
                {"certified", iv.certified}};
  r["interval"] = interval;
  r["t_tests"] = tests;
  if (point) r["verdicts"].push_back(io::verdict_to_json(check_necessary(*point), s.fmt));

  s.err << (iv.certified ? "contextual (certified)" : "not certified") << ": interval [" << s.fmt(iv.lhs.lo) << ", "
        << s.fmt(iv.lhs.hi) << "]" << (iv.certified ? " > " : " vs ") << "bound " << s.fmt(iv.bound) << '\n';
  for (const auto& t : tests) {
    const bool p1 = t["significant_0.1%"].get<bool>();
    const bool p2 = t["significant_1%"].get<bool>();
    s.err << "connection " << t["connection"].get<std::size_t>() << ": t = " << t["t"].get<std::string>() << ", "
          << (p1 ? "significant at 0.1%" : p2 ? "significant at 1%, not at 0.1%" : "not significant at 1%") << '\n';
  }
  s.emit(r);
  return iv.certified ? kContextual : kOk;
}

// ---- decompose -----------------------------------------------------------

int cmd_decompose(Session& s, const std::string& path) {
  const SystemLayout layout = io::parse_layout(parse_json_text(s.add_input(path)));
  Json r = s.report();
  const auto issues = validate_layout(layout);
  if (!issues.empty()) {
    Json list = Json::array();
    for (const auto& i : issues) {
      list.push_back(Json{{"code", std::string(to_string(i.code))}, {"subject", i.subject}, {"message", i.message}});
      s.err << to_string(i.code) << ": " << i.message << '\n';
    }
    r["issues"] = list;
    s.emit(r);
    return kInputError;
  }
  Json cycles = Json::array();
  for (const auto& c : decompose_cycles(layout)) {
    Json contexts = Json::array();
    for (std::size_t i = 0; i < c.rank(); ++i) {
      contexts.push_back(Json::array({c.properties[i], c.properties[(i + 1) % c.rank()]}));
    }
    cycles.push_back(Json{{"rank", c.rank()}, {"properties", c.properties}, {"contexts", contexts}});
    std::string line;
    for (const auto& p : c.properties) line += p + " -> ";
    s.err << "cycle: " << line << c.properties.front() << '\n';
  }
  r["cycles"] = cycles;
  s.emit(r);
  return kOk;
}

// ---- simulate ------------------------------------------------------------

struct SimulateArgs {
  std::string system;
  int replications = 20;
  int trials = 100;
};

int cmd_simulate(Session& s, const SimulateArgs& a) {
  if (a.replications < 1 || a.trials < 1) throw Error(ErrorCode::DomainError, "replications and trials must be >= 1");
  const auto doc = io::parse_system(parse_json_text(s.add_input(a.system)));
  const CyclicSystem sys = single_cycle_system(doc, {});
  std::mt19937_64 rng(s.seed);
  const auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  stats::TrialRecords records;
  records.rank = sys.rank();
  std::vector<std::array<double, 4>> cumulative;
  for (const auto& c : sys.contexts()) {
    const JointDistribution t = pair_table({c.first, c.second, c.corr});
    std::array<double, 4> acc{};
    double run = 0.0;
    for (std::uint64_t k = 0; k < 4; ++k) acc[k] = run += t.probability(k).get_d();
    cumulative.push_back(acc);
  }
  for (int rep = 1; rep <= a.replications; ++rep) {
    for (std::size_t i = 0; i < sys.rank(); ++i) {
      for (int trial = 0; trial < a.trials; ++trial) {
        const double u = uniform() * cumulative[i][3];
        std::size_t atom = 0;
        while (atom < 3 && u >= cumulative[i][atom]) ++atom;
        // atom bit 1 is the first variable, set meaning -1
        records.rows.push_back({rep, i + 1, atom & 2U ? -1 : 1, atom & 1U ? -1 : 1});
      }
    }
  }
  stats::write_records_csv(s.out, records);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decide maximal noncontextuality of cyclic systems of +-1 measurements", "cyccon"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  bool exact = false;
  int precision = 3;
  std::uint64_t seed = 0;
  app.add_flag("--exact", exact, "Print exact rationals instead of rounded decimals");
  app.add_option("--precision", precision, "Decimal digits in reports")->check(CLI::Range(0, 60));
  app.add_option("--seed", seed, "Seed for randomized generation");

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Run a (non)contextuality criterion on a system");
  c->add_option("system", check.system, "System JSON");
  c->add_option("--kind", check.kind, "main|consistent|necessary|kcbs")
      ->check(CLI::IsMember({"main", "consistent", "necessary", "kcbs"}));
  c->add_option("--probabilities", check.probabilities, "Five KCBS probabilities (with --kind kcbs)")->delimiter(',');
  c->add_flag("--clamp", check.clamp, "Project unrealizable correlations onto their feasible range");

  CoupleArgs couple;
  auto* cp = app.add_subcommand("couple", "Construct a maximally noncontextual coupling");
  cp->add_option("system", couple.system, "System JSON")->required();
  cp->add_option("--out", couple.out_path, "Write the coupling JSON here");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check a coupling against a system exactly");
  v->add_option("coupling", verify.coupling, "Coupling JSON")->required();
  v->add_option("system", verify.system, "System JSON")->required();

  OracleArgs orc;
  auto* o = app.add_subcommand("oracle", "Exact linear-feasibility check, compared with the criterion");
  o->add_option("system", orc.system, "System JSON")->required();
  o->add_flag("--traditional", orc.traditional, "Require connection pairs to be equal with probability 1");
  o->add_flag("--force", orc.force, "With --traditional: answer 'no' for inconsistent systems instead of failing");
  o->add_option("--max-rank", orc.max_rank, "Largest rank the oracle accepts")->check(CLI::Range(2, 8));

  AnalyzeArgs an;
  auto* a = app.add_subcommand("analyze", "Conservative interval analysis of estimated moments");
  a->add_option("input", an.input, "Records CSV, or system JSON with \"se\" fields");
  a->add_option("--demo", an.demo, "Built-in dataset (lapkiewicz)");
  a->add_option("--alpha", an.alpha, "Family-wise error level")->check(CLI::Range(0.0, 1.0));
  a->add_option("--factor", an.factor, "Fixed standard-error multiplier instead of a t quantile");
  a->add_option("--mode", an.mode, "conservative|grid")->check(CLI::IsMember({"conservative", "grid"}));
  a->add_option("--spacing", an.spacing, "Grid spacing for --mode grid");
  a->add_option("--df", an.df, "Degrees of freedom for JSON input without \"df\" fields");
  a->add_flag("--clamp", an.clamp, "Clamp unrealizable point estimates");

  std::string layout_path;
  auto* d = app.add_subcommand("decompose", "List the cycles of a layout");
  d->add_option("layout", layout_path, "Layout or system JSON")->required();

  SimulateArgs sim;
  auto* sm = app.add_subcommand("simulate", "Draw records CSV from a system's context distributions");
  sm->add_option("system", sim.system, "System JSON")->required();
  sm->add_option("--replications", sim.replications, "Replications");
  sm->add_option("--trials", sim.trials, "Trials per context and replication");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  Session s{io::NumberFormat{exact, precision}, seed, out, err, "", "", {}};
  try {
    if (*c) {
      s.command = "check";
      return cmd_check(s, check);
    }
    if (*cp) {
      s.command = "couple";
      return cmd_couple(s, couple);
    }
    if (*v) {
      s.command = "verify";
      return cmd_verify(s, verify);
    }
    if (*o) {
      s.command = "oracle";
      return cmd_oracle(s, orc);
    }
    if (*a) {
      s.command = "analyze";
      return cmd_analyze(s, an);
    }
    if (*d) {
      s.command = "decompose";
      return cmd_decompose(s, layout_path);
    }
    if (*sm) {
      s.command = "simulate";
      return cmd_simulate(s, sim);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_precondition(e.code()) ? kPrecondition : kInputError;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kDisagreement;
  }
  return kInputError;
}

}  // namespace cyccon::cli
