// Brute-force coupling feasibility. Deliberately shares nothing with the
// s-function, criterion or coupling code: constraints are written directly
// from the moments and solved by an exact phase-1 simplex.

#include "cyccon/oracle.hpp"

#include <limits>

#include "cyccon/error.hpp"

namespace cyccon::oracle {

int FeasibilityProblem::coefficient(std::size_t row, std::uint64_t atom) const {
  int c = 1;
  for (std::size_t v : row_terms.at(row)) {
    if ((atom >> (variable_count - 1 - v)) & 1U) c = -c;
  }
  return c;
}

FeasibilityProblem build_problem(const CyclicSystem& sys, ConnectionTarget target) {
  const std::size_t n = sys.rank();
  FeasibilityProblem p;
  p.variable_count = 2 * n;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string c = std::to_string(i + 1);
    p.variable_names.push_back("S" + c + "_c" + c);
    p.variable_names.push_back("S" + std::to_string((i + 1) % n + 1) + "_c" + c);
  }
  p.row_labels.push_back("normalization");
  p.row_terms.push_back({});
  p.rhs.push_back(Rational(1));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ctx = sys.context(i);
    const std::string c = std::to_string(i + 1);
    const std::size_t a = 2 * i, b = 2 * i + 1;
    p.row_labels.push_back("<" + p.variable_names[a] + ">");
    p.row_terms.push_back({a});
    p.rhs.push_back(ctx.first);
    p.row_labels.push_back("<" + p.variable_names[b] + ">");
    p.row_terms.push_back({b});
    p.rhs.push_back(ctx.second);
    p.row_labels.push_back("<" + p.variable_names[a] + " " + p.variable_names[b] + ">");
    p.row_terms.push_back({a, b});
    p.rhs.push_back(ctx.corr);
  }
  for (std::size_t i = 0; i < n; ++i) {
    // property q_i is measured as the first member of context i and the
    // second member of context i-1
    const std::size_t prev = (i + n - 1) % n;
    const std::size_t here_var = 2 * i, prev_var = 2 * prev + 1;
    Rational target_corr = 1;
    if (target == ConnectionTarget::maximal) {
      Rational gap = sys.context(i).first - sys.context(prev).second;
      if (gap < 0) gap = -gap;
      target_corr = 1 - gap;
    }
    p.row_labels.push_back("<" + p.variable_names[prev_var] + " " + p.variable_names[here_var] + ">");
    p.row_terms.push_back({prev_var, here_var});
    p.rhs.push_back(target_corr);
  }
  return p;
}

namespace {

mpz_class common_denominator(const std::vector<Rational>& values) {
  mpz_class l = 1;
  for (const auto& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  return l;
}

/// Integers Y_k = y_k * L for a common denominator L; false when some Y_k
/// does not fit in 64 bits.
bool scale_to_int64(const std::vector<Rational>& y, std::vector<std::int64_t>& out) {
  const mpz_class l = common_denominator(y);
  out.resize(y.size());
  mpz_class scaled;
  for (std::size_t k = 0; k < y.size(); ++k) {
    scaled = y[k].get_num() * (l / y[k].get_den());
    if (!scaled.fits_slong_p()) return false;
    out[k] = scaled.get_si();
  }
  return true;
}

class PhaseOne {
 public:
  explicit PhaseOne(const FeasibilityProblem& problem)
      : m_(problem.row_count()), atoms_(problem.atom_count()) {
    sign_.resize(m_);
    b_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      sign_[r] = problem.rhs[r] < 0 ? -1 : 1;
      b_[r] = sign_[r] < 0 ? Rational(-problem.rhs[r]) : problem.rhs[r];
    }
    columns_.resize(atoms_ * m_);
    for (std::uint64_t j = 0; j < atoms_; ++j) {
      for (std::size_t r = 0; r < m_; ++r) {
        columns_[j * m_ + r] = static_cast<std::int8_t>(sign_[r] * problem.coefficient(r, j));
      }
    }
    inverse_.assign(m_ * m_, Rational(0));
    for (std::size_t r = 0; r < m_; ++r) inverse_[r * m_ + r] = 1;
    basis_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) basis_[r] = atoms_ + r;
    x_ = b_;
  }

  Result run() {
    Result result;
    std::vector<Rational> u(m_);
    for (;;) {
      compute_duals();
      const std::uint64_t entering = choose_entering();
      if (entering == kNone) break;
      entering_column(entering, u);
      const std::size_t leaving = choose_leaving(u);
      pivot(leaving, entering, u);
      if (++result.pivots > kPivotLimit) throw InternalError("phase-1 simplex exceeded pivot limit");
    }
    result.residual = 0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] >= atoms_) result.residual += x_[r];
    }
    result.feasible = result.residual == 0;
    if (result.feasible) {
      std::vector<Rational> mass(atoms_, Rational(0));
      for (std::size_t r = 0; r < m_; ++r) {
        if (basis_[r] < atoms_) mass[basis_[r]] = x_[r];
      }
      joint_mass_ = std::move(mass);
    } else {
      // Reduced costs are >= 0 at the optimum: y.A_j <= 0 on atom columns,
      // y.b = residual > 0. Negate and undo the row flips.
      result.certificate.resize(m_);
      for (std::size_t r = 0; r < m_; ++r) result.certificate[r] = -y_[r] * sign_[r];
    }
    return result;
  }

  std::vector<Rational> take_mass() { return std::move(joint_mass_); }

 private:
  static constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
  static constexpr std::size_t kPivotLimit = 1'000'000;

  void compute_duals() {
    y_.assign(m_, Rational(0));
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < atoms_) continue;  // zero cost
      const Rational* row = &inverse_[r * m_];
      for (std::size_t k = 0; k < m_; ++k) {
        if (sgn(row[k]) != 0) y_[k] += row[k];
      }
    }
  }

  // Bland: lowest-index column with negative reduced cost.
  std::uint64_t choose_entering() {
    if (scale_to_int64(y_, y_scaled_)) {
      for (std::uint64_t j = 0; j < atoms_; ++j) {
        const std::int8_t* col = &columns_[j * m_];
        __int128 s = 0;
        for (std::size_t k = 0; k < m_; ++k) s += static_cast<__int128>(col[k]) * y_scaled_[k];
        if (s > 0) return j;  // reduced cost -y.A_j < 0
      }
    } else {
      Rational s;
      for (std::uint64_t j = 0; j < atoms_; ++j) {
        const std::int8_t* col = &columns_[j * m_];
        s = 0;
        for (std::size_t k = 0; k < m_; ++k) {
          if (col[k] > 0) {
            s += y_[k];
          } else {
            s -= y_[k];
          }
        }
        if (s > 0) return j;
      }
    }
    for (std::size_t k = 0; k < m_; ++k) {
      if (y_[k] > 1) return atoms_ + k;  // artificial: reduced cost 1 - y_k
    }
    return kNone;
  }

  void entering_column(std::uint64_t q, std::vector<Rational>& u) const {
    for (std::size_t r = 0; r < m_; ++r) {
      const Rational* row = &inverse_[r * m_];
      if (q >= atoms_) {
        u[r] = row[q - atoms_];
        continue;
      }
      const std::int8_t* col = &columns_[q * m_];
      Rational s = 0;
      for (std::size_t k = 0; k < m_; ++k) {
        if (sgn(row[k]) == 0) continue;
        if (col[k] > 0) {
          s += row[k];
        } else {
          s -= row[k];
        }
      }
      u[r] = std::move(s);
    }
  }

  std::size_t choose_leaving(const std::vector<Rational>& u) const {
    std::size_t best = m_;
    Rational best_ratio, ratio;
    for (std::size_t r = 0; r < m_; ++r) {
      if (sgn(u[r]) <= 0) continue;
      ratio = x_[r] / u[r];
      if (best == m_ || ratio < best_ratio || (ratio == best_ratio && basis_[r] < basis_[best])) {
        best = r;
        best_ratio = ratio;
      }
    }
    if (best == m_) throw InternalError("phase-1 simplex found an unbounded direction");
    return best;
  }

  void pivot(std::size_t p, std::uint64_t q, const std::vector<Rational>& u) {
    Rational* prow = &inverse_[p * m_];
    const Rational scale = u[p];
    for (std::size_t k = 0; k < m_; ++k) {
      if (sgn(prow[k]) != 0) prow[k] /= scale;
    }
    x_[p] /= scale;
    Rational t;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == p || sgn(u[r]) == 0) continue;
      Rational* row = &inverse_[r * m_];
      for (std::size_t k = 0; k < m_; ++k) {
        if (sgn(prow[k]) == 0) continue;
        mpq_mul(t.get_mpq_t(), u[r].get_mpq_t(), prow[k].get_mpq_t());
        mpq_sub(row[k].get_mpq_t(), row[k].get_mpq_t(), t.get_mpq_t());
      }
      mpq_mul(t.get_mpq_t(), u[r].get_mpq_t(), x_[p].get_mpq_t());
      mpq_sub(x_[r].get_mpq_t(), x_[r].get_mpq_t(), t.get_mpq_t());
    }
    basis_[p] = q;
  }

  std::size_t m_;
  std::uint64_t atoms_;
  std::vector<int> sign_;
  std::vector<Rational> b_;
  std::vector<std::int8_t> columns_;  // column-major, atoms_ x m_
  std::vector<Rational> inverse_;     // row-major basis inverse, m_ x m_
  std::vector<std::uint64_t> basis_;
  std::vector<Rational> x_;
  std::vector<Rational> y_;
  std::vector<std::int64_t> y_scaled_;
  std::vector<Rational> joint_mass_;
};

void check_rank(const CyclicSystem& sys, const Options& options) {
  if (sys.rank() > options.max_rank) {
    throw Error(ErrorCode::RankTooLarge, "oracle limited to rank " + std::to_string(options.max_rank) +
                                             ", got " + std::to_string(sys.rank()));
  }
}

}  // namespace

Result solve(const FeasibilityProblem& problem) {
  PhaseOne lp(problem);
  Result result = lp.run();
  if (result.feasible) result.joint = JointDistribution(problem.variable_names, lp.take_mass());
  return result;
}

Result feasible(const CyclicSystem& sys, const Options& options) {
  check_rank(sys, options);
  return solve(build_problem(sys, ConnectionTarget::maximal));
}

Result feasible_traditional(const CyclicSystem& sys, bool force, const Options& options) {
  check_rank(sys, options);
  const std::size_t n = sys.rank();
  for (std::size_t i = 0; i < n; ++i) {
    if (sys.context(i).first != sys.context((i + n - 1) % n).second) {
      if (!force) {
        throw Error(ErrorCode::NotConsistentlyConnected,
                    "connection " + std::to_string(i + 1) +
                        " has unequal marginals, so its members cannot coincide with probability one",
                    i);
      }
      Result trivial;
      trivial.feasible = false;
      return trivial;
    }
  }
  return solve(build_problem(sys, ConnectionTarget::identity));
}

bool verify_certificate(const FeasibilityProblem& problem, const std::vector<Rational>& certificate) {
  if (certificate.size() != problem.row_count()) return false;
  const mpz_class l = common_denominator(certificate);
  std::vector<mpz_class> z(certificate.size());
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = certificate[k].get_num() * (l / certificate[k].get_den());
  Rational yb = 0;
  for (std::size_t k = 0; k < z.size(); ++k) yb += certificate[k] * problem.rhs[k];
  if (yb >= 0) return false;
  mpz_class s;
  for (std::uint64_t j = 0; j < problem.atom_count(); ++j) {
    s = 0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (problem.coefficient(k, j) > 0) {
        s += z[k];
      } else {
        s -= z[k];
      }
    }
    if (s < 0) return false;
  }
  return true;
}

bool satisfies(const FeasibilityProblem& problem, const JointDistribution& joint) {
  if (joint.variable_count() != problem.variable_count || !joint.is_distribution()) return false;
  for (std::size_t r = 0; r < problem.row_count(); ++r) {
    Rational sum = 0;
    for (std::uint64_t a = 0; a < problem.atom_count(); ++a) {
      const Rational& p = joint.probability(a);
      if (sgn(p) == 0) continue;
      if (problem.coefficient(r, a) > 0) {
        sum += p;
      } else {
        sum -= p;
      }
    }
    if (sum != problem.rhs[r]) return false;
  }
  return true;
}

}  // namespace cyccon::oracle
