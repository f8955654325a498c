#include "cyccon/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

namespace cyccon {

std::vector<LayoutIssue> validate_layout(const SystemLayout& layout) {
  std::vector<LayoutIssue> issues;
  std::map<std::string, int> degree;
  for (const auto& p : layout.properties) {
    if (!degree.emplace(p, 0).second) {
      issues.push_back({ErrorCode::DuplicateProperty, p, "property '" + p + "' listed more than once"});
    }
  }
  for (std::size_t k = 0; k < layout.contexts.size(); ++k) {
    const auto& members = layout.contexts[k];
    const std::string subject = "context #" + std::to_string(k + 1);
    const std::set<std::string> distinct(members.begin(), members.end());
    if (members.size() != 2 || distinct.size() != 2) {
      issues.push_back({ErrorCode::ContextArity, subject,
                        subject + " has " + std::to_string(distinct.size()) +
                            " distinct members, expected 2"});
    }
    for (const auto& m : distinct) {
      auto it = degree.find(m);
      if (it == degree.end()) {
        issues.push_back({ErrorCode::UnknownProperty, m,
                          subject + " references unknown property '" + m + "'"});
      } else {
        ++it->second;
      }
    }
  }
  // Report degrees in property-list order.
  std::set<std::string> reported;
  for (const auto& p : layout.properties) {
    const int d = degree.at(p);
    if (d != 2 && reported.insert(p).second) {
      issues.push_back({ErrorCode::PropertyDegree, p,
                        "property '" + p + "' belongs to " + std::to_string(d) +
                            " contexts, expected 2"});
    }
  }
  return issues;
}

std::vector<Cycle> decompose_cycles(const SystemLayout& layout) {
  if (const auto issues = validate_layout(layout); !issues.empty()) {
    throw Error(issues.front().code, issues.front().message);
  }
  // property -> [(neighbour, context index)] with exactly two entries
  std::map<std::string, std::vector<std::pair<std::string, std::size_t>>> adjacent;
  for (std::size_t k = 0; k < layout.contexts.size(); ++k) {
    const auto& c = layout.contexts[k];
    adjacent[c[0]].emplace_back(c[1], k);
    adjacent[c[1]].emplace_back(c[0], k);
  }
  for (auto& [p, edges] : adjacent) std::sort(edges.begin(), edges.end());

  std::vector<Cycle> cycles;
  std::set<std::string> visited;
  // std::map iterates in lexicographic order, so each new cycle starts at the
  // least property not yet covered.
  for (const auto& [start, start_edges] : adjacent) {
    if (visited.count(start) != 0) continue;
    Cycle cycle;
    std::string current = start;
    std::size_t via = start_edges[0].second;
    std::string next = start_edges[0].first;
    for (;;) {
      visited.insert(current);
      cycle.properties.push_back(current);
      cycle.contexts.push_back(via);
      if (next == start) break;
      const auto& edges = adjacent.at(next);
      const auto& out = edges[0].second == via ? edges[1] : edges[0];
      current = next;
      via = out.second;
      next = out.first;
    }
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

PairBounds pair_corr_bounds(const Rational& e_a, const Rational& e_b) {
  return {Rational(rabs(e_a + e_b) - 1), Rational(1 - rabs(e_a - e_b))};
}

namespace {

bool in_unit_range(const Rational& x) { return x >= -1 && x <= 1; }

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("q" + std::to_string(i + 1));
  return labels;
}

}  // namespace

CyclicSystem::CyclicSystem(std::vector<std::string> labels, std::vector<ContextMoments> contexts,
                           BuildOptions options)
    : labels_(std::move(labels)), contexts_(std::move(contexts)) {
  const std::size_t n = contexts_.size();
  if (n < 2) {
    throw Error(ErrorCode::RankTooSmall, "cyclic systems need rank n >= 2, got " + std::to_string(n));
  }
  if (labels_.empty()) labels_ = default_labels(n);
  if (labels_.size() != n) {
    throw Error(ErrorCode::InvalidMoment, "label count does not match rank");
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& c = contexts_[i];
    if (!in_unit_range(c.first) || !in_unit_range(c.second) || !in_unit_range(c.corr)) {
      throw Error(ErrorCode::InvalidMoment,
                  "context " + std::to_string(i + 1) + " has a moment outside [-1, 1]", i);
    }
    const PairBounds b = pair_corr_bounds(c.first, c.second);
    if (c.corr >= b.lo && c.corr <= b.hi) continue;
    if (!options.clamp) {
      throw Error(ErrorCode::InfeasibleContext,
                  "context " + std::to_string(i + 1) + ": correlation " + to_exact_string(c.corr) +
                      " outside realizable interval [" + to_exact_string(b.lo) + ", " +
                      to_exact_string(b.hi) + "]",
                  i);
    }
    Rational adjusted = c.corr < b.lo ? b.lo : b.hi;
    adjustments_.push_back({i, c.corr, adjusted});
    c.corr = std::move(adjusted);
  }
}

CyclicSystem::CyclicSystem(std::vector<ContextMoments> contexts, BuildOptions options)
    : CyclicSystem(std::vector<std::string>{}, std::move(contexts), options) {}

Rational CyclicSystem::delta(std::size_t i) const {
  const std::size_t n = rank();
  return contexts_.at(i).first - contexts_.at((i + n - 1) % n).second;
}

std::vector<ConnectionDelta> CyclicSystem::connection_deltas() const {
  std::vector<ConnectionDelta> out;
  out.reserve(rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    Rational d = delta(i);
    Rational m = 1 - rabs(d);
    out.push_back({i, std::move(d), std::move(m)});
  }
  return out;
}

bool CyclicSystem::consistently_connected() const {
  for (std::size_t i = 0; i < rank(); ++i) {
    if (delta(i) != 0) return false;
  }
  return true;
}

std::vector<Rational> CyclicSystem::correlations() const {
  std::vector<Rational> out;
  out.reserve(rank());
  for (const auto& c : contexts_) out.push_back(c.corr);
  return out;
}

CyclicSystem CyclicSystem::rotated(std::size_t k) const {
  const std::size_t n = rank();
  std::vector<std::string> labels(n);
  std::vector<ContextMoments> contexts(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = labels_[(i + k) % n];
    contexts[i] = contexts_[(i + k) % n];
  }
  return CyclicSystem(std::move(labels), std::move(contexts));
}

CyclicSystem CyclicSystem::reflected() const {
  const std::size_t n = rank();
  std::vector<std::string> labels(n);
  std::vector<ContextMoments> contexts(n);
  labels[0] = labels_[0];
  for (std::size_t j = 1; j < n; ++j) labels[j] = labels_[n - j];
  for (std::size_t j = 0; j < n; ++j) {
    const auto& old = contexts_[n - 1 - j];
    contexts[j] = {old.second, old.first, old.corr};
  }
  return CyclicSystem(std::move(labels), std::move(contexts));
}

bool operator==(const CyclicSystem& a, const CyclicSystem& b) {
  if (a.labels_ != b.labels_ || a.rank() != b.rank()) return false;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    const auto& x = a.contexts_[i];
    const auto& y = b.contexts_[i];
    if (x.first != y.first || x.second != y.second || x.corr != y.corr) return false;
  }
  return true;
}

std::vector<std::ptrdiff_t> match_moment_entries(const SystemLayout& layout,
                                                  std::span<const MomentEntry> moments) {
  std::vector<std::ptrdiff_t> entry_for_context(layout.contexts.size(), -1);
  std::vector<bool> used(moments.size(), false);
  for (std::size_t k = 0; k < layout.contexts.size(); ++k) {
    const auto& c = layout.contexts[k];
    if (c.size() != 2) continue;
    for (std::size_t m = 0; m < moments.size(); ++m) {
      const auto& members = moments[m].members;
      if (used[m] || members.size() != 2) continue;
      const bool same = (members[0] == c[0] && members[1] == c[1]) ||
                        (members[0] == c[1] && members[1] == c[0]);
      if (same) {
        used[m] = true;
        entry_for_context[k] = static_cast<std::ptrdiff_t>(m);
        break;
      }
    }
  }
  return entry_for_context;
}

CyclicSystem build_cycle_system(const SystemLayout& layout, const Cycle& cycle,
                                std::span<const MomentEntry> moments, BuildOptions options) {
  const auto entry_for_context = match_moment_entries(layout, moments);
  const std::size_t n = cycle.rank();
  std::vector<ContextMoments> contexts;
  contexts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& here = cycle.properties[i];
    const std::string& there = cycle.properties[(i + 1) % n];
    const std::ptrdiff_t m = entry_for_context.at(cycle.contexts[i]);
    if (m < 0) {
      throw Error(ErrorCode::MissingMoment, "no moments supplied for context {" + here + ", " + there + "}", i);
    }
    const MomentEntry& e = moments[static_cast<std::size_t>(m)];
    if (e.members[0] == here) {
      contexts.push_back({e.e_first, e.e_second, e.corr});
    } else {
      contexts.push_back({e.e_second, e.e_first, e.corr});
    }
  }
  return CyclicSystem(cycle.properties, std::move(contexts), options);
}

CyclicSystem build_cyclic_system(const SystemLayout& layout, std::span<const MomentEntry> moments,
                                 BuildOptions options) {
  const auto cycles = decompose_cycles(layout);
  if (cycles.size() != 1) {
    throw Error(ErrorCode::MultipleCycles,
                "layout decomposes into " + std::to_string(cycles.size()) +
                    " cycles; analyze each cycle separately");
  }
  return build_cycle_system(layout, cycles.front(), moments, options);
}

}  // namespace cyccon
