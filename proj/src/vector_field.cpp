#include "morse/vector_field.hpp"

#include <algorithm>
#include <bit>
#include <ostream>
#include <string>

namespace morse {

namespace {

// Rows holding a 1 in each column.
std::vector<std::vector<std::size_t>> column_supports(const Gf2Matrix& m) {
  std::vector<std::vector<std::size_t>> cols(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    for (std::size_t w = 0; w < row.size(); ++w) {
      auto bits = row[w];
      while (bits != 0) {
        cols[w * Gf2Matrix::word_bits + static_cast<std::size_t>(std::countr_zero(bits))]
            .push_back(i);
        bits &= bits - 1;
      }
    }
  }
  return cols;
}

// Reachability in the relation DAG with a reusable visit stamp.
class Reachability {
 public:
  explicit Reachability(std::size_t n) : stamp_(n, 0) {}

  bool reaches(const std::vector<std::vector<std::size_t>>& out,
               const std::vector<std::size_t>& from, std::size_t target) {
    ++epoch_;
    stack_.clear();
    for (std::size_t s : from) {
      if (stamp_[s] != epoch_) {
        stamp_[s] = epoch_;
        stack_.push_back(s);
      }
    }
    while (!stack_.empty()) {
      const std::size_t v = stack_.back();
      stack_.pop_back();
      if (v == target) return true;
      for (std::size_t w : out[v]) {
        if (stamp_[w] != epoch_) {
          stamp_[w] = epoch_;
          stack_.push_back(w);
        }
      }
    }
    return false;
  }

 private:
  std::vector<std::size_t> stamp_;
  std::vector<std::size_t> stack_;
  std::size_t epoch_ = 0;
};

// Kahn order of the relation graph; shorter than n when there is a cycle.
std::vector<std::size_t> topological_order(const std::vector<std::vector<std::size_t>>& out) {
  const std::size_t n = out.size();
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& targets : out)
    for (std::size_t w : targets) ++indegree[w];
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t v = 0; v < n; ++v)
    if (indegree[v] == 0) order.push_back(v);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (std::size_t w : out[order[head]])
      if (--indegree[w] == 0) order.push_back(w);
  }
  return order;
}

}  // namespace

std::size_t DiscreteVectorField::edge_count() const noexcept {
  std::size_t n = 0;
  for (const auto& targets : relation) n += targets.size();
  return n;
}

DiscreteVectorField rs_algorithm(const Gf2Matrix& m) {
  DiscreteVectorField vf;
  vf.relation.resize(m.rows());
  const auto supports = column_supports(m);
  std::vector<bool> col_used(m.cols(), false);
  Reachability reach(m.rows());
  std::vector<std::size_t> targets;

  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    bool paired = false;
    for (std::size_t w = 0; w < row.size() && !paired; ++w) {
      auto bits = row[w];
      while (bits != 0 && !paired) {
        const std::size_t j =
            w * Gf2Matrix::word_bits + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        if (col_used[j]) continue;
        targets.clear();
        for (std::size_t k : supports[j])
          if (k != i) targets.push_back(k);
        // Row i has no outgoing edges yet, so the new edges i -> k close a
        // loop exactly when i is already reachable from one of the k.
        if (reach.reaches(vf.relation, targets, i)) continue;
        vf.relation[i] = targets;
        vf.pairs.push_back({i, j, 0});
        col_used[j] = true;
        paired = true;
      }
    }
  }

  // Longest outgoing path, filled in reverse topological order.
  const auto order = topological_order(vf.relation);
  std::vector<std::size_t> longest(m.rows(), 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    for (std::size_t w : vf.relation[*it]) longest[*it] = std::max(longest[*it], longest[w] + 1);
  }
  for (auto& p : vf.pairs) p.lambda = longest[p.row];
  return vf;
}

VerificationReport check_admissible(const Gf2Matrix& m, const DiscreteVectorField& vf) {
  VerificationReport report;

  bool in_range = vf.relation.size() == m.rows();
  for (const auto& p : vf.pairs) in_range = in_range && p.row < m.rows() && p.col < m.cols();
  for (const auto& targets : vf.relation)
    for (std::size_t w : targets) in_range = in_range && w < m.rows();
  report.add("indices_in_range", in_range, std::nullopt, in_range ? "" : "index out of range");
  if (!in_range) return report;

  bool entries = true;
  for (const auto& p : vf.pairs) entries = entries && m.get(p.row, p.col);
  report.add("entries_one", entries, std::nullopt, entries ? "" : "paired entry is not 1");

  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  for (const auto& p : vf.pairs) {
    rows.push_back(p.row);
    cols.push_back(p.col);
  }
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());
  const bool rows_distinct = std::adjacent_find(rows.begin(), rows.end()) == rows.end();
  const bool cols_distinct = std::adjacent_find(cols.begin(), cols.end()) == cols.end();
  report.add("sources_distinct", rows_distinct, std::nullopt,
             rows_distinct ? "" : "sources not distinct");
  report.add("targets_distinct", cols_distinct, std::nullopt,
             cols_distinct ? "" : "targets not distinct");

  // Expected relation straight from the definition, by column scans.
  std::vector<std::vector<std::size_t>> expected(m.rows());
  for (const auto& p : vf.pairs) {
    for (std::size_t k = 0; k < m.rows(); ++k)
      if (k != p.row && m.get(k, p.col)) expected[p.row].push_back(k);
  }
  bool exact = true;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto actual = vf.relation[r];
    std::sort(actual.begin(), actual.end());
    std::sort(expected[r].begin(), expected[r].end());
    exact = exact && actual == expected[r];
  }
  report.add("relation_exact", exact, std::nullopt, exact ? "" : "relation differs from definition");

  const auto order = topological_order(vf.relation);
  const bool acyclic = order.size() == m.rows();
  report.add("acyclic", acyclic, std::nullopt, acyclic ? "" : "loop");
  if (!acyclic) return report;

  // Longest paths by memoised depth-first search (independent of the Kahn
  // order used by the construction).
  constexpr std::size_t kUnknown = static_cast<std::size_t>(-1);
  std::vector<std::size_t> longest(m.rows(), kUnknown);
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t s = 0; s < m.rows(); ++s) {
    if (longest[s] != kUnknown) continue;
    stack.emplace_back(s, 0);
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < vf.relation[v].size()) {
        const std::size_t w = vf.relation[v][next++];
        if (longest[w] == kUnknown) stack.emplace_back(w, 0);
        continue;
      }
      std::size_t best = 0;
      for (std::size_t w : vf.relation[v]) best = std::max(best, longest[w] + 1);
      longest[v] = best;
      stack.pop_back();
    }
  }
  bool lambda_ok = true;
  for (const auto& p : vf.pairs) lambda_ok = lambda_ok && p.lambda == longest[p.row];
  report.add("lambda", lambda_ok, std::nullopt, lambda_ok ? "" : "lambda is not the longest path");
  return report;
}

DiscreteVectorField sort_by_lambda(DiscreteVectorField vf) {
  std::stable_sort(vf.pairs.begin(), vf.pairs.end(),
                   [](const VectorPair& a, const VectorPair& b) {
                     if (a.lambda != b.lambda) return a.lambda > b.lambda;
                     return a.row < b.row;
                   });
  return vf;
}

void write_vector_field(std::ostream& out, const DiscreteVectorField& vf) {
  for (const auto& p : vf.pairs) out << p.row << ' ' << p.col << ' ' << p.lambda << '\n';
  for (const auto& p : vf.pairs) {
    auto targets = vf.relation[p.row];
    std::sort(targets.begin(), targets.end());
    for (std::size_t t : targets) out << p.row << " -> " << t << '\n';
  }
}

}  // namespace morse
