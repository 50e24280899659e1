#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cayleystab/abelian_group.hpp"
#include "cayleystab/bitset.hpp"
#include "cayleystab/error.hpp"
#include "cayleystab/permutation.hpp"

namespace cayleystab {

/// Undirected graph on vertices 0..n-1; a loop at v is bit v of row v.
class LabeledGraph {
 public:
  LabeledGraph() = default;
  explicit LabeledGraph(int n) : rows_(static_cast<std::size_t>(n), ElementSet(static_cast<std::size_t>(n))) {}

  /// Rows must be symmetric.
  explicit LabeledGraph(std::vector<ElementSet> rows) : rows_(std::move(rows)) {
    for (std::size_t u = 0; u < rows_.size(); ++u) {
      if (rows_[u].size() != rows_.size()) throw DomainError("graph: adjacency row has wrong length");
      for (auto v = rows_[u].find_first(); v != ElementSet::npos; v = rows_[u].find_next(v))
        if (!rows_[v].test(u)) throw DomainError("graph: adjacency is not symmetric");
    }
  }

  int n() const { return static_cast<int>(rows_.size()); }
  const ElementSet& row(int v) const { return rows_[static_cast<std::size_t>(v)]; }
  const std::vector<ElementSet>& rows() const { return rows_; }
  bool adjacent(int u, int v) const { return rows_[static_cast<std::size_t>(u)].test(static_cast<std::size_t>(v)); }
  bool has_loop(int v) const { return adjacent(v, v); }

  void add_edge(int u, int v) {
    rows_[static_cast<std::size_t>(u)].set(static_cast<std::size_t>(v));
    rows_[static_cast<std::size_t>(v)].set(static_cast<std::size_t>(u));
  }

  bool has_loops() const {
    for (int v = 0; v < n(); ++v)
      if (has_loop(v)) return true;
    return false;
  }

  /// Number of neighbours, a loop counting once.
  int degree(int v) const { return static_cast<int>(row(v).count()); }

  /// Γ^π: vertex v becomes π(v).
  LabeledGraph relabeled(const Permutation& pi) const {
    if (pi.degree() != n()) throw DomainError("relabel: degree mismatch");
    LabeledGraph out(n());
    for (int u = 0; u < n(); ++u)
      for (auto v = row(u).find_first(); v != ElementSet::npos; v = row(u).find_next(v))
        out.rows_[static_cast<std::size_t>(pi[u])].set(static_cast<std::size_t>(pi[static_cast<int>(v)]));
    return out;
  }

  /// True iff π maps edges to edges (and hence non-edges to non-edges).
  bool is_automorphism(const Permutation& pi) const {
    if (pi.degree() != n()) return false;
    for (int u = 0; u < n(); ++u) {
      const ElementSet& ru = row(u);
      const ElementSet& rv = row(pi[u]);
      if (ru.count() != rv.count()) return false;
      for (auto w = ru.find_first(); w != ElementSet::npos; w = ru.find_next(w))
        if (!rv.test(static_cast<std::size_t>(pi[static_cast<int>(w)]))) return false;
    }
    return true;
  }

  friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;

 private:
  std::vector<ElementSet> rows_;
};

/// Cay(G, S): i ~ j iff element(j) - element(i) ∈ S.
inline LabeledGraph cayley_graph(const AbelianGroup& g, const ElementSet& s) {
  if (s.size() != static_cast<std::size_t>(g.order())) throw DomainError("cayley_graph: set size does not match group order");
  if (!g.is_inverse_closed(s)) throw PreconditionError("cayley_graph: connection set is not inverse-closed");
  std::vector<ElementSet> rows;
  rows.reserve(static_cast<std::size_t>(g.order()));
  for (int i = 0; i < g.order(); ++i) rows.push_back(g.translate(s, i));
  return LabeledGraph(std::move(rows));
}

/// D(Γ) = Γ × K₂ with v⁺ = v and v⁻ = n + v.
inline LabeledGraph double_cover(const LabeledGraph& gamma) {
  const int n = gamma.n();
  LabeledGraph out(2 * n);
  for (int u = 0; u < n; ++u)
    for (auto v = gamma.row(u).find_first(); v != ElementSet::npos; v = gamma.row(u).find_next(v))
      out.add_edge(u, n + static_cast<int>(v));
  return out;
}

inline std::vector<int> component_labels(const LabeledGraph& gamma) {
  std::vector<int> label(static_cast<std::size_t>(gamma.n()), -1);
  int next = 0;
  for (int s = 0; s < gamma.n(); ++s) {
    if (label[static_cast<std::size_t>(s)] >= 0) continue;
    std::vector<int> stack{s};
    label[static_cast<std::size_t>(s)] = next;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (auto v = gamma.row(u).find_first(); v != ElementSet::npos; v = gamma.row(u).find_next(v))
        if (label[v] < 0) {
          label[v] = next;
          stack.push_back(static_cast<int>(v));
        }
    }
    ++next;
  }
  return label;
}

/// The graph on zero vertices counts as connected.
inline bool is_connected(const LabeledGraph& gamma) {
  const auto label = component_labels(gamma);
  return std::all_of(label.begin(), label.end(), [](int c) { return c == 0; });
}

inline bool is_bipartite(const LabeledGraph& gamma) {
  std::vector<int> colour(static_cast<std::size_t>(gamma.n()), -1);
  for (int s = 0; s < gamma.n(); ++s) {
    if (colour[static_cast<std::size_t>(s)] >= 0) continue;
    colour[static_cast<std::size_t>(s)] = 0;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (auto v = gamma.row(u).find_first(); v != ElementSet::npos; v = gamma.row(u).find_next(v)) {
        if (colour[v] < 0) {
          colour[v] = 1 - colour[static_cast<std::size_t>(u)];
          stack.push_back(static_cast<int>(v));
        } else if (colour[v] == colour[static_cast<std::size_t>(u)]) {
          return false;  // covers loops too
        }
      }
    }
  }
  return true;
}

/// Classes of vertices with identical adjacency rows, each ascending, ordered
/// by least member.
inline std::vector<std::vector<int>> twin_classes(const LabeledGraph& gamma) {
  std::map<std::vector<int>, std::size_t> by_row;
  std::vector<std::vector<int>> out;
  for (int v = 0; v < gamma.n(); ++v) {
    auto [it, inserted] = by_row.try_emplace(members_of(gamma.row(v)), out.size());
    if (inserted) out.emplace_back();
    out[it->second].push_back(v);
  }
  return out;
}

inline bool is_twin_free(const LabeledGraph& gamma) {
  return twin_classes(gamma).size() == static_cast<std::size_t>(gamma.n());
}

// ---------------------------------------------------------------------------
// Export

/// One line per vertex: "v: u1 u2 ...".
inline std::string to_adjacency_text(const LabeledGraph& gamma) {
  std::ostringstream os;
  for (int v = 0; v < gamma.n(); ++v) {
    os << v << ':';
    for (int u : members_of(gamma.row(v))) os << ' ' << u;
    os << '\n';
  }
  return os.str();
}

/// graph6 encoding; loops are not representable and raise DomainError.
inline std::string to_graph6(const LabeledGraph& gamma) {
  if (gamma.has_loops()) throw DomainError("graph6: graph has loops");
  const long long n = gamma.n();
  std::string out;
  if (n <= 62) {
    out.push_back(static_cast<char>(63 + n));
  } else if (n <= 258047) {
    out.push_back(126);
    for (int shift = 12; shift >= 0; shift -= 6) out.push_back(static_cast<char>(63 + ((n >> shift) & 63)));
  } else {
    throw DomainError("graph6: too many vertices");
  }
  int acc = 0, bits = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      acc = (acc << 1) | (gamma.adjacent(i, j) ? 1 : 0);
      if (++bits == 6) {
        out.push_back(static_cast<char>(63 + acc));
        acc = bits = 0;
      }
    }
  if (bits > 0) out.push_back(static_cast<char>(63 + (acc << (6 - bits))));
  return out;
}

inline LabeledGraph from_graph6(const std::string& s) {
  if (s.empty()) throw DomainError("graph6: empty string");
  std::size_t pos = 0;
  long long n;
  if (s[0] != 126) {
    n = s[0] - 63;
    pos = 1;
  } else {
    if (s.size() < 4) throw DomainError("graph6: truncated header");
    n = ((s[1] - 63) << 12) | ((s[2] - 63) << 6) | (s[3] - 63);
    pos = 4;
  }
  LabeledGraph g(static_cast<int>(n));
  int bits = 0;
  int acc = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      if (bits == 0) {
        if (pos >= s.size()) throw DomainError("graph6: truncated body");
        acc = s[pos++] - 63;
        bits = 6;
      }
      --bits;
      if ((acc >> bits) & 1) g.add_edge(i, j);
    }
  return g;
}

}  // namespace cayleystab
