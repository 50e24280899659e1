#pragma once

// Automorphism groups and canonical labelling by individualization and
// equitable refinement.
//
// Search outline: the root partition is split by (colour, loop flag) and
// refined; each node individualizes a vertex of the first largest non-trivial
// cell. Leaves are discrete partitions; the first leaf found is the reference
// leaf and every later leaf that induces an automorphism relative to it
// records a generator. Children are pruned by the orbits of the recorded
// generators that fix the node's individualized prefix pointwise, and in
// automorphism mode also by a refinement trace that must match the first path
// at the same depth. The generators form a strong generating set relative to
// the first path, so |Aut| is the product of the first-path orbit lengths.

#include <algorithm>
#include <climits>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "cayleystab/error.hpp"
#include "cayleystab/graph.hpp"
#include "cayleystab/perm_group.hpp"
#include "cayleystab/permutation.hpp"

namespace cayleystab {

inline constexpr int kDefaultAutDegreeCap = 2000;

struct ColoredGraph {
  LabeledGraph graph;
  std::vector<int> colors;  // one per vertex; any integers

  explicit ColoredGraph(LabeledGraph g) : graph(std::move(g)), colors(static_cast<std::size_t>(graph.n()), 0) {}
  ColoredGraph(LabeledGraph g, std::vector<int> c) : graph(std::move(g)), colors(std::move(c)) {
    if (colors.size() != static_cast<std::size_t>(graph.n())) throw DomainError("colored graph: one colour per vertex required");
  }
};

struct CanonicalForm {
  std::vector<std::uint8_t> bytes;  // relabelled adjacency rows, row-major, MSB first
  Permutation relabeling;           // vertex v of the input goes to position relabeling[v]

  friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) { return a.bytes == b.bytes; }
};

/// Row-major adjacency bits of Γ^π, padded to whole bytes.
inline std::vector<std::uint8_t> adjacency_bytes(const LabeledGraph& g, const Permutation& pi) {
  const int n = g.n();
  std::vector<int> at(static_cast<std::size_t>(n));  // position -> original vertex
  for (int v = 0; v < n; ++v) at[static_cast<std::size_t>(pi[v])] = v;
  std::vector<std::uint8_t> out((static_cast<std::size_t>(n) * static_cast<std::size_t>(n) + 7) / 8, 0);
  std::size_t bit = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j, ++bit)
      if (g.adjacent(at[static_cast<std::size_t>(i)], at[static_cast<std::size_t>(j)])) out[bit / 8] |= static_cast<std::uint8_t>(0x80u >> (bit % 8));
  return out;
}

namespace detail {

struct Partition {
  std::vector<int> lab;         // vertices in cell order
  std::vector<int> cell_of;     // vertex -> start of its cell
  std::vector<int> cell_end;    // start -> end (exclusive); meaningful at cell starts only
  int cells = 0;

  bool discrete() const { return cells == static_cast<int>(lab.size()); }
};

class SearchEngine {
 public:
  SearchEngine(const LabeledGraph& g, const std::vector<int>& colors, bool canonical)
      : g_(g), n_(g.n()), canonical_(canonical), colors_(colors), count_(static_cast<std::size_t>(n_), 0),
        in_queue_(static_cast<std::size_t>(n_), 0) {}

  void run() {
    Partition root = initial_partition();
    std::vector<int> prefix;
    explore(root, prefix, true, 0);
    std::reverse(first_orbits_.begin(), first_orbits_.end());  // recorded deepest level first
  }

  const std::vector<Permutation>& generators() const { return gens_; }
  const std::vector<int>& first_path() const { return first_path_; }
  const std::vector<std::size_t>& first_path_orbits() const { return first_orbits_; }
  const std::vector<int>& best_leaf() const { return best_lab_; }

  BigInt order() const {
    BigInt o = 1;
    for (std::size_t s : first_orbits_) o *= static_cast<unsigned long long>(s);
    return o;
  }

 private:
  static constexpr int kNoJump = INT_MAX;

  static std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

  Partition initial_partition() {
    Partition p;
    p.lab.resize(static_cast<std::size_t>(n_));
    std::iota(p.lab.begin(), p.lab.end(), 0);
    auto key = [&](int v) { return std::pair{colors_.empty() ? 0 : colors_[static_cast<std::size_t>(v)], g_.has_loop(v) ? 1 : 0}; };
    std::stable_sort(p.lab.begin(), p.lab.end(), [&](int a, int b) { return key(a) < key(b); });
    p.cell_of.assign(static_cast<std::size_t>(n_), 0);
    p.cell_end.assign(static_cast<std::size_t>(n_), 0);
    std::vector<int> queue;
    for (int i = 0; i < n_;) {
      int j = i;
      while (j < n_ && key(p.lab[static_cast<std::size_t>(j)]) == key(p.lab[static_cast<std::size_t>(i)])) ++j;
      for (int k = i; k < j; ++k) p.cell_of[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(k)])] = i;
      p.cell_end[static_cast<std::size_t>(i)] = j;
      ++p.cells;
      queue.push_back(i);
      i = j;
    }
    root_trace_ = refine(p, queue);
    return p;
  }

  /// Refines to the coarsest equitable partition finer than p; returns a
  /// label-invariant trace of the splitting.
  std::uint64_t refine(Partition& p, std::vector<int> queue) {
    std::uint64_t trace = 0x1234;
    std::fill(in_queue_.begin(), in_queue_.end(), 0);
    for (int s : queue) in_queue_[static_cast<std::size_t>(s)] = 1;
    std::size_t head = 0;
    std::vector<std::pair<int, int>> keyed;
    while (head < queue.size() && !p.discrete()) {
      const int w = queue[head++];
      in_queue_[static_cast<std::size_t>(w)] = 0;
      const int w_end = p.cell_end[static_cast<std::size_t>(w)];
      std::fill(count_.begin(), count_.end(), 0);
      for (int i = w; i < w_end; ++i) {
        const ElementSet& row = g_.row(p.lab[static_cast<std::size_t>(i)]);
        for (auto u = row.find_first(); u != ElementSet::npos; u = row.find_next(u)) ++count_[u];
      }
      trace = mix(trace, static_cast<std::uint64_t>(w));
      for (int s = 0; s < n_;) {
        const int e = p.cell_end[static_cast<std::size_t>(s)];
        if (e - s > 1) {
          const int c0 = count_[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(s)])];
          bool uniform = true;
          for (int i = s + 1; i < e && uniform; ++i) uniform = count_[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(i)])] == c0;
          if (!uniform) {
            keyed.clear();
            for (int i = s; i < e; ++i) {
              const int v = p.lab[static_cast<std::size_t>(i)];
              keyed.emplace_back(count_[static_cast<std::size_t>(v)], v);
            }
            std::sort(keyed.begin(), keyed.end());
            int start = s;
            for (int i = s; i < e; ++i) {
              p.lab[static_cast<std::size_t>(i)] = keyed[static_cast<std::size_t>(i - s)].second;
              const bool last = i + 1 == e || keyed[static_cast<std::size_t>(i + 1 - s)].first != keyed[static_cast<std::size_t>(i - s)].first;
              if (!last) continue;
              for (int k = start; k <= i; ++k) p.cell_of[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(k)])] = start;
              p.cell_end[static_cast<std::size_t>(start)] = i + 1;
              trace = mix(trace, (static_cast<std::uint64_t>(start) << 32) ^ static_cast<std::uint64_t>(keyed[static_cast<std::size_t>(i - s)].first));
              if (start != s) ++p.cells;
              if (!in_queue_[static_cast<std::size_t>(start)]) {
                in_queue_[static_cast<std::size_t>(start)] = 1;
                queue.push_back(start);
              }
              start = i + 1;
            }
          }
        }
        s = e;
      }
    }
    return mix(trace, static_cast<std::uint64_t>(p.cells));
  }

  std::uint64_t individualize(Partition& p, int v) {
    const int s = p.cell_of[static_cast<std::size_t>(v)];
    const int e = p.cell_end[static_cast<std::size_t>(s)];
    auto it = std::find(p.lab.begin() + s, p.lab.begin() + e, v);
    std::iter_swap(p.lab.begin() + s, it);
    p.cell_end[static_cast<std::size_t>(s)] = s + 1;
    p.cell_end[static_cast<std::size_t>(s + 1)] = e;
    for (int i = s + 1; i < e; ++i) p.cell_of[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(i)])] = s + 1;
    ++p.cells;
    return refine(p, {s, s + 1});
  }

  /// Start of the first largest non-singleton cell.
  static int target_cell(const Partition& p) {
    int best = -1, best_size = 1;
    for (int s = 0; s < static_cast<int>(p.lab.size()); s = p.cell_end[static_cast<std::size_t>(s)]) {
      const int size = p.cell_end[static_cast<std::size_t>(s)] - s;
      if (size > best_size) {
        best = s;
        best_size = size;
      }
    }
    return best;
  }

  /// Orbit representative map for the generators fixing every prefix point.
  std::vector<int> stabilizer_orbits(const std::vector<int>& prefix) const {
    std::vector<int> parent(static_cast<std::size_t>(n_));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      return x;
    };
    for (const auto& g : gens_) {
      if (!std::all_of(prefix.begin(), prefix.end(), [&](int p) { return g[p] == p; })) continue;
      for (int x = 0; x < n_; ++x) {
        const int a = find(x), b = find(g[x]);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
    for (int x = 0; x < n_; ++x) parent[static_cast<std::size_t>(x)] = find(x);
    return parent;
  }

  Permutation leaf_map(const std::vector<int>& from, const std::vector<int>& to) const {
    std::vector<int> img(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) img[static_cast<std::size_t>(from[static_cast<std::size_t>(i)])] = to[static_cast<std::size_t>(i)];
    return Permutation(std::move(img));
  }

  static Permutation positions(const std::vector<int>& lab) {
    std::vector<int> pos(lab.size());
    for (std::size_t i = 0; i < lab.size(); ++i) pos[static_cast<std::size_t>(lab[i])] = static_cast<int>(i);
    return Permutation(std::move(pos));
  }

  void record(Permutation gamma) {
    if (!g_.is_automorphism(gamma)) throw InternalError("automorphism search produced a non-automorphism");
    if (!colors_.empty())
      for (int v = 0; v < n_; ++v)
        if (colors_[static_cast<std::size_t>(v)] != colors_[static_cast<std::size_t>(gamma[v])])
          throw InternalError("automorphism search produced a colour-violating map");
    if (!gamma.is_identity() && std::find(gens_.begin(), gens_.end(), gamma) == gens_.end()) gens_.push_back(std::move(gamma));
  }

  int process_leaf(const Partition& p, const std::vector<int>& prefix) {
    if (first_lab_.empty()) {
      first_lab_ = p.lab;
      if (canonical_) {
        best_lab_ = p.lab;
        best_bytes_ = adjacency_bytes(g_, positions(p.lab));
      }
      return kNoJump;
    }
    int jump = kNoJump;
    Permutation gamma = leaf_map(first_lab_, p.lab);
    if (g_.is_automorphism(gamma)) {
      record(std::move(gamma));
      int k = 0;
      while (k < static_cast<int>(prefix.size()) && k < static_cast<int>(first_path_.size()) &&
             prefix[static_cast<std::size_t>(k)] == first_path_[static_cast<std::size_t>(k)])
        ++k;
      jump = k;
    }
    if (canonical_) {
      auto bytes = adjacency_bytes(g_, positions(p.lab));
      if (bytes == best_bytes_) {
        record(leaf_map(best_lab_, p.lab));
      } else if (bytes < best_bytes_) {
        best_bytes_ = std::move(bytes);
        best_lab_ = p.lab;
      }
    }
    return jump;
  }

  int explore(const Partition& p, std::vector<int>& prefix, bool on_first_path, int level) {
    if (on_first_path) first_traces_.push_back(level == 0 ? root_trace_ : last_trace_);
    if (p.discrete()) return process_leaf(p, prefix);
    const int s = target_cell(p);
    const int e = p.cell_end[static_cast<std::size_t>(s)];
    std::vector<int> cell(p.lab.begin() + s, p.lab.begin() + e);
    std::sort(cell.begin(), cell.end());

    std::vector<int> explored;
    std::size_t gens_seen = static_cast<std::size_t>(-1);
    std::vector<int> orbit_rep;
    for (std::size_t ci = 0; ci < cell.size(); ++ci) {
      const int v = cell[ci];
      if (gens_seen != gens_.size()) {
        orbit_rep = stabilizer_orbits(prefix);
        gens_seen = gens_.size();
      }
      bool pruned = false;
      for (int u : explored)
        if (orbit_rep[static_cast<std::size_t>(u)] == orbit_rep[static_cast<std::size_t>(v)]) pruned = true;
      if (pruned) continue;
      const bool child_first = on_first_path && explored.empty();
      explored.push_back(v);
      Partition child = p;
      last_trace_ = individualize(child, v);
      if (child_first) first_path_.push_back(v);
      if (!canonical_ && !child_first) {
        const auto depth = static_cast<std::size_t>(level + 1);
        if (depth >= first_traces_.size() || first_traces_[depth] != last_trace_) continue;
      }
      prefix.push_back(v);
      const int jump = explore(child, prefix, child_first, level + 1);
      prefix.pop_back();
      if (jump < level) return jump;
    }
    if (on_first_path) {
      const auto rep = stabilizer_orbits(prefix);
      const int v0 = first_path_[static_cast<std::size_t>(level)];
      std::size_t size = 0;
      for (int x = 0; x < n_; ++x)
        if (rep[static_cast<std::size_t>(x)] == rep[static_cast<std::size_t>(v0)]) ++size;
      first_orbits_.push_back(size);
    }
    return kNoJump;
  }

  const LabeledGraph& g_;
  int n_;
  bool canonical_;
  std::vector<int> colors_;
  std::vector<int> count_;
  std::vector<char> in_queue_;
  std::vector<Permutation> gens_;
  std::vector<int> first_lab_;
  std::vector<int> first_path_;
  std::vector<std::uint64_t> first_traces_;
  std::vector<std::size_t> first_orbits_;
  std::uint64_t root_trace_ = 0;
  std::uint64_t last_trace_ = 0;
  std::vector<int> best_lab_;
  std::vector<std::uint8_t> best_bytes_;
};

inline std::vector<int> block_colors(int n, const std::vector<int>& base_colors, const std::vector<ElementSet>& blocks) {
  std::vector<int> colors(static_cast<std::size_t>(n), 0);
  std::vector<int> block_of(static_cast<std::size_t>(n), static_cast<int>(blocks.size()));
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].size() != static_cast<std::size_t>(n)) throw DomainError("fixed block has wrong universe size");
    for (auto v = blocks[b].find_first(); v != ElementSet::npos; v = blocks[b].find_next(v)) {
      if (block_of[v] != static_cast<int>(blocks.size())) throw DomainError("fixed blocks overlap");
      block_of[v] = static_cast<int>(b);
    }
  }
  // Dense re-numbering of (base colour, block) pairs keeps colours comparable.
  std::vector<std::pair<int, int>> keys;
  for (int v = 0; v < n; ++v)
    keys.emplace_back(base_colors.empty() ? 0 : base_colors[static_cast<std::size_t>(v)], block_of[static_cast<std::size_t>(v)]);
  auto sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int v = 0; v < n; ++v)
    colors[static_cast<std::size_t>(v)] =
        static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), keys[static_cast<std::size_t>(v)]) - sorted.begin());
  return colors;
}

}  // namespace detail

struct AutomorphismResult {
  PermutationGroup group;
  std::vector<int> base;                  // first-path individualized vertices
  std::vector<std::size_t> orbit_lengths; // first-path orbit lengths, same order as base
};

/// Aut(Γ) preserving vertex colours, and each of `fixed_blocks` setwise.
inline AutomorphismResult automorphism_group_detailed(const ColoredGraph& cg, const std::vector<ElementSet>& fixed_blocks = {},
                                                      int degree_cap = kDefaultAutDegreeCap) {
  const int n = cg.graph.n();
  if (n > degree_cap) throw CapExceeded("automorphism_group: vertex count exceeds cap", static_cast<std::size_t>(degree_cap));
  detail::SearchEngine engine(cg.graph, detail::block_colors(n, cg.colors, fixed_blocks), false);
  engine.run();
  AutomorphismResult out{PermutationGroup(n, engine.generators(), engine.order()), engine.first_path(), engine.first_path_orbits()};
  return out;
}

inline PermutationGroup automorphism_group(const LabeledGraph& g, const std::vector<ElementSet>& fixed_blocks = {},
                                           int degree_cap = kDefaultAutDegreeCap) {
  return automorphism_group_detailed(ColoredGraph(g), fixed_blocks, degree_cap).group;
}

inline PermutationGroup automorphism_group(const ColoredGraph& cg, int degree_cap = kDefaultAutDegreeCap) {
  return automorphism_group_detailed(cg, {}, degree_cap).group;
}

/// Lexicographically least leaf encoding; identical for isomorphic graphs.
inline CanonicalForm canonical_form(const LabeledGraph& g, int degree_cap = kDefaultAutDegreeCap) {
  if (g.n() > degree_cap) throw CapExceeded("canonical_form: vertex count exceeds cap", static_cast<std::size_t>(degree_cap));
  detail::SearchEngine engine(g, {}, true);
  engine.run();
  std::vector<int> pos(static_cast<std::size_t>(g.n()));
  const auto& lab = engine.best_leaf();
  for (std::size_t i = 0; i < lab.size(); ++i) pos[static_cast<std::size_t>(lab[i])] = static_cast<int>(i);
  Permutation relabeling(std::move(pos));
  auto bytes = adjacency_bytes(g, relabeling);
  return CanonicalForm{std::move(bytes), std::move(relabeling)};
}

/// {a ∈ A : block^a = block}.
inline PermutationGroup setwise_stabilizer_of_block(const PermutationGroup& a, const ElementSet& block,
                                                    std::size_t cap = kDefaultElementCap) {
  const int n = a.degree();
  if (block.size() != static_cast<std::size_t>(n)) throw DomainError("block stabilizer: block universe mismatch");
  const ElementSet complement = ~block;
  auto image = [&](const Permutation& p) {
    ElementSet out(static_cast<std::size_t>(n));
    for (auto v = block.find_first(); v != ElementSet::npos; v = block.find_next(v)) out.set(static_cast<std::size_t>(p[static_cast<int>(v)]));
    return out;
  };
  std::optional<Permutation> swap;
  bool two_way = true;
  for (const auto& g : a.generators()) {
    const ElementSet img = image(g);
    if (img == block) continue;
    if (img == complement) {
      if (!swap) swap = g;
      continue;
    }
    two_way = false;
    break;
  }
  if (two_way) {
    if (!swap) return a;
    // Schreier generators for the index-2 subgroup with transversal {1, s}.
    const Permutation s_inv = swap->inverse();
    std::vector<Permutation> gens;
    for (const auto& g : a.generators()) {
      const bool g_keeps = image(g) == block;
      gens.push_back(g_keeps ? g : g * s_inv);
      gens.push_back(g_keeps ? *swap * g * s_inv : *swap * g);
    }
    return PermutationGroup(n, std::move(gens), a.order() / 2);
  }
  std::vector<Permutation> keep;
  for (const auto& x : a.enumerate_elements(cap))
    if (image(x) == block) keep.push_back(x);
  return group_from_closed_set(n, keep);
}

}  // namespace cayleystab
