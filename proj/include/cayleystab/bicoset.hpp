#pragma once

// Bi-coset graphs BiCos(X, H, K; D): vertices are the right cosets Hx and Ky,
// with Hx ~ Ky iff y x⁻¹ ∈ D.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cayleystab/abelian_group.hpp"
#include "cayleystab/actions.hpp"
#include "cayleystab/error.hpp"
#include "cayleystab/graph.hpp"
#include "cayleystab/perm_group.hpp"

namespace cayleystab {

/// X is given by its full element list; H, K and D are subsets of it.
struct BiCosetSpec {
  std::vector<Permutation> x;
  std::vector<Permutation> h;
  std::vector<Permutation> k;
  std::vector<Permutation> d;
};

namespace detail {

using ElementIndex = std::unordered_map<Permutation, std::size_t, PermutationHash>;

inline ElementIndex index_elements(const std::vector<Permutation>& xs) {
  ElementIndex idx;
  for (std::size_t i = 0; i < xs.size(); ++i) idx.emplace(xs[i], i);
  return idx;
}

/// coset_of[i] = index of the right coset S·x_i, cosets numbered by their
/// least member in permutation order.
inline std::vector<int> right_cosets(const std::vector<Permutation>& xs, const ElementIndex& idx,
                                     const std::vector<Permutation>& sub, int& count) {
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<int> coset_of(xs.size(), -1);
  count = 0;
  for (std::size_t i : order) {
    if (coset_of[i] >= 0) continue;
    for (const auto& s : sub) {
      auto it = idx.find(s * xs[i]);
      if (it == idx.end()) throw PreconditionError("bicoset: subgroup is not contained in X");
      coset_of[it->second] = count;
    }
    ++count;
  }
  return coset_of;
}

/// A generating set of the subgroup `sub` of X, at most log2 |sub| elements.
inline std::vector<Permutation> generators_of(const std::vector<Permutation>& xs, const ElementIndex& idx,
                                              const std::vector<Permutation>& sub) {
  std::vector<char> in(xs.size(), 0);
  std::vector<std::size_t> members;
  std::vector<Permutation> gens;
  for (const auto& e : sub) {
    auto it = idx.find(e);
    if (it == idx.end()) throw PreconditionError("bicoset: subgroup is not contained in X");
    if (in[it->second]) continue;
    gens.push_back(e);
    std::fill(in.begin(), in.end(), 0);
    auto id = idx.find(Permutation::identity(e.degree()));
    if (id == idx.end()) throw PreconditionError("bicoset: X has no identity");
    members.assign(1, id->second);
    in[members[0]] = 1;
    for (std::size_t i = 0; i < members.size(); ++i)
      for (const auto& gen : gens) {
        const std::size_t j = idx.at(xs[members[i]] * gen);
        if (!in[j]) {
          in[j] = 1;
          members.push_back(j);
        }
      }
  }
  return gens;
}

}  // namespace detail

/// True iff K·D·H = D.
inline bool is_double_coset_union(const BiCosetSpec& spec) {
  const auto idx = detail::index_elements(spec.x);
  std::vector<char> in_d(spec.x.size(), 0);
  for (const auto& d : spec.d) {
    auto it = idx.find(d);
    if (it == idx.end()) return false;
    in_d[it->second] = 1;
  }
  const auto kg = detail::generators_of(spec.x, idx, spec.k);
  const auto hg = detail::generators_of(spec.x, idx, spec.h);
  for (const auto& d : spec.d) {
    for (const auto& k : kg)
      if (!in_d[idx.at(k * d)]) return false;
    for (const auto& h : hg)
      if (!in_d[idx.at(d * h)]) return false;
  }
  return true;
}

/// H-cosets (ordered by least member) come first, then K-cosets.
inline LabeledGraph bicoset_graph(const BiCosetSpec& spec) {
  if (!is_double_coset_union(spec)) throw PreconditionError("bicoset_graph: D is not a union of (K, H) double cosets");
  const auto idx = detail::index_elements(spec.x);
  int nh = 0, nk = 0;
  const auto hc = detail::right_cosets(spec.x, idx, spec.h, nh);
  const auto kc = detail::right_cosets(spec.x, idx, spec.k, nk);
  LabeledGraph g(nh + nk);
  // Hx ~ Ky iff yx⁻¹ ∈ D iff y ∈ D·x, so scan y = d·x.
  // D·H = D, so one representative per H-coset suffices.
  std::vector<char> seen(static_cast<std::size_t>(nh), 0);
  for (std::size_t xi = 0; xi < spec.x.size(); ++xi) {
    if (seen[static_cast<std::size_t>(hc[xi])]) continue;
    seen[static_cast<std::size_t>(hc[xi])] = 1;
    for (const auto& d : spec.d) {
      const std::size_t yi = idx.at(d * spec.x[xi]);
      g.add_edge(hc[xi], nh + kc[yi]);
    }
  }
  return g;
}

struct BiCosetCheck {
  bool double_coset_union = false;     // Y = K·Y·H
  bool isomorphism = false;            // φ preserves adjacency and non-adjacency
  std::optional<bool> inversion_symmetry;  // K R(g) H ⊆ Y ⟺ K R(-g) H ⊆ Y; empty when R(G) ⊄ X

  bool ok() const { return double_coset_union && isomorphism && inversion_symmetry.value_or(true); }
};

/// Checks the bi-coset model of D(Cay(G, S)) for X ≤ Aut(D) with orbits
/// exactly G⁺ and G⁻.
inline BiCosetCheck check_bicoset_isomorphism(const AbelianGroup& g, const ElementSet& s, const PermutationGroup& x,
                                              std::size_t cap = kDefaultElementCap) {
  const LabeledGraph cover = double_cover(cayley_graph(g, s));
  const int r = g.order();
  if (x.degree() != 2 * r) throw PreconditionError("bicoset check: X must act on the 2r cover vertices");
  for (const auto& p : x.generators())
    if (!cover.is_automorphism(p)) throw PreconditionError("bicoset check: X is not a group of cover automorphisms");
  std::vector<int> plus(static_cast<std::size_t>(r)), minus(static_cast<std::size_t>(r));
  for (int v = 0; v < r; ++v) {
    plus[static_cast<std::size_t>(v)] = v;
    minus[static_cast<std::size_t>(v)] = r + v;
  }
  if (x.orbit(0) != plus || x.orbit(r) != minus) throw PreconditionError("bicoset check: X must have orbits exactly G+ and G-");

  BiCosetSpec spec;
  spec.x = x.enumerate_elements(cap);
  for (const auto& e : spec.x) {
    if (e[0] == 0) spec.h.push_back(e);
    if (e[r] == r) spec.k.push_back(e);
    if (cover.adjacent(0, e[r])) spec.d.push_back(e);
  }
  BiCosetCheck out;
  out.double_coset_union = is_double_coset_union(spec);
  if (!out.double_coset_union) return out;

  const LabeledGraph model = bicoset_graph(spec);
  const auto idx = detail::index_elements(spec.x);
  int nh = 0, nk = 0;
  const auto hc = detail::right_cosets(spec.x, idx, spec.h, nh);
  const auto kc = detail::right_cosets(spec.x, idx, spec.k, nk);
  // φ((0⁺)^x) = Hx, φ((0⁻)^x) = Kx; must be well defined and bijective.
  std::vector<int> phi(static_cast<std::size_t>(2 * r), -1);
  bool well_defined = nh == r && nk == r;
  for (std::size_t i = 0; i < spec.x.size() && well_defined; ++i) {
    const int up = spec.x[i][0], down = spec.x[i][r];
    const int cp = hc[i], cm = nh + kc[i];
    if (phi[static_cast<std::size_t>(up)] >= 0 && phi[static_cast<std::size_t>(up)] != cp) well_defined = false;
    if (phi[static_cast<std::size_t>(down)] >= 0 && phi[static_cast<std::size_t>(down)] != cm) well_defined = false;
    phi[static_cast<std::size_t>(up)] = cp;
    phi[static_cast<std::size_t>(down)] = cm;
  }
  if (well_defined) {
    std::vector<int> sorted = phi;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 2 * r; ++i) well_defined = well_defined && sorted[static_cast<std::size_t>(i)] == i;
  }
  if (well_defined) {
    bool preserved = true;
    for (int u = 0; u < 2 * r && preserved; ++u)
      for (int v = 0; v < 2 * r && preserved; ++v)
        preserved = cover.adjacent(u, v) == model.adjacent(phi[static_cast<std::size_t>(u)], phi[static_cast<std::size_t>(v)]);
    out.isomorphism = preserved;
  }

  bool contains_r = true;
  for (int i = 0; i < g.rank(); ++i) contains_r = contains_r && x.contains(right_translation(g, g.generator(i), 2));
  if (contains_r) {
    std::vector<char> in_y(spec.x.size(), 0);
    for (const auto& d : spec.d) in_y[idx.at(d)] = 1;
    // Y is a union of (K, H) double cosets, so K R(g) H ⊆ Y iff R(g) ∈ Y.
    bool sym = true;
    for (int t = 0; t < r && sym; ++t)
      sym = in_y[idx.at(right_translation(g, t, 2))] == in_y[idx.at(right_translation(g, g.neg(t), 2))];
    out.inversion_symmetry = sym;
  }
  return out;
}

inline bool verify_bicoset_isomorphism(const AbelianGroup& g, const ElementSet& s, const PermutationGroup& x,
                                       std::size_t cap = kDefaultElementCap) {
  return check_bicoset_isomorphism(g, s, x, cap).ok();
}

}  // namespace cayleystab
