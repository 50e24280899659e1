#pragma once

// Permutation representations of group-core objects on G (one copy) or on
// the vertex set G⁺ ∪ G⁻ of a double cover (two copies, v⁺ = v, v⁻ = r + v).

#include <vector>

#include "cayleystab/abelian_group.hpp"
#include "cayleystab/perm_group.hpp"
#include "cayleystab/permutation.hpp"

namespace cayleystab {

/// Acts identically on each of `copies` consecutive blocks of size r.
inline Permutation lift(const AbelianGroup& g, const std::vector<int>& on_g, int copies) {
  const int r = g.order();
  std::vector<int> img(static_cast<std::size_t>(r * copies));
  for (int c = 0; c < copies; ++c)
    for (int x = 0; x < r; ++x) img[static_cast<std::size_t>(c * r + x)] = c * r + on_g[static_cast<std::size_t>(x)];
  return Permutation(std::move(img));
}

/// R(t): x ↦ x + t.
inline Permutation right_translation(const AbelianGroup& g, int t, int copies = 1) {
  std::vector<int> on_g(static_cast<std::size_t>(g.order()));
  for (int x = 0; x < g.order(); ++x) on_g[static_cast<std::size_t>(x)] = g.add(x, t);
  return lift(g, on_g, copies);
}

/// ι: x ↦ -x.
inline Permutation inversion(const AbelianGroup& g, int copies = 1) {
  std::vector<int> on_g(static_cast<std::size_t>(g.order()));
  for (int x = 0; x < g.order(); ++x) on_g[static_cast<std::size_t>(x)] = g.neg(x);
  return lift(g, on_g, copies);
}

inline Permutation holomorph_permutation(const AbelianGroup& g, const HolomorphElement& a, int copies = 1) {
  return lift(g, a.as_permutation(g), copies);
}

/// R(G), generated by the canonical generators.
inline PermutationGroup regular_group(const AbelianGroup& g, int copies = 1) {
  std::vector<Permutation> gens;
  for (int i = 0; i < g.rank(); ++i) gens.push_back(right_translation(g, g.generator(i), copies));
  return PermutationGroup(g.order() * copies, std::move(gens), BigInt(g.order()));
}

/// R(G) ⋊ ⟨ι⟩; of order r when G has exponent ≤ 2, else 2r.
inline PermutationGroup regular_with_inversion(const AbelianGroup& g, int copies = 1) {
  std::vector<Permutation> gens;
  for (int i = 0; i < g.rank(); ++i) gens.push_back(right_translation(g, g.generator(i), copies));
  gens.push_back(inversion(g, copies));
  const int ord = g.exponent() <= 2 ? g.order() : 2 * g.order();
  return PermutationGroup(g.order() * copies, std::move(gens), BigInt(ord));
}

/// Hol(G) as a permutation group on G.
inline PermutationGroup holomorph_group(const AbelianGroup& g, std::size_t cap = kDefaultHolomorphCap) {
  const auto auts = automorphism_group_of(g, std::max<std::size_t>(kDefaultGroupCap, static_cast<std::size_t>(g.order())), cap);
  std::vector<Permutation> gens;
  for (int i = 0; i < g.rank(); ++i) gens.push_back(right_translation(g, g.generator(i)));
  for (const auto& tau : auts)
    if (!tau.is_identity()) gens.push_back(lift(g, tau.table(), 1));
  return PermutationGroup(g.order(), std::move(gens), BigInt(auts.size()) * g.order());
}

}  // namespace cayleystab
