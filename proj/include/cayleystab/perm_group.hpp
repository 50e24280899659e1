#pragma once

// Permutation groups given by generators, with a lazily built stabilizer
// chain (deterministic Schreier-Sims, base points chosen as the smallest
// moved point of the element that forces a new level).

#include <algorithm>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cayleystab/error.hpp"
#include "cayleystab/permutation.hpp"

namespace cayleystab {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::size_t kDefaultElementCap = 20'000;

using PermutationSet = std::unordered_set<Permutation, PermutationHash>;

class PermutationGroup {
 public:
  struct Level {
    int base = 0;
    std::vector<Permutation> generators;  // strong generators fixing the earlier base points
    std::vector<int> orbit;               // in discovery order, orbit[0] == base
    std::vector<int> slot;                // point -> index into transversal, -1 if outside orbit
    std::vector<Permutation> transversal; // base^transversal[i] == orbit[i]
    std::vector<Permutation> transversal_inv;
  };

  PermutationGroup() : PermutationGroup(0, {}) {}

  /// `known_order`, when supplied, lets the chain construction stop as soon
  /// as the orbit product reaches it. It must be the true order.
  PermutationGroup(int degree, std::vector<Permutation> generators, std::optional<BigInt> known_order = std::nullopt)
      : degree_(degree), known_order_(std::move(known_order)), state_(std::make_shared<State>()) {
    if (degree < 0) throw DomainError("permutation group: negative degree");
    for (auto& g : generators) {
      if (g.degree() != degree) throw DomainError("permutation group: generator degree mismatch");
      if (!g.is_identity() && std::find(generators_.begin(), generators_.end(), g) == generators_.end())
        generators_.push_back(std::move(g));
    }
  }

  static PermutationGroup trivial(int degree) { return PermutationGroup(degree, {}, BigInt(1)); }

  /// Sym(n) on n points.
  static PermutationGroup symmetric(int n) {
    std::vector<Permutation> gens;
    if (n >= 2) {
      gens.push_back(Permutation::from_cycles(n, {{0, 1}}));
      std::vector<int> cyc(static_cast<std::size_t>(n));
      std::iota(cyc.begin(), cyc.end(), 0);
      if (n >= 3) gens.push_back(Permutation::from_cycles(n, {cyc}));
    }
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return PermutationGroup(n, std::move(gens), f);
  }

  int degree() const { return degree_; }
  const std::vector<Permutation>& generators() const { return generators_; }

  const std::vector<Level>& chain() const {
    std::call_once(state_->once, [this] { build(); });
    return state_->levels;
  }

  std::vector<int> base() const {
    std::vector<int> b;
    for (const auto& l : chain()) b.push_back(l.base);
    return b;
  }

  std::vector<std::size_t> orbit_lengths() const {
    std::vector<std::size_t> out;
    for (const auto& l : chain()) out.push_back(l.orbit.size());
    return out;
  }

  BigInt order() const {
    BigInt o = 1;
    for (const auto& l : chain()) o *= static_cast<unsigned long long>(l.orbit.size());
    return o;
  }

  bool contains(const Permutation& p) const {
    if (p.degree() != degree_) throw DomainError("membership: degree mismatch");
    const auto& levels = chain();
    auto [residue, depth] = sift(levels, p, 0);
    return depth == levels.size() && residue.is_identity();
  }

  Permutation identity() const { return Permutation::identity(degree_); }

  /// Every element exactly once, as products of transversal elements.
  std::vector<Permutation> enumerate_elements(std::size_t cap = kDefaultElementCap) const {
    if (order() > cap) throw CapExceeded("enumerate_elements: group order exceeds cap", cap);
    const auto& levels = chain();
    std::vector<Permutation> elems{identity()};
    for (std::size_t k = levels.size(); k-- > 0;) {
      std::vector<Permutation> next;
      next.reserve(elems.size() * levels[k].transversal.size());
      for (const auto& e : elems)
        for (const auto& u : levels[k].transversal) next.push_back(e * u);
      elems = std::move(next);
    }
    return elems;
  }

  /// Orbit of `point` under the whole group, ascending.
  std::vector<int> orbit(int point) const {
    std::vector<char> seen(static_cast<std::size_t>(degree_), 0);
    std::vector<int> out{point};
    seen[static_cast<std::size_t>(point)] = 1;
    for (std::size_t i = 0; i < out.size(); ++i)
      for (const auto& g : generators_) {
        const int q = g[out[i]];
        if (!seen[static_cast<std::size_t>(q)]) {
          seen[static_cast<std::size_t>(q)] = 1;
          out.push_back(q);
        }
      }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// All orbits, each ascending, ordered by least point.
  std::vector<std::vector<int>> orbits() const {
    std::vector<char> done(static_cast<std::size_t>(degree_), 0);
    std::vector<std::vector<int>> out;
    for (int p = 0; p < degree_; ++p) {
      if (done[static_cast<std::size_t>(p)]) continue;
      out.push_back(orbit(p));
      for (int q : out.back()) done[static_cast<std::size_t>(q)] = 1;
    }
    return out;
  }

  /// True iff every generator of `h` lies in this group.
  bool contains_group(const PermutationGroup& h) const {
    return std::all_of(h.generators().begin(), h.generators().end(), [&](const Permutation& g) { return contains(g); });
  }

 private:
  struct State {
    std::once_flag once;
    std::vector<Level> levels;
  };

  static std::pair<Permutation, std::size_t> sift(const std::vector<Level>& levels, Permutation g, std::size_t from) {
    for (std::size_t j = from; j < levels.size(); ++j) {
      const int p = g[levels[j].base];
      const int s = levels[j].slot[static_cast<std::size_t>(p)];
      if (s < 0) return {std::move(g), j};
      g = g * levels[j].transversal_inv[static_cast<std::size_t>(s)];
    }
    return {std::move(g), levels.size()};
  }

  void rebuild_orbit(Level& l) const {
    l.orbit.assign(1, l.base);
    l.slot.assign(static_cast<std::size_t>(degree_), -1);
    l.slot[static_cast<std::size_t>(l.base)] = 0;
    l.transversal.assign(1, identity());
    for (std::size_t i = 0; i < l.orbit.size(); ++i)
      for (const auto& s : l.generators) {
        const int q = s[l.orbit[i]];
        if (l.slot[static_cast<std::size_t>(q)] >= 0) continue;
        l.slot[static_cast<std::size_t>(q)] = static_cast<int>(l.orbit.size());
        l.orbit.push_back(q);
        l.transversal.push_back(l.transversal[i] * s);
      }
    l.transversal_inv.clear();
    for (const auto& u : l.transversal) l.transversal_inv.push_back(u.inverse());
  }

  static BigInt orbit_product(const std::vector<Level>& levels) {
    BigInt o = 1;
    for (const auto& l : levels) o *= static_cast<unsigned long long>(l.orbit.size());
    return o;
  }

  void build() const {
    auto& levels = state_->levels;
    levels.reserve(static_cast<std::size_t>(degree_) + 1);  // references into levels stay valid
    auto add_level = [&](int base_point) {
      Level l;
      l.base = base_point;
      levels.push_back(std::move(l));
    };
    for (const auto& g : generators_) {
      bool fixes_all = std::all_of(levels.begin(), levels.end(), [&](const Level& l) { return g[l.base] == l.base; });
      if (fixes_all) add_level(g.first_moved());
    }
    for (std::size_t k = 0; k < levels.size(); ++k) {
      for (const auto& g : generators_) {
        bool fixes_prefix = true;
        for (std::size_t j = 0; j < k; ++j) fixes_prefix = fixes_prefix && g[levels[j].base] == levels[j].base;
        if (fixes_prefix) levels[k].generators.push_back(g);
      }
      rebuild_orbit(levels[k]);
    }
    auto complete = [&] { return known_order_ && orbit_product(levels) == *known_order_; };
    if (complete()) return;

    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(levels.size()) - 1;
    while (i >= 0) {
      bool extended = false;
      Level& li = levels[static_cast<std::size_t>(i)];
      for (std::size_t pi = 0; pi < li.orbit.size() && !extended; ++pi) {
        for (std::size_t si = 0; si < li.generators.size() && !extended; ++si) {
          const Permutation& s = li.generators[si];
          const int q = s[li.orbit[pi]];
          Permutation h = li.transversal[pi] * s * li.transversal_inv[static_cast<std::size_t>(li.slot[static_cast<std::size_t>(q)])];
          auto [residue, depth] = sift(levels, std::move(h), static_cast<std::size_t>(i) + 1);
          if (depth == levels.size() && residue.is_identity()) continue;
          if (depth == levels.size()) add_level(residue.first_moved());
          for (std::size_t l = static_cast<std::size_t>(i) + 1; l <= depth; ++l) {
            levels[l].generators.push_back(residue);
            rebuild_orbit(levels[l]);
          }
          if (complete()) return;
          i = static_cast<std::ptrdiff_t>(depth);
          extended = true;
        }
      }
      if (!extended) --i;
    }
    if (known_order_ && orbit_product(levels) != *known_order_)
      throw InternalError("permutation group: supplied order disagrees with the stabilizer chain");
  }

  int degree_;
  std::vector<Permutation> generators_;
  std::optional<BigInt> known_order_;
  std::shared_ptr<State> state_;
};

/// The group generated by `elems`, which must already be closed under
/// multiplication; generators are picked greedily so the result stays small.
inline PermutationGroup group_from_closed_set(int degree, const std::vector<Permutation>& elems) {
  PermutationSet closure{Permutation::identity(degree)};
  std::vector<Permutation> gens;
  for (const auto& e : elems) {
    if (closure.count(e)) continue;
    gens.push_back(e);
    std::vector<Permutation> queue(closure.begin(), closure.end());
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (const auto& g : gens) {
        Permutation p = queue[i] * g;
        if (closure.insert(p).second) queue.push_back(std::move(p));
      }
  }
  if (closure.size() != elems.size()) throw InternalError("group_from_closed_set: input is not a group");
  return PermutationGroup(degree, std::move(gens), BigInt(elems.size()));
}

/// Nor_Gp(H) by filtering the elements of Gp.
inline PermutationGroup normalizer_bounded(const PermutationGroup& gp, const PermutationGroup& h,
                                           std::size_t cap = kDefaultElementCap) {
  if (gp.degree() != h.degree()) throw DomainError("normalizer: degree mismatch");
  std::vector<Permutation> keep;
  for (const auto& x : gp.enumerate_elements(cap)) {
    const Permutation xi = x.inverse();
    bool ok = std::all_of(h.generators().begin(), h.generators().end(),
                          [&](const Permutation& g) { return h.contains(xi * g * x); });
    if (ok) keep.push_back(x);
  }
  return group_from_closed_set(gp.degree(), keep);
}

/// Core_Gp(H): elements of H whose whole Gp-conjugacy class lies in H.
inline PermutationGroup core_bounded(const PermutationGroup& gp, const PermutationGroup& h,
                                     std::size_t cap = kDefaultElementCap) {
  if (gp.degree() != h.degree()) throw DomainError("core: degree mismatch");
  if (gp.order() > cap) throw CapExceeded("core_bounded: group order exceeds cap", cap);
  std::vector<Permutation> gen_inv;
  for (const auto& g : gp.generators()) gen_inv.push_back(g.inverse());
  std::vector<Permutation> keep;
  for (const auto& e : h.enumerate_elements(cap)) {
    PermutationSet cls{e};
    std::vector<Permutation> queue{e};
    bool inside = true;
    for (std::size_t i = 0; i < queue.size() && inside; ++i)
      for (std::size_t k = 0; k < gen_inv.size() && inside; ++k) {
        Permutation c = gen_inv[k] * queue[i] * gp.generators()[k];
        if (!h.contains(c)) inside = false;
        else if (cls.insert(c).second) queue.push_back(std::move(c));
      }
    if (inside) keep.push_back(e);
  }
  return group_from_closed_set(gp.degree(), keep);
}

// ---------------------------------------------------------------------------
// Equivalence of action triples (Ω, X, T)

struct ActionTriple {
  int n = 0;
  PermutationGroup big;          // X
  PermutationGroup distinguished;  // T ≤ X

  ActionTriple(int n_, PermutationGroup x, PermutationGroup t) : n(n_), big(std::move(x)), distinguished(std::move(t)) {
    if (big.degree() != n || distinguished.degree() != n) throw DomainError("action triple: degree mismatch");
    if (!big.contains_group(distinguished)) throw PreconditionError("action triple: T is not a subgroup of X");
  }
};

inline constexpr std::size_t kDefaultTripleCap = 1'000'000;

namespace detail {

inline std::vector<std::size_t> orbit_length_profile(const PermutationGroup& g) {
  std::vector<std::size_t> out;
  for (const auto& o : g.orbits()) out.push_back(o.size());
  std::sort(out.begin(), out.end());
  return out;
}

/// φ⁻¹ A φ ⊆ B for the generators of A, where φ maps point p of A's domain to phi[p].
inline bool conjugates_into(const PermutationGroup& a, const PermutationGroup& b, const std::vector<int>& phi) {
  const int n = a.degree();
  for (const auto& g : a.generators()) {
    std::vector<int> img(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) img[static_cast<std::size_t>(phi[static_cast<std::size_t>(p)])] = phi[static_cast<std::size_t>(g[p])];
    if (!b.contains(Permutation(std::move(img)))) return false;
  }
  return true;
}

/// Does some element of `elems` agree with g transported through the partial
/// map phi on every point where both p and g(p) are assigned?
inline bool partial_extends(const Permutation& g, const std::vector<Permutation>& elems, const std::vector<int>& phi,
                            const std::vector<int>& assigned) {
  for (const auto& x : elems) {
    bool ok = true;
    for (int p : assigned) {
      const int gp = g[p];
      if (phi[static_cast<std::size_t>(gp)] < 0) continue;
      if (x[phi[static_cast<std::size_t>(p)]] != phi[static_cast<std::size_t>(gp)]) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace detail

/// Def.: (Ω₁, X₁, T₁) ~ (Ω₂, X₂, T₂) iff some bijection φ has X₂ = φ⁻¹X₁φ and
/// T₂ = φ⁻¹T₁φ. Brute force over all bijections when n! ≤ cap, otherwise a
/// point-by-point backtrack with partial-consistency pruning (node budget = cap).
inline bool triples_equivalent(const ActionTriple& a, const ActionTriple& b, std::size_t cap = kDefaultTripleCap) {
  if (a.n != b.n) throw PreconditionError("triples_equivalent: domain sizes differ");
  const int n = a.n;
  if (a.big.order() != b.big.order() || a.distinguished.order() != b.distinguished.order()) return false;
  if (detail::orbit_length_profile(a.big) != detail::orbit_length_profile(b.big)) return false;
  if (detail::orbit_length_profile(a.distinguished) != detail::orbit_length_profile(b.distinguished)) return false;

  auto full_check = [&](const std::vector<int>& phi) {
    return detail::conjugates_into(a.big, b.big, phi) && detail::conjugates_into(a.distinguished, b.distinguished, phi);
  };

  double fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  if (fact <= static_cast<double>(cap)) {
    std::vector<int> phi(static_cast<std::size_t>(n));
    std::iota(phi.begin(), phi.end(), 0);
    do {
      if (full_check(phi)) return true;
    } while (std::next_permutation(phi.begin(), phi.end()));
    return false;
  }

  const auto x2 = b.big.enumerate_elements(std::min(cap, kDefaultElementCap));
  const auto t2 = b.distinguished.enumerate_elements(std::min(cap, kDefaultElementCap));
  std::vector<int> phi(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::vector<int> assigned;
  std::size_t nodes = 0;

  auto consistent = [&] {
    for (const auto& g : a.big.generators())
      if (!detail::partial_extends(g, x2, phi, assigned)) return false;
    for (const auto& g : a.distinguished.generators())
      if (!detail::partial_extends(g, t2, phi, assigned)) return false;
    return true;
  };

  auto recurse = [&](auto&& self, int p) -> bool {
    if (++nodes > cap) throw CapExceeded("triples_equivalent: search node budget exhausted", cap);
    if (p == n) return full_check(phi);
    for (int q = 0; q < n; ++q) {
      if (used[static_cast<std::size_t>(q)]) continue;
      phi[static_cast<std::size_t>(p)] = q;
      used[static_cast<std::size_t>(q)] = 1;
      assigned.push_back(p);
      if (consistent() && self(self, p + 1)) return true;
      assigned.pop_back();
      used[static_cast<std::size_t>(q)] = 0;
      phi[static_cast<std::size_t>(p)] = -1;
    }
    return false;
  };
  return recurse(recurse, 0);
}

}  // namespace cayleystab
