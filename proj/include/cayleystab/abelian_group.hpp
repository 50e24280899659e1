#pragma once

// Finite abelian groups in invariant-factor form, written additively.
//
// Elements are addressed by index in [0, order). The index is the
// lexicographic rank of the coordinate tuple (first coordinate most
// significant), so the identity is always index 0 and for a cyclic group
// C_n the index of an element is its residue.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cayleystab/bitset.hpp"
#include "cayleystab/error.hpp"

namespace cayleystab {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::size_t kDefaultGroupCap = 512;
inline constexpr std::size_t kDefaultHolomorphCap = 1'000'000;

/// Coordinate form of an element; coords[i] lies in [0, d_i).
struct GroupElement {
  std::vector<int> coords;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

class AbelianGroup {
 public:
  AbelianGroup() : AbelianGroup(std::vector<int>{}) {}

  /// Normalizes an arbitrary list of cyclic factor orders to the
  /// invariant-factor chain d_1 | d_2 | ... | d_k (factors equal to 1 vanish).
  static AbelianGroup make(std::span<const long long> factors) {
    std::map<long long, std::vector<int>> prime_powers;  // prime -> exponents
    for (long long f : factors) {
      if (f <= 0) throw DomainError("cyclic factor order must be positive, got " + std::to_string(f));
      long long n = f;
      for (long long p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
          n /= p;
          ++e;
        }
        if (e > 0) prime_powers[p].push_back(e);
      }
      if (n > 1) prime_powers[n].push_back(1);
    }
    std::size_t rank = 0;
    for (auto& [p, exps] : prime_powers) {
      std::sort(exps.begin(), exps.end(), std::greater<>());
      rank = std::max(rank, exps.size());
    }
    // invariant[k] collects the k-th largest power of every prime.
    std::vector<long long> invariant(rank, 1);
    for (const auto& [p, exps] : prime_powers) {
      for (std::size_t k = 0; k < exps.size(); ++k)
        for (int e = 0; e < exps[k]; ++e) invariant[k] *= p;
    }
    std::reverse(invariant.begin(), invariant.end());
    long long order = 1;
    std::vector<int> out;
    for (long long d : invariant) {
      order *= d;
      if (order > (1LL << 30)) throw DomainError("group order too large");
      out.push_back(static_cast<int>(d));
    }
    return AbelianGroup(std::move(out));
  }

  static AbelianGroup make(std::initializer_list<long long> factors) {
    return make(std::span<const long long>(factors.begin(), factors.size()));
  }

  /// Parses `C<n>` terms joined by `x`, e.g. "C12", "C2xC4" (case-insensitive).
  static AbelianGroup parse(std::string_view spec) {
    std::vector<long long> factors;
    std::size_t i = 0;
    auto fail = [&](const std::string& why) -> DomainError {
      return DomainError("bad group spec '" + std::string(spec) + "': " + why);
    };
    if (spec.empty()) throw fail("empty");
    while (true) {
      if (i >= spec.size() || std::tolower(static_cast<unsigned char>(spec[i])) != 'c')
        throw fail("expected 'C'");
      ++i;
      std::size_t start = i;
      while (i < spec.size() && std::isdigit(static_cast<unsigned char>(spec[i]))) ++i;
      if (start == i) throw fail("expected a number after 'C'");
      if (i - start > 9) throw fail("factor too large");
      factors.push_back(std::stoll(std::string(spec.substr(start, i - start))));
      if (i == spec.size()) break;
      if (std::tolower(static_cast<unsigned char>(spec[i])) != 'x') throw fail("expected 'x'");
      ++i;
    }
    return make(factors);
  }

  const std::vector<int>& invariant_factors() const { return factors_; }
  int order() const { return order_; }
  int exponent() const { return factors_.empty() ? 1 : factors_.back(); }
  int rank() const { return static_cast<int>(factors_.size()); }
  int identity() const { return 0; }

  std::string name() const {
    if (factors_.empty()) return "C1";
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += 'x';
      s += 'C' + std::to_string(factors_[i]);
    }
    return s;
  }

  int coord(int element, int i) const { return coords_[static_cast<std::size_t>(element * rank() + i)]; }

  GroupElement element(int index) const {
    GroupElement e;
    e.coords.assign(coords_.begin() + index * rank(), coords_.begin() + (index + 1) * rank());
    return e;
  }

  int index(const GroupElement& e) const {
    if (e.coords.size() != factors_.size()) throw DomainError("element arity does not match group rank");
    int idx = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const int d = factors_[i];
      const int c = ((e.coords[i] % d) + d) % d;
      idx = idx * d + c;
    }
    return idx;
  }

  int add(int a, int b) const {
    int idx = 0;
    for (int i = 0; i < rank(); ++i) {
      const int d = factors_[static_cast<std::size_t>(i)];
      int c = coord(a, i) + coord(b, i);
      if (c >= d) c -= d;
      idx = idx * d + c;
    }
    return idx;
  }

  int neg(int a) const { return neg_[static_cast<std::size_t>(a)]; }
  int sub(int a, int b) const { return add(a, neg(b)); }

  /// k·a for any integer k.
  int times(long long k, int a) const {
    int idx = 0;
    for (int i = 0; i < rank(); ++i) {
      const long long d = factors_[static_cast<std::size_t>(i)];
      long long c = (k % d) * coord(a, i) % d;
      if (c < 0) c += d;
      idx = static_cast<int>(idx * d + c);
    }
    return idx;
  }

  int element_order(int a) const {
    long long o = 1;
    for (int i = 0; i < rank(); ++i) {
      const long long d = factors_[static_cast<std::size_t>(i)];
      o = std::lcm(o, d / std::gcd(d, static_cast<long long>(coord(a, i))));
    }
    return static_cast<int>(o);
  }

  /// Index of the canonical generator of the i-th invariant factor.
  int generator(int i) const {
    GroupElement e;
    e.coords.assign(factors_.size(), 0);
    e.coords[static_cast<std::size_t>(i)] = 1;
    return index(e);
  }

  ElementSet empty_set() const { return ElementSet(static_cast<std::size_t>(order_)); }

  ElementSet negate(const ElementSet& s) const {
    ElementSet out = empty_set();
    for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i))
      out.set(static_cast<std::size_t>(neg(static_cast<int>(i))));
    return out;
  }

  ElementSet translate(const ElementSet& s, int u) const {
    ElementSet out = empty_set();
    for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i))
      out.set(static_cast<std::size_t>(add(static_cast<int>(i), u)));
    return out;
  }

  bool is_inverse_closed(const ElementSet& s) const { return negate(s) == s; }

  friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) { return a.factors_ == b.factors_; }

 private:
  explicit AbelianGroup(std::vector<int> factors) : factors_(std::move(factors)) {
    order_ = 1;
    for (int d : factors_) order_ *= d;
    const int k = rank();
    coords_.assign(static_cast<std::size_t>(order_ * k), 0);
    for (int idx = 0; idx < order_; ++idx) {
      int rest = idx;
      for (int i = k - 1; i >= 0; --i) {
        const int d = factors_[static_cast<std::size_t>(i)];
        coords_[static_cast<std::size_t>(idx * k + i)] = rest % d;
        rest /= d;
      }
    }
    neg_.resize(static_cast<std::size_t>(order_));
    for (int idx = 0; idx < order_; ++idx) {
      int out = 0;
      for (int i = 0; i < k; ++i) {
        const int d = factors_[static_cast<std::size_t>(i)];
        out = out * d + (d - coord(idx, i)) % d;
      }
      neg_[static_cast<std::size_t>(idx)] = out;
    }
  }

  std::vector<int> factors_;
  int order_ = 1;
  std::vector<int> coords_;  // row-major, one row of rank() coordinates per element
  std::vector<int> neg_;
};

/// Every abelian group of order ≤ limit up to isomorphism, ordered by
/// (order, invariant factors).
inline std::vector<AbelianGroup> all_abelian_groups(int limit) {
  std::vector<std::vector<long long>> chains;
  // Chains d_1 | d_2 | ... built from the largest factor down.
  auto extend = [&](auto&& self, std::vector<long long>& chain, long long remaining) -> void {
    // chain holds factors from largest to smallest; the next must divide chain.back().
    chains.push_back(chain);
    const long long bound = chain.empty() ? remaining : std::min(remaining, chain.back());
    for (long long d = 2; d <= bound; ++d) {
      if (!chain.empty() && chain.back() % d != 0) continue;
      if (remaining / d < 1) break;
      chain.push_back(d);
      self(self, chain, remaining / d);
      chain.pop_back();
    }
  };
  std::vector<long long> chain;
  extend(extend, chain, limit);
  std::vector<AbelianGroup> out;
  for (const auto& c : chains) out.push_back(AbelianGroup::make(std::span<const long long>(c.data(), c.size())));
  std::sort(out.begin(), out.end(), [](const AbelianGroup& a, const AbelianGroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.invariant_factors() < b.invariant_factors();
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Element-level statistics

/// I(G): elements x with 2x = 0, identity included.
inline ElementSet involution_set(const AbelianGroup& g) {
  ElementSet out = g.empty_set();
  for (int x = 0; x < g.order(); ++x)
    if (g.neg(x) == x) out.set(static_cast<std::size_t>(x));
  return out;
}

/// c(T) = (|T| + |I(T)|) / 2 for an inverse-closed T.
inline int c_value(const AbelianGroup& g, const ElementSet& t) {
  if (!g.is_inverse_closed(t)) throw PreconditionError("c_value: set is not inverse-closed");
  const auto inv = (t & involution_set(g)).count();
  return static_cast<int>((t.count() + inv) / 2);
}

inline int c_value(const AbelianGroup& g) {
  ElementSet all = g.empty_set();
  all.set();
  return c_value(g, all);
}

/// 2^{c(G)}: the number of inverse-closed subsets of G.
inline BigInt count_inverse_closed(const AbelianGroup& g) { return BigInt(1) << c_value(g); }

// ---------------------------------------------------------------------------
// Subgroups

struct Subgroup {
  ElementSet members;
  std::vector<int> generators;

  int order() const { return static_cast<int>(members.count()); }
  bool contains(int x) const { return members.test(static_cast<std::size_t>(x)); }
};

/// Subgroup generated by `base` together with `x`: the union of the cosets
/// base + k·x.
inline ElementSet join_with_element(const AbelianGroup& g, const ElementSet& base, int x) {
  ElementSet out = base;
  int step = x;
  while (!base.test(static_cast<std::size_t>(step))) {
    out |= g.translate(base, step);
    step = g.add(step, x);
  }
  return out;
}

inline Subgroup subgroup_generated(const AbelianGroup& g, const std::vector<int>& gens) {
  ElementSet members = g.empty_set();
  members.set(0);
  for (int x : gens) members = join_with_element(g, members, x);
  return Subgroup{std::move(members), gens};
}

/// Every subgroup exactly once, ordered by (order, sorted member list).
inline std::vector<Subgroup> subgroups(const AbelianGroup& g, std::size_t cap = kDefaultGroupCap) {
  if (static_cast<std::size_t>(g.order()) > cap) throw CapExceeded("subgroups: group order exceeds cap", cap);
  std::vector<Subgroup> found;
  std::unordered_set<ElementSet> seen;
  Subgroup trivial = subgroup_generated(g, {});
  seen.insert(trivial.members);
  found.push_back(trivial);
  for (std::size_t head = 0; head < found.size(); ++head) {
    // Copies: `found` grows while we iterate.
    const ElementSet base = found[head].members;
    const std::vector<int> base_gens = found[head].generators;
    ElementSet covered = base;
    for (int x = 0; x < g.order(); ++x) {
      if (covered.test(static_cast<std::size_t>(x))) continue;
      ElementSet joined = join_with_element(g, base, x);
      covered |= g.translate(base, x);
      if (seen.insert(joined).second) {
        std::vector<int> gens = base_gens;
        gens.push_back(x);
        found.push_back(Subgroup{std::move(joined), std::move(gens)});
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return members_of(a.members) < members_of(b.members);
  });
  return found;
}

// ---------------------------------------------------------------------------
// Automorphisms

/// An automorphism of G, stored by the images of the canonical generators
/// together with its full image table.
class GroupAutomorphism {
 public:
  GroupAutomorphism() = default;

  /// Validates that the generator images define a bijective endomorphism.
  GroupAutomorphism(const AbelianGroup& g, std::vector<int> generator_images)
      : images_(std::move(generator_images)) {
    if (images_.size() != static_cast<std::size_t>(g.rank()))
      throw DomainError("automorphism: need one image per invariant factor");
    for (int i = 0; i < g.rank(); ++i) {
      if (g.times(g.invariant_factors()[static_cast<std::size_t>(i)], images_[static_cast<std::size_t>(i)]) != 0)
        throw DomainError("automorphism: generator image order does not divide its factor");
    }
    table_.assign(static_cast<std::size_t>(g.order()), 0);
    ElementSet hit = g.empty_set();
    for (int x = 0; x < g.order(); ++x) {
      int y = 0;
      for (int i = 0; i < g.rank(); ++i) y = g.add(y, g.times(g.coord(x, i), images_[static_cast<std::size_t>(i)]));
      table_[static_cast<std::size_t>(x)] = y;
      hit.set(static_cast<std::size_t>(y));
    }
    if (!hit.all()) throw DomainError("automorphism: generator images do not define a bijection");
  }

  static GroupAutomorphism identity(const AbelianGroup& g) {
    std::vector<int> imgs;
    for (int i = 0; i < g.rank(); ++i) imgs.push_back(g.generator(i));
    return GroupAutomorphism(g, std::move(imgs));
  }

  static GroupAutomorphism inversion(const AbelianGroup& g) {
    std::vector<int> imgs;
    for (int i = 0; i < g.rank(); ++i) imgs.push_back(g.neg(g.generator(i)));
    return GroupAutomorphism(g, std::move(imgs));
  }

  int operator()(int x) const { return table_[static_cast<std::size_t>(x)]; }
  const std::vector<int>& generator_images() const { return images_; }
  const std::vector<int>& table() const { return table_; }

  bool is_identity() const {
    for (std::size_t x = 0; x < table_.size(); ++x)
      if (table_[x] != static_cast<int>(x)) return false;
    return true;
  }

  /// x ↦ second(first(x)).
  static GroupAutomorphism then(const AbelianGroup& g, const GroupAutomorphism& first, const GroupAutomorphism& second) {
    std::vector<int> imgs;
    for (int img : first.images_) imgs.push_back(second(img));
    return GroupAutomorphism(g, std::move(imgs));
  }

  GroupAutomorphism inverse(const AbelianGroup& g) const {
    std::vector<int> inv(table_.size());
    for (std::size_t x = 0; x < table_.size(); ++x) inv[static_cast<std::size_t>(table_[x])] = static_cast<int>(x);
    std::vector<int> imgs;
    for (int i = 0; i < g.rank(); ++i) imgs.push_back(inv[static_cast<std::size_t>(g.generator(i))]);
    return GroupAutomorphism(g, std::move(imgs));
  }

  friend bool operator==(const GroupAutomorphism& a, const GroupAutomorphism& b) { return a.images_ == b.images_; }

 private:
  std::vector<int> images_;
  std::vector<int> table_;
};

/// Aut(G), enumerated by backtracking over generator images: after choosing
/// images for the first i generators they must generate a subgroup of order
/// d_1···d_i, which is exactly injectivity on the first i summands.
inline std::vector<GroupAutomorphism> automorphism_group_of(const AbelianGroup& g,
                                                            std::size_t cap = kDefaultGroupCap,
                                                            std::size_t count_cap = kDefaultHolomorphCap) {
  if (static_cast<std::size_t>(g.order()) > cap)
    throw CapExceeded("automorphism_group_of: group order exceeds cap", cap);
  const int k = g.rank();
  std::vector<std::vector<int>> candidates(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    for (int x = 0; x < g.order(); ++x)
      if (g.times(g.invariant_factors()[static_cast<std::size_t>(i)], x) == 0)
        candidates[static_cast<std::size_t>(i)].push_back(x);

  std::vector<GroupAutomorphism> out;
  std::vector<int> chosen;
  std::vector<ElementSet> spans{subgroup_generated(g, {}).members};
  std::vector<long long> target{1};
  for (int i = 0; i < k; ++i) target.push_back(target.back() * g.invariant_factors()[static_cast<std::size_t>(i)]);

  auto recurse = [&](auto&& self, int level) -> void {
    if (level == k) {
      if (out.size() >= count_cap) throw CapExceeded("automorphism_group_of: too many automorphisms", count_cap);
      out.emplace_back(g, chosen);
      return;
    }
    for (int x : candidates[static_cast<std::size_t>(level)]) {
      ElementSet next = join_with_element(g, spans.back(), x);
      if (static_cast<long long>(next.count()) != target[static_cast<std::size_t>(level + 1)]) continue;
      chosen.push_back(x);
      spans.push_back(std::move(next));
      self(self, level + 1);
      spans.pop_back();
      chosen.pop_back();
    }
  };
  recurse(recurse, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Holomorph

/// α = R(g)τ acting by x ↦ (x + g)^τ.
struct HolomorphElement {
  int translation = 0;
  GroupAutomorphism twist;

  int operator()(const AbelianGroup& g, int x) const { return twist(g.add(x, translation)); }

  /// Apply `first`, then `second`: x ↦ τ₂(τ₁(x + g₁) + g₂) = τ₂τ₁(x + g₁ + τ₁⁻¹(g₂)).
  static HolomorphElement then(const AbelianGroup& g, const HolomorphElement& first, const HolomorphElement& second) {
    const GroupAutomorphism first_inv = first.twist.inverse(g);
    return HolomorphElement{g.add(first.translation, first_inv(second.translation)),
                            GroupAutomorphism::then(g, first.twist, second.twist)};
  }

  bool is_identity() const { return translation == 0 && twist.is_identity(); }

  std::vector<int> as_permutation(const AbelianGroup& g) const {
    std::vector<int> p(static_cast<std::size_t>(g.order()));
    for (int x = 0; x < g.order(); ++x) p[static_cast<std::size_t>(x)] = (*this)(g, x);
    return p;
  }

  /// Image of a subset under the pointwise action.
  ElementSet image(const AbelianGroup& g, const ElementSet& s) const {
    ElementSet out = g.empty_set();
    for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i))
      out.set(static_cast<std::size_t>((*this)(g, static_cast<int>(i))));
    return out;
  }

  friend bool operator==(const HolomorphElement& a, const HolomorphElement& b) {
    return a.translation == b.translation && a.twist == b.twist;
  }
};

/// Hol(G) = R(G) ⋊ Aut(G), listed twist-major.
inline std::vector<HolomorphElement> holomorph(const AbelianGroup& g, std::size_t cap = kDefaultHolomorphCap) {
  const auto auts = automorphism_group_of(g, std::max<std::size_t>(kDefaultGroupCap, static_cast<std::size_t>(g.order())),
                                          cap / static_cast<std::size_t>(g.order()) + 1);
  if (auts.size() * static_cast<std::size_t>(g.order()) > cap)
    throw CapExceeded("holomorph: |G|·|Aut(G)| exceeds cap", cap);
  std::vector<HolomorphElement> out;
  out.reserve(auts.size() * static_cast<std::size_t>(g.order()));
  for (const auto& tau : auts)
    for (int t = 0; t < g.order(); ++t) out.push_back(HolomorphElement{t, tau});
  return out;
}

/// Fix_G(τ) as a set.
inline ElementSet fixed_points(const AbelianGroup& g, const GroupAutomorphism& tau) {
  ElementSet out = g.empty_set();
  for (int x = 0; x < g.order(); ++x)
    if (tau(x) == x) out.set(static_cast<std::size_t>(x));
  return out;
}

/// True iff `s` is a coset h + K of the subgroup with member set `k`.
inline bool is_coset_of(const AbelianGroup& g, const ElementSet& s, const ElementSet& k) {
  const auto first = s.find_first();
  if (first == ElementSet::npos) return false;
  return g.translate(k, static_cast<int>(first)) == s;
}

/// {x : x^α = x}; empty or a coset of Fix_G(τ). The coset property is checked
/// on every call.
inline ElementSet fixed_points(const AbelianGroup& g, const HolomorphElement& alpha) {
  ElementSet out = g.empty_set();
  for (int x = 0; x < g.order(); ++x)
    if (alpha(g, x) == x) out.set(static_cast<std::size_t>(x));
  if (out.any() && !is_coset_of(g, out, fixed_points(g, alpha.twist)))
    throw InternalError("fixed_points: fixed set of a holomorph element is not a coset of Fix(τ)");
  return out;
}

}  // namespace cayleystab
