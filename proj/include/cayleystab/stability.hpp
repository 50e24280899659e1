#pragma once

// Classification of connection sets: stability of Cay(G, S), the group B(S),
// and membership in S₁ … S₅ and S₃′.

#include <algorithm>
#include <array>
#include <iterator>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/container_hash/hash.hpp>

#include "cayleystab/abelian_group.hpp"
#include "cayleystab/actions.hpp"
#include "cayleystab/autgrp.hpp"
#include "cayleystab/connection_set.hpp"
#include "cayleystab/error.hpp"
#include "cayleystab/graph.hpp"
#include "cayleystab/perm_group.hpp"

namespace cayleystab {

enum class Tri : std::uint8_t { no, yes, indeterminate };

inline const char* to_string(Tri t) {
  switch (t) {
    case Tri::no:
      return "no";
    case Tri::yes:
      return "yes";
    default:
      return "indeterminate";
  }
}

inline Tri tri(bool b) { return b ? Tri::yes : Tri::no; }

inline constexpr std::size_t kDefaultIntermediateCap = 2048;

struct Caps {
  int aut_degree = kDefaultAutDegreeCap;           // vertices in any automorphism search
  std::size_t group = kDefaultGroupCap;            // |G| for Aut(G) enumeration
  std::size_t holomorph = kDefaultHolomorphCap;    // |Hol(G)|
  std::size_t b_elements = kDefaultElementCap;     // |B(S)| for element-level scans
  std::size_t intermediate = kDefaultIntermediateCap;  // subgroups between R(G) and B(S)
};

enum Reason : std::uint8_t {
  kDisconnected = 1,
  kBipartiteNontrivialAut = 2,
  kTwins = 4,
};

inline std::vector<std::string> reason_names(std::uint8_t reasons) {
  std::vector<std::string> out;
  if (reasons & kDisconnected) out.emplace_back("disconnected");
  if (reasons & kBipartiteNontrivialAut) out.emplace_back("bipartite-with-nontrivial-aut");
  if (reasons & kTwins) out.emplace_back("twins");
  return out;
}

struct StabilityRecord {
  ElementSet set;
  BigInt aut_order;
  BigInt cover_aut_order;
  BigInt b_order;
  bool connected = false;
  bool bipartite = false;
  bool twin_free = false;
  bool stable = false;
  bool in_S1 = false;
  bool in_S2 = false;
  Tri in_S3 = Tri::no;
  bool in_S3prime = false;
  Tri in_S4 = Tri::no;
  Tri in_S5 = Tri::no;
  std::uint8_t reasons = 0;
  bool exponent_two = false;  // ι = 1, so R(G)⋊⟨ι⟩ = R(G)
  std::size_t intermediate_subgroups = 0;  // found by the S₄/S₅ scan, 0 when not run

  bool trivially_unstable() const { return reasons != 0; }
  bool nontrivially_unstable() const { return !stable && reasons == 0; }
  bool any_indeterminate() const {
    return in_S3 == Tri::indeterminate || in_S4 == Tri::indeterminate || in_S5 == Tri::indeterminate;
  }
};

/// Per-group data shared by every classification over G.
class StabilityContext {
 public:
  explicit StabilityContext(AbelianGroup g, Caps caps = {}) : g_(std::move(g)), caps_(caps) {
    const int r = g_.order();
    if (2 * r > caps_.aut_degree) throw CapExceeded("classification: cover has more vertices than the automorphism cap", static_cast<std::size_t>(caps_.aut_degree));
    for (int i = 0; i < g_.rank(); ++i) r_gens_.push_back(right_translation(g_, g_.generator(i), 2));
    iota_ = inversion(g_, 2);
    plus_ = ElementSet(static_cast<std::size_t>(2 * r));
    for (int v = 0; v < r; ++v) plus_.set(static_cast<std::size_t>(v));
    const std::size_t aut_cap = std::max<std::size_t>(1, caps_.holomorph / static_cast<std::size_t>(r));
    try {
      auts_ = automorphism_group_of(g_, caps_.group, aut_cap);
    } catch (const CapExceeded&) {
      auts_.reset();
    }
  }

  const AbelianGroup& group() const { return g_; }
  const Caps& caps() const { return caps_; }
  int r() const { return g_.order(); }
  const std::vector<Permutation>& regular_generators() const { return r_gens_; }
  const Permutation& iota() const { return iota_; }
  const ElementSet& plus_block() const { return plus_; }
  bool exponent_two() const { return g_.exponent() <= 2; }
  /// |R(G)⋊⟨ι⟩|.
  long long r_iota_order() const { return exponent_two() ? r() : 2LL * r(); }
  /// Aut(G), or nothing when it exceeded the caps.
  const std::optional<std::vector<GroupAutomorphism>>& automorphisms() const { return auts_; }

 private:
  AbelianGroup g_;
  Caps caps_;
  std::vector<Permutation> r_gens_;
  Permutation iota_;
  ElementSet plus_;
  std::optional<std::vector<GroupAutomorphism>> auts_;
};

/// B(S): automorphisms of D(Cay(G, S)) fixing G⁺ setwise.
inline PermutationGroup b_group(const StabilityContext& ctx, const ElementSet& s) {
  const LabeledGraph cover = double_cover(cayley_graph(ctx.group(), s));
  PermutationGroup b = automorphism_group(cover, {ctx.plus_block()}, ctx.caps().aut_degree);
  for (const auto& p : ctx.regular_generators())
    if (!b.contains(p)) throw InternalError("B(S) does not contain R(G)");
  if (!b.contains(ctx.iota())) throw InternalError("B(S) does not contain the inversion");
  return b;
}

inline PermutationGroup b_group(const AbelianGroup& g, const ElementSet& s) { return b_group(StabilityContext(g), s); }

/// True iff S^α = S for some α ∈ Hol(G) − {1, ι}. No S₁ restriction.
inline bool s3prime_membership(const StabilityContext& ctx, const ElementSet& s) {
  const auto& auts = ctx.automorphisms();
  if (!auts) throw CapExceeded("S3': holomorph exceeds cap", ctx.caps().holomorph);
  const AbelianGroup& g = ctx.group();
  const auto members = members_of(s);
  const auto inv = GroupAutomorphism::inversion(g);
  for (const auto& tau : *auts) {
    const bool trivial_twist = tau.is_identity() || tau.table() == inv.table();
    for (int t = 0; t < g.order(); ++t) {
      if (t == 0 && trivial_twist) continue;
      HolomorphElement alpha{t, tau};
      bool fixed = true;
      for (int x : members)
        if (!s.test(static_cast<std::size_t>(alpha(g, x)))) {
          fixed = false;
          break;
        }
      if (fixed) return true;
    }
  }
  return false;
}

inline bool s3prime_membership(const AbelianGroup& g, const ElementSet& s) { return s3prime_membership(StabilityContext(g), s); }

namespace detail {

/// True iff p acts on both halves as the same translation x ↦ x + t.
inline bool is_diagonal_translation(const AbelianGroup& g, const Permutation& p) {
  const int r = g.order();
  const int t = p[0];
  if (t >= r) return false;
  for (int x = 0; x < r; ++x) {
    const int y = g.add(x, t);
    if (p[x] != y || p[r + x] != r + y) return false;
  }
  return true;
}

/// |Nor_B(R(G))| without enumerating B: every element is R(g)·p with p fixing
/// 0⁺, and such a p normalizes R(G) iff it is x⁺ ↦ τ(x)⁺, x⁻ ↦ τ(x + h)⁻ for
/// some τ ∈ Aut(G), h ∈ G. Each candidate is tested for membership in B.
inline BigInt normalizer_order_by_candidates(const StabilityContext& ctx, const PermutationGroup& b) {
  const AbelianGroup& g = ctx.group();
  const int r = g.order();
  std::size_t stab = 0;
  std::vector<int> img(static_cast<std::size_t>(2 * r));
  for (const auto& tau : *ctx.automorphisms())
    for (int h = 0; h < r; ++h) {
      for (int x = 0; x < r; ++x) {
        img[static_cast<std::size_t>(x)] = tau(x);
        img[static_cast<std::size_t>(r + x)] = r + tau(g.add(x, h));
      }
      if (b.contains(Permutation(img))) ++stab;
    }
  return BigInt(r) * stab;
}

struct BaseKey {
  static constexpr std::size_t kMax = 24;
  std::array<std::uint16_t, kMax> images;
  friend bool operator==(const BaseKey&, const BaseKey&) = default;
};

struct BaseKeyHash {
  std::size_t operator()(const BaseKey& k) const { return boost::hash_range(k.images.begin(), k.images.end()); }
};

}  // namespace detail

/// Nor_B(R(G)) by filtering the elements of B; requires |B| ≤ cap.
inline PermutationGroup regular_normalizer(const StabilityContext& ctx, const PermutationGroup& b) {
  return normalizer_bounded(b, PermutationGroup(2 * ctx.r(), ctx.regular_generators(), BigInt(ctx.r())), ctx.caps().b_elements);
}

struct S4S5Result {
  Tri s4 = Tri::indeterminate;
  Tri s5 = Tri::indeterminate;
  std::size_t intermediate = 0;  // subgroups X with R(G) < X ≤ B found
  bool complete = false;
};

/// Scans the subgroups X with R(G) ≤ X ≤ B. Every such X is the join of the
/// groups ⟨R(G), x⟩ for x ∈ X, so closing those under pairwise joins finds all
/// of them; the result is indeterminate if B or the list outgrows the caps.
inline S4S5Result s4_s5_membership(const StabilityContext& ctx, const PermutationGroup& b) {
  S4S5Result out;
  const Caps& caps = ctx.caps();
  const AbelianGroup& g = ctx.group();
  const int r = g.order();
  if (b.order() > caps.b_elements) return out;
  const auto elems = b.enumerate_elements(caps.b_elements);
  const std::size_t m = elems.size();

  // An element of B is determined by its base images, so products are
  // located by a short key instead of by hashing whole permutations.
  const std::vector<int> base = b.base();
  if (base.size() > detail::BaseKey::kMax || 2 * r > 65535) return out;
  auto key_of = [&](const Permutation& first, const Permutation& second) {
    detail::BaseKey k{};
    for (std::size_t j = 0; j < base.size(); ++j) k.images[j] = static_cast<std::uint16_t>(second[first[base[j]]]);
    return k;
  };
  const Permutation id = Permutation::identity(2 * r);
  std::unordered_map<detail::BaseKey, std::size_t, detail::BaseKeyHash> idx;
  idx.reserve(2 * m);
  for (std::size_t i = 0; i < m; ++i) idx.emplace(key_of(elems[i], id), i);
  auto index_of = [&](const Permutation& first, const Permutation& second) { return idx.at(key_of(first, second)); };

  // Every X ⊇ R(G) is a union of right cosets R(G)x, and B acts on those
  // cosets by right multiplication, so the scan runs on cosets.
  std::vector<Permutation> translations;
  for (int t = 0; t < r; ++t) translations.push_back(right_translation(g, t, 2));
  std::vector<int> coset_of(m, -1);
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < m; ++i) {
    if (coset_of[i] >= 0) continue;
    for (const auto& rt : translations) coset_of[index_of(rt, elems[i])] = static_cast<int>(reps.size());
    reps.push_back(i);
  }
  const std::size_t nc = reps.size();
  std::unordered_map<std::size_t, std::vector<int>> action;
  auto act = [&](std::size_t e) -> const std::vector<int>& {
    auto it = action.find(e);
    if (it != action.end()) return it->second;
    std::vector<int> t(nc);
    for (std::size_t c = 0; c < nc; ++c) t[c] = coset_of[index_of(elems[reps[c]], elems[e])];
    return action.emplace(e, std::move(t)).first->second;
  };
  std::vector<std::size_t> r_gens;
  for (const auto& gen : ctx.regular_generators()) r_gens.push_back(index_of(gen, id));

  ElementSet reg(nc), nor(nc), r_iota(nc);
  reg.set(static_cast<std::size_t>(coset_of[index_of(id, id)]));
  r_iota = reg;
  r_iota.set(static_cast<std::size_t>(coset_of[index_of(ctx.iota(), id)]));
  for (std::size_t c = 0; c < nc; ++c) {
    // Nor_B(R(G)) contains R(G), so testing the representative decides the coset.
    bool normalizes = true;
    for (const auto& gen : ctx.regular_generators())
      if (!detail::is_diagonal_translation(g, gen.conjugate_by(elems[reps[c]]))) {
        normalizes = false;
        break;
      }
    if (normalizes) nor.set(c);
  }

  struct Sub {
    ElementSet members;              // cosets of R(G)
    std::vector<std::size_t> extra;  // generators beyond R(G), sorted element indices
  };
  std::vector<Sub> subs;
  std::map<ElementSet, std::size_t> seen;

  auto close = [&](ElementSet in, const std::vector<std::size_t>& extra) {
    std::vector<std::size_t> queue;
    for (auto i = in.find_first(); i != ElementSet::npos; i = in.find_next(i)) queue.push_back(i);
    auto push_all = [&](std::size_t q, std::size_t e) {
      const auto j = static_cast<std::size_t>(act(e)[q]);
      if (!in.test(j)) {
        in.set(j);
        queue.push_back(j);
      }
    };
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const std::size_t c = queue[q];
      for (std::size_t e : r_gens) push_all(c, e);
      for (std::size_t e : extra) push_all(c, e);
    }
    return in;
  };
  auto add = [&](ElementSet members, std::vector<std::size_t> extra) {
    if (seen.count(members)) return true;
    if (subs.size() >= caps.intermediate) return false;
    seen.emplace(members, subs.size());
    subs.push_back(Sub{std::move(members), std::move(extra)});
    return true;
  };

  for (std::size_t c = 0; c < nc; ++c) {
    if (reg.test(c)) continue;
    if (!add(close(reg, {reps[c]}), {reps[c]})) return out;
  }
  for (std::size_t i = 1; i < subs.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const ElementSet& a = subs[i].members;
      const ElementSet& c = subs[j].members;
      if (a.is_subset_of(c) || c.is_subset_of(a)) continue;
      std::vector<std::size_t> extra;
      std::set_union(subs[i].extra.begin(), subs[i].extra.end(), subs[j].extra.begin(), subs[j].extra.end(),
                     std::back_inserter(extra));
      ElementSet joined = close(a | c, extra);
      if (!add(std::move(joined), std::move(extra))) return out;
    }
  out.complete = true;
  out.intermediate = subs.size();

  bool s4 = false, s5 = false;
  for (const auto& x : subs) {
    const ElementSet nx = x.members & nor;
    bool r_maximal = true;
    bool only_nx_between = true;
    for (const auto& y : subs) {
      if (!y.members.is_proper_subset_of(x.members)) continue;
      r_maximal = false;
      if (y.members != nx) only_nx_between = false;
    }
    if (r_maximal && nx == reg) s4 = true;
    if (nx == r_iota && nx != reg && nx != x.members && only_nx_between) s5 = true;
  }
  out.s4 = tri(s4);
  out.s5 = tri(s5);
  return out;
}

/// Full classification of one connection set.
inline StabilityRecord classify(const StabilityContext& ctx, const ElementSet& s) {
  const AbelianGroup& g = ctx.group();
  if (!g.is_inverse_closed(s)) throw PreconditionError("classify: S is not inverse-closed");
  StabilityRecord rec;
  rec.set = s;
  rec.exponent_two = ctx.exponent_two();
  const LabeledGraph gamma = cayley_graph(g, s);
  const LabeledGraph cover = double_cover(gamma);
  rec.aut_order = automorphism_group(gamma, {}, ctx.caps().aut_degree).order();
  rec.cover_aut_order = automorphism_group(cover, {}, ctx.caps().aut_degree).order();
  const PermutationGroup b = b_group(ctx, s);
  rec.b_order = b.order();
  rec.connected = is_connected(gamma);
  rec.bipartite = is_bipartite(gamma);
  rec.twin_free = is_twin_free(gamma);
  rec.stable = rec.cover_aut_order == 2 * rec.aut_order;
  if (!rec.connected) rec.reasons |= kDisconnected;
  if (rec.bipartite && rec.aut_order > 1) rec.reasons |= kBipartiteNontrivialAut;
  if (!rec.twin_free) rec.reasons |= kTwins;

  rec.in_S1 = rec.connected && !rec.bipartite && rec.twin_free;
  if (!rec.in_S1) return rec;
  rec.in_S2 = rec.b_order == ctx.r_iota_order();

  if (!ctx.automorphisms()) {
    rec.in_S3 = Tri::indeterminate;
  } else {
    rec.in_S3prime = s3prime_membership(ctx, s);
    BigInt nor_order = rec.b_order <= ctx.caps().b_elements ? regular_normalizer(ctx, b).order()
                                                            : detail::normalizer_order_by_candidates(ctx, b);
    rec.in_S3 = tri(nor_order > ctx.r_iota_order());
  }
  if (rec.in_S2) return rec;  // B = R⋊⟨ι⟩ leaves no room for S₄ or S₅ witnesses

  const S4S5Result scan = s4_s5_membership(ctx, b);
  rec.in_S4 = scan.s4;
  rec.in_S5 = scan.s5;
  rec.intermediate_subgroups = scan.intermediate;
  return rec;
}

inline StabilityRecord classify(const AbelianGroup& g, const ElementSet& s, Caps caps = {}) {
  return classify(StabilityContext(g, caps), s);
}

// ---------------------------------------------------------------------------
// σ(S, u, j) and Ψ sets

/// N ≤ G with G/N cyclic of order b ≥ 2. Cosets O_j = N + γ_j where
/// γ_j is the least element of the coset j·γ₁ + N.
class SigmaContext {
 public:
  SigmaContext(AbelianGroup g, ElementSet n) : g_(std::move(g)), n_(std::move(n)) {
    const int r = g_.order();
    if (n_.size() != static_cast<std::size_t>(r)) throw DomainError("sigma: subgroup universe mismatch");
    if (!n_.test(0)) throw DomainError("sigma: N is not a subgroup");
    for (int a : members_of(n_))
      for (int c : members_of(n_))
        if (!n_.test(static_cast<std::size_t>(g_.add(a, c)))) throw DomainError("sigma: N is not a subgroup");
    const int n_order = static_cast<int>(n_.count());
    b_ = r / n_order;
    if (b_ < 2) throw DomainError("sigma: G/N must have order at least 2");
    int gen = -1;
    for (int x = 0; x < r && gen < 0; ++x)
      if (quotient_order(x) == b_) gen = x;
    if (gen < 0) throw DomainError("sigma: G/N is not cyclic");
    label_.assign(static_cast<std::size_t>(r), -1);
    int rep = 0;
    for (int j = 0; j < b_; ++j) {
      ElementSet coset = g_.translate(n_, rep);
      gamma_.push_back(static_cast<int>(coset.find_first()));
      for (int x : members_of(coset)) label_[static_cast<std::size_t>(x)] = j;
      cosets_.push_back(std::move(coset));
      rep = g_.add(rep, gen);
    }
  }

  const AbelianGroup& group() const { return g_; }
  const ElementSet& subgroup() const { return n_; }
  int b() const { return b_; }
  int gamma(int j) const { return gamma_.at(static_cast<std::size_t>(j)); }
  const ElementSet& coset(int j) const { return cosets_.at(static_cast<std::size_t>(j)); }
  /// j with x ∈ O_j.
  int label(int x) const { return label_.at(static_cast<std::size_t>(x)); }

 private:
  int quotient_order(int x) const {
    int k = 1, y = x;
    while (!n_.test(static_cast<std::size_t>(y))) {
      y = g_.add(y, x);
      ++k;
    }
    return k;
  }

  AbelianGroup g_;
  ElementSet n_;
  int b_ = 0;
  std::vector<int> gamma_;
  std::vector<ElementSet> cosets_;
  std::vector<int> label_;
};

/// Subgroups N with G/N cyclic of order ≥ 2.
inline std::vector<Subgroup> cyclic_quotient_subgroups(const AbelianGroup& g, std::size_t cap = kDefaultGroupCap) {
  std::vector<Subgroup> out;
  for (auto& n : subgroups(g, cap)) {
    if (n.order() == g.order()) continue;
    try {
      SigmaContext ctx(g, n.members);
      out.push_back(std::move(n));
    } catch (const DomainError&) {
    }
  }
  return out;
}

/// σ(S, u, j) = S ∩ (S + u) ∩ O_j.
inline ElementSet sigma(const SigmaContext& ctx, const ElementSet& s, int u, int j) {
  if (j < 0 || j >= ctx.b()) throw DomainError("sigma: j out of range");
  if (!ctx.group().is_inverse_closed(s)) throw PreconditionError("sigma: S is not inverse-closed");
  return s & ctx.group().translate(s, u) & ctx.coset(j);
}

struct PsiResult {
  BigInt count;      // |Ψ_i({u, v})|
  BigInt total;      // 2^{c(G)}
  int c = 0;
  int b = 0;
  bool vacuous = false;       // bound ≥ total, i.e. 2b ≤ 25
  bool within_bound = false;  // count ≤ 2^{c − 2b/25 + 1}

  double log2_bound() const { return c - 2.0 * b / 25.0 + 1.0; }
};

/// Brute-force |Ψ_i({u, v})| over all inverse-closed S, with the bound
/// 2^{c(G) − 2b/25 + 1} compared exactly as count^25 ≤ 2^{25(c+1) − 2b}.
inline PsiResult psi_census(const SigmaContext& ctx, int i, int u, int v, int max_bits = 24) {
  const AbelianGroup& g = ctx.group();
  const int b = ctx.b();
  if (i <= 0 || i >= b) throw DomainError("psi: i must be a nonzero residue mod b");
  if (u == v || ctx.label(u) != i || ctx.label(v) != i) throw DomainError("psi: u and v must be distinct elements of O_i");
  const InverseClosedSpace space(g);
  if (space.bits() > max_bits) throw CapExceeded("psi: too many inverse-closed sets", std::size_t{1} << max_bits);
  PsiResult out;
  out.c = space.bits();
  out.b = b;
  out.total = space.size();
  std::uint64_t count = 0;
  const std::uint64_t n = space.count();
  for (std::uint64_t k = 0; k < n; ++k) {
    const ElementSet s = space.at(k);
    const ElementSet su = s & g.translate(s, u);
    const ElementSet sv = s & g.translate(s, v);
    bool all = true;
    for (int j = 0; j < b && all; ++j) {
      if (j == 0 || j == i) continue;
      all = (su & ctx.coset(j)).count() == (sv & ctx.coset(j)).count();
    }
    count += all;
  }
  out.count = count;
  out.vacuous = 2 * b <= 25;
  const long long e = 25LL * (out.c + 1) - 2LL * b;
  if (e < 0)
    out.within_bound = count == 0;
  else
    out.within_bound = boost::multiprecision::pow(out.count, 25) <= (BigInt(1) << static_cast<unsigned>(e));
  return out;
}

}  // namespace cayleystab
