#pragma once

// Exact verification suite over all abelian groups up to an order limit.
// Each check has its own ceiling on |G| (brute force over 2^|G| subsets, or
// classification of every connection set); groups above it are skipped and
// counted as such.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cayleystab/abelian_group.hpp"
#include "cayleystab/bicoset.hpp"
#include "cayleystab/census.hpp"
#include "cayleystab/connection_set.hpp"
#include "cayleystab/graph.hpp"
#include "cayleystab/stability.hpp"

namespace cayleystab {

struct VerificationCheck {
  std::string name;
  std::string statement;
  int order_ceiling = 0;
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  std::uint64_t skipped = 0;
  std::vector<std::string> examples;  // first few failures

  VerificationCheck(std::string n, std::string st, int ceiling)
      : name(std::move(n)), statement(std::move(st)), order_ceiling(ceiling) {}

  bool passed() const { return failures == 0; }
  void fail(std::string what) {
    ++failures;
    if (examples.size() < 5) examples.push_back(std::move(what));
  }
};

namespace detail {

inline std::vector<AbelianGroup> groups_up_to(int limit, int ceiling, VerificationCheck& chk) {
  std::vector<AbelianGroup> out;
  for (auto& g : all_abelian_groups(limit)) {
    if (g.order() <= ceiling)
      out.push_back(std::move(g));
    else
      ++chk.skipped;
  }
  return out;
}

}  // namespace detail

/// Counting all 2^|G| subsets, the inverse-closed ones number 2^{c(G)}.
inline VerificationCheck verify_inverse_closed_counts(int limit) {
  VerificationCheck chk{"inverse-closed-count", "#inverse-closed subsets = 2^c(G)", 20};
  for (const auto& g : detail::groups_up_to(limit, chk.order_ceiling, chk)) {
    const int r = g.order();
    std::uint64_t count = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
      bool closed = true;
      for (int x = 0; x < r && closed; ++x)
        if (((mask >> x) & 1U) && !((mask >> g.neg(x)) & 1U)) closed = false;
      count += closed;
    }
    ++chk.checked;
    if (BigInt(count) != count_inverse_closed(g)) chk.fail(g.name() + ": " + std::to_string(count));
  }
  return chk;
}

/// Brute-force count of subsets fixed by ⟨R(z), ι⟩ against 2^{r/4+|I(G)|/2},
/// for every involution z ≠ 0. The first check asks for equality, the
/// second only for the count not exceeding the formula. The count falls
/// short exactly when z has no square root w (2w = z).
inline std::vector<VerificationCheck> verify_stabilized_counts(int limit) {
  VerificationCheck eq{"stabilized-subsets", "#subsets fixed by <R(z),iota> = 2^(r/4+|I(G)|/2)", 20};
  VerificationCheck upper{"stabilized-subsets-upper", "#subsets fixed by <R(z),iota> <= 2^(r/4+|I(G)|/2)", 20};
  for (const auto& g : detail::groups_up_to(limit, eq.order_ceiling, eq)) {
    const int r = g.order();
    for (int z = 1; z < r; ++z) {
      if (g.neg(z) != z) continue;
      std::uint64_t count = 0;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
        bool fixed = true;
        for (int x = 0; x < r && fixed; ++x)
          if ((mask >> x) & 1U) fixed = ((mask >> g.add(x, z)) & 1U) && ((mask >> g.neg(x)) & 1U);
        count += fixed;
      }
      ++eq.checked;
      ++upper.checked;
      const StabilizedCount sc = stabilized_count(g, z);
      if (BigInt(count) != sc.count) throw InternalError("stabilized_count disagrees with brute force on " + g.name());
      const auto formula = sc.formula();
      const std::string what = g.name() + " z=" + format_element(g, z) + ": count " + std::to_string(count) + ", formula 2^(" +
                               std::to_string(sc.formula_exponent_x4) + "/4)";
      if (!formula || *formula != count) eq.fail(what);
      if (sc.orbit_exponent_x4 > sc.formula_exponent_x4) upper.fail(what);
    }
  }
  upper.skipped = eq.skipped;
  return {eq, upper};
}

/// For every α = R(g)τ in Hol(G), Fix_G(α) is empty or a coset of Fix_G(τ).
inline VerificationCheck verify_fixed_point_cosets(int limit) {
  VerificationCheck chk{"fixed-point-cosets", "Fix(alpha) is empty or a coset of Fix(tau)", 12};
  for (const auto& g : detail::groups_up_to(limit, chk.order_ceiling, chk))
    for (const auto& alpha : holomorph(g)) {
      ElementSet fix = g.empty_set();
      for (int x = 0; x < g.order(); ++x)
        if (alpha(g, x) == x) fix.set(static_cast<std::size_t>(x));
      ++chk.checked;
      if (fix.any() && !is_coset_of(g, fix, fixed_points(g, alpha.twist)))
        chk.fail(g.name() + " translation " + format_element(g, alpha.translation));
    }
  return chk;
}

/// Connected non-bipartite Γ: D(Γ) connected and |Aut(D(Γ))| = 2|B(S)|.
/// Twin-free Γ: B(S) acts faithfully on G⁺.
inline VerificationCheck verify_cover_block_stabilizer(int limit, const Caps& caps = {}) {
  VerificationCheck chk{"cover-block-stabilizer", "Aut(D) = B x| C2 when connected non-bipartite; B faithful on G+ when twin-free", 10};
  for (const auto& g : detail::groups_up_to(limit, chk.order_ceiling, chk)) {
    const StabilityContext ctx(g, caps);
    const int r = g.order();
    for_each_inverse_closed(g, [&](const ElementSet& s) {
      const LabeledGraph gamma = cayley_graph(g, s);
      const LabeledGraph cover = double_cover(gamma);
      const PermutationGroup b = b_group(ctx, s);
      if (is_connected(gamma) && !is_bipartite(gamma)) {
        ++chk.checked;
        const BigInt a = automorphism_group(cover, {}, caps.aut_degree).order();
        if (!is_connected(cover) || a != 2 * b.order()) chk.fail(g.name() + " " + format_set(g, s));
      }
      if (is_twin_free(gamma)) {
        ++chk.checked;
        std::vector<Permutation> restricted;
        for (const auto& p : b.generators()) {
          std::vector<int> img(p.images().begin(), p.images().begin() + r);
          restricted.emplace_back(std::move(img));
        }
        if (PermutationGroup(r, restricted).order() != b.order()) chk.fail(g.name() + " not faithful " + format_set(g, s));
      }
    });
  }
  return chk;
}

/// The bi-coset model of D(Cay(G, S)) built from X = B(S): φ is an
/// isomorphism and K R(g) H ⊆ Y ⟺ K R(-g) H ⊆ Y. Sets with |B(S)| above
/// the element cap are skipped.
inline VerificationCheck verify_bicoset_model(int limit, const Caps& caps = {}) {
  VerificationCheck chk{"bicoset-model", "phi is an isomorphism onto the bi-coset graph; double cosets are inversion-symmetric", 8};
  for (const auto& g : detail::groups_up_to(limit, chk.order_ceiling, chk)) {
    const StabilityContext ctx(g, caps);
    for_each_inverse_closed(g, [&](const ElementSet& s) {
      const PermutationGroup b = b_group(ctx, s);
      if (b.order() > caps.b_elements) {
        ++chk.skipped;
        return;
      }
      ++chk.checked;
      const BiCosetCheck res = check_bicoset_isomorphism(g, s, b, caps.b_elements);
      if (!res.ok()) chk.fail(g.name() + " " + format_set(g, s));
    });
  }
  return chk;
}

/// Checks read off exhaustive censuses: S₂ members are stable with
/// |Aut(D)| = 2|R⋊ι|, S₃ ⊆ S₃′, determinate (S₁−S₂)−S₃ ⊆ S₄ ∪ S₅, the
/// non-vacuous trivial-instability bounds, and stability of S₁ on odd order.
inline std::vector<VerificationCheck> verify_census_invariants(int limit, const Caps& caps = {}, unsigned workers = 1) {
  VerificationCheck s2{"s2-stable", "S2 members have |Aut(D)| = 2|R x| iota| and are stable", 10};
  VerificationCheck s3{"s3-in-s3prime", "S3 is contained in S3'", 10};
  VerificationCheck red{"s4-s5-reduction", "determinate members of (S1-S2)-S3 lie in S4 u S5", 10};
  VerificationCheck bnd{"trivial-instability-bounds", "trivial-instability proportions within their bounds when non-vacuous", 10};
  VerificationCheck odd{"odd-order-stability", "every S in S1 is stable on groups of odd order", 15};
  CensusOptions opt;
  opt.caps = caps;
  opt.workers = workers;
  for (const auto& g : all_abelian_groups(limit)) {
    const bool small = g.order() <= 10;
    const bool odd_case = g.order() % 2 == 1 && g.order() <= odd.order_ceiling;
    if (!small) {
      ++s2.skipped;
      ++s3.skipped;
      ++red.skipped;
      ++bnd.skipped;
    }
    if (!odd_case) ++odd.skipped;
    if (!small && !odd_case) continue;
    const CensusReport rep = exhaustive_census(g, opt);
    const auto& k = rep.counts;
    if (small) {
      s2.checked += k.s2;
      if (k.s2_cover_violations || k.s2_outside_s1) s2.fail(g.name());
      s3.checked += k.s3;
      if (k.s3_outside_s3prime) s3.fail(g.name());
      red.checked += k.reduction_checked;
      red.skipped += k.reduction_indeterminate;
      if (k.reduction_violations) red.fail(g.name() + ": " + std::to_string(k.reduction_violations));
      for (const auto& b : rep.bound_checks) {
        if (b.vacuous) {
          ++bnd.skipped;
          continue;
        }
        ++bnd.checked;
        if (!b.holds) bnd.fail(g.name() + " " + b.bound);
      }
    }
    if (odd_case) {
      odd.checked += k.s1;
      if (k.nontrivially_unstable) odd.fail(g.name() + ": " + std::to_string(k.nontrivially_unstable));
    }
  }
  return {s2, s3, red, bnd, odd};
}

inline std::vector<VerificationCheck> verify_all(int limit, const Caps& caps = {}, unsigned workers = 1) {
  std::vector<VerificationCheck> out;
  out.push_back(verify_inverse_closed_counts(limit));
  for (auto& c : verify_stabilized_counts(limit)) out.push_back(std::move(c));
  out.push_back(verify_fixed_point_cosets(limit));
  out.push_back(verify_cover_block_stabilizer(limit, caps));
  out.push_back(verify_bicoset_model(limit, caps));
  for (auto& c : verify_census_invariants(limit, caps, workers)) out.push_back(std::move(c));
  return out;
}

}  // namespace cayleystab
