#include <algorithm>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "cayleystab/stability.hpp"
#include "oracles.hpp"

namespace cs = cayleystab;
using cs::AbelianGroup;
using cs::Tri;

namespace {

cs::ElementSet set_of(const AbelianGroup& g, std::vector<int> m) { return cs::make_set(static_cast<std::size_t>(g.order()), m); }

oracle::Matrix cayley(const AbelianGroup& g, const cs::ElementSet& s) {
  oracle::NaiveGroup naive(g.invariant_factors());
  return oracle::cayley_matrix(naive, cs::members_of(s));
}

oracle::Matrix cover_matrix(const oracle::Matrix& a) {
  const std::size_t r = a.size();
  oracle::Matrix d(2 * r, std::vector<char>(2 * r, 0));
  for (std::size_t x = 0; x < r; ++x)
    for (std::size_t y = 0; y < r; ++y)
      if (a[x][y]) d[x][r + y] = d[r + y][x] = 1;
  return d;
}

/// Definitions of S₄ and S₅ evaluated on a brute-force subgroup lattice.
std::pair<bool, bool> brute_s4_s5(const AbelianGroup& g, const cs::PermutationGroup& b) {
  const int r = g.order();
  std::vector<oracle::Perm> gens;
  for (const auto& p : b.generators()) gens.push_back(p.images());
  const auto all = oracle::closure(2 * r, gens);
  std::vector<oracle::Perm> elems(all.begin(), all.end());
  oracle::NaiveGroup naive(g.invariant_factors());
  auto translation = [&](int t) {
    oracle::Perm p(static_cast<std::size_t>(2 * r));
    for (int x = 0; x < r; ++x) {
      p[static_cast<std::size_t>(x)] = naive.add(x, t);
      p[static_cast<std::size_t>(r + x)] = r + naive.add(x, t);
    }
    return p;
  };
  oracle::Perm iota(static_cast<std::size_t>(2 * r));
  for (int x = 0; x < r; ++x) {
    iota[static_cast<std::size_t>(x)] = naive.neg(x);
    iota[static_cast<std::size_t>(r + x)] = r + naive.neg(x);
  }
  std::set<oracle::Perm> reg, r_iota;
  for (int t = 0; t < r; ++t) {
    reg.insert(translation(t));
    r_iota.insert(translation(t));
    r_iota.insert(oracle::compose(iota, translation(t)));
  }
  auto normalizes = [&](const oracle::Perm& x) {
    oracle::Perm inv(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) inv[static_cast<std::size_t>(x[i])] = static_cast<int>(i);
    for (const auto& t : reg)
      if (!reg.count(oracle::compose(oracle::compose(inv, t), x))) return false;
    return true;
  };
  const auto lattice = oracle::overgroups(elems, reg);
  bool s4 = false, s5 = false;
  for (const auto& x : lattice) {
    if (x == reg) continue;
    std::set<oracle::Perm> nx;
    for (const auto& e : x)
      if (normalizes(e)) nx.insert(e);
    std::vector<const std::set<oracle::Perm>*> between;
    for (const auto& y : lattice)
      if (y != reg && y != x && std::includes(x.begin(), x.end(), y.begin(), y.end())) between.push_back(&y);
    if (between.empty() && nx == reg) s4 = true;
    if (nx == r_iota && nx != reg && nx != x && between.size() == 1 && *between[0] == nx) s5 = true;
  }
  return {s4, s5};
}

/// Every set for |G| ≤ 7; a deterministic stride through the index space at order 8.
template <class F>
void for_each_checked(const AbelianGroup& g, F&& f) {
  const cs::InverseClosedSpace space(g);
  const std::uint64_t stride = g.order() >= 8 ? 5 : 1;
  for (std::uint64_t i = 0; i < space.count(); i += stride) f(space.at(i));
}

TEST(BGroup, Examples) {
  auto c5 = AbelianGroup::make({5});
  EXPECT_EQ(cs::b_group(c5, set_of(c5, {1, 4})).order(), 10);
  EXPECT_EQ(cs::b_group(c5, set_of(c5, {})).order(), 14400);
  auto c6 = AbelianGroup::make({6});
  const auto s = set_of(c6, {1, 5});
  EXPECT_EQ(cs::b_group(c6, s).order(), oracle::block_preserving_cover_automorphisms(cayley(c6, s)));
}

TEST(BGroup, MatchesBlockPreservingBruteForceUpTo8) {
  for (const auto& g : cs::all_abelian_groups(8)) {
    cs::StabilityContext ctx(g);
    for_each_checked(g, [&](const cs::ElementSet& s) {
      EXPECT_EQ(cs::b_group(ctx, s).order(), oracle::block_preserving_cover_automorphisms(cayley(g, s))) << g.name() << " " << cs::to_hex(s);
    });
  }
}

TEST(Classify, Examples) {
  auto c5 = AbelianGroup::make({5});
  auto rec = cs::classify(c5, set_of(c5, {1, 4}));
  EXPECT_TRUE(rec.stable);
  EXPECT_TRUE(rec.in_S1);
  EXPECT_TRUE(rec.in_S2);
  EXPECT_EQ(rec.in_S3, Tri::no);
  EXPECT_EQ(rec.in_S4, Tri::no);
  EXPECT_EQ(rec.in_S5, Tri::no);

  auto c4 = AbelianGroup::make({4});
  auto sq = cs::classify(c4, set_of(c4, {1, 3}));
  EXPECT_FALSE(sq.stable);
  EXPECT_TRUE(sq.reasons & cs::kBipartiteNontrivialAut);
  EXPECT_TRUE(sq.reasons & cs::kTwins);
  EXPECT_FALSE(sq.in_S1);

  auto k5 = cs::classify(c5, set_of(c5, {1, 2, 3, 4}));
  EXPECT_TRUE(k5.stable);
  EXPECT_EQ(k5.aut_order, 120);
  EXPECT_EQ(k5.cover_aut_order, 240);
  EXPECT_TRUE(k5.in_S1);
  EXPECT_FALSE(k5.in_S2);
  EXPECT_EQ(k5.in_S3, Tri::yes);
  EXPECT_TRUE(k5.in_S3prime);

  auto c2 = AbelianGroup::make({2, 2});
  auto e2 = cs::classify(c2, set_of(c2, {1, 2, 3}));
  EXPECT_TRUE(e2.exponent_two);
  EXPECT_THROW(cs::classify(c5, set_of(c5, {1})), cs::PreconditionError);
}

TEST(Classify, AgreesWithBruteForceUpTo8) {
  for (const auto& g : cs::all_abelian_groups(8)) {
    cs::StabilityContext ctx(g);
    oracle::NaiveGroup naive(g.invariant_factors());
    const auto hol = oracle::brute_holomorph(naive);
    std::vector<int> neg(static_cast<std::size_t>(g.order()));
    for (int x = 0; x < g.order(); ++x) neg[static_cast<std::size_t>(x)] = naive.neg(x);
    std::vector<int> id(neg.size());
    std::iota(id.begin(), id.end(), 0);

    for_each_checked(g, [&](const cs::ElementSet& s) {
      const auto rec = cs::classify(ctx, s);
      const auto a = cayley(g, s);
      const auto aut = oracle::brute_automorphisms(a).size();
      EXPECT_EQ(rec.aut_order, aut);
      if (g.order() <= 4) {
        EXPECT_EQ(rec.cover_aut_order, oracle::brute_automorphisms(cover_matrix(a)).size());
      }
      EXPECT_EQ(rec.stable, rec.cover_aut_order == 2 * rec.aut_order);

      bool s3p = false;
      for (const auto& p : hol) {
        if (p == id || p == neg) continue;
        bool fixed = true;
        for (int x : cs::members_of(s)) fixed = fixed && s.test(static_cast<std::size_t>(p[static_cast<std::size_t>(x)]));
        s3p = s3p || fixed;
      }
      EXPECT_EQ(cs::s3prime_membership(ctx, s), s3p) << g.name() << " " << cs::to_hex(s);
      EXPECT_EQ(rec.in_S3prime, rec.in_S1 && s3p);

      if (!rec.in_S1) {
        EXPECT_EQ(rec.in_S3, Tri::no);
        EXPECT_EQ(rec.in_S4, Tri::no);
        EXPECT_EQ(rec.in_S5, Tri::no);
        return;
      }
      const auto b = cs::b_group(ctx, s);
      if (b.order() <= 400) {
        const auto [s4, s5] = brute_s4_s5(g, b);
        EXPECT_EQ(rec.in_S4, cs::tri(s4)) << g.name() << " " << cs::to_hex(s);
        EXPECT_EQ(rec.in_S5, cs::tri(s5)) << g.name() << " " << cs::to_hex(s);
      }
    });
  }
}

TEST(Classify, NormalizerByCandidatesMatchesElementFilter) {
  for (const auto& g : cs::all_abelian_groups(9)) {
    cs::StabilityContext ctx(g);
    cs::for_each_inverse_closed(g, [&](const cs::ElementSet& s) {
      const auto b = cs::b_group(ctx, s);
      if (b.order() > cs::kDefaultElementCap) return;
      EXPECT_EQ(cs::detail::normalizer_order_by_candidates(ctx, b), cs::regular_normalizer(ctx, b).order()) << g.name();
    });
  }
}

TEST(Classify, RecordInvariantsUpTo10) {
  for (const auto& g : cs::all_abelian_groups(10)) {
    cs::StabilityContext ctx(g);
    cs::for_each_inverse_closed(g, [&](const cs::ElementSet& s) {
      const auto rec = cs::classify(ctx, s);
      if (rec.in_S2) {
        EXPECT_TRUE(rec.in_S1);
        EXPECT_TRUE(rec.stable);
        EXPECT_EQ(rec.cover_aut_order, 2 * ctx.r_iota_order());
      }
      if (rec.in_S3 == Tri::yes) {
        EXPECT_TRUE(rec.in_S3prime);
      }
    });
  }
}

TEST(S3Prime, Examples) {
  auto c5 = AbelianGroup::make({5});
  EXPECT_TRUE(cs::s3prime_membership(c5, set_of(c5, {})));
  EXPECT_TRUE(cs::s3prime_membership(c5, set_of(c5, {1, 2, 3, 4})));
  auto c7 = AbelianGroup::make({7});
  EXPECT_FALSE(cs::s3prime_membership(c7, set_of(c7, {1, 6})));
}

TEST(S4S5, Examples) {
  auto c5 = AbelianGroup::make({5});
  cs::StabilityContext ctx(c5);
  auto r_iota = cs::regular_with_inversion(c5, 2);
  auto res = cs::s4_s5_membership(ctx, r_iota);
  EXPECT_EQ(res.s4, Tri::no);
  EXPECT_EQ(res.s5, Tri::no);
  EXPECT_TRUE(res.complete);

  cs::Caps small;
  small.b_elements = 1000;
  cs::StabilityContext tight(c5, small);
  auto big = cs::s4_s5_membership(tight, cs::b_group(tight, set_of(c5, {})));
  EXPECT_EQ(big.s4, Tri::indeterminate);
  EXPECT_EQ(big.s5, Tri::indeterminate);

  cs::Caps few;
  few.intermediate = 1;
  auto c4 = AbelianGroup::make({4});
  cs::StabilityContext ctx4(c4, few);
  auto k4 = cs::s4_s5_membership(ctx4, cs::b_group(ctx4, set_of(c4, {1, 2, 3})));
  EXPECT_FALSE(k4.complete);
  EXPECT_EQ(k4.s4, Tri::indeterminate);
}

// ---------------------------------------------------------------------------

TEST(Sigma, Examples) {
  auto c6 = AbelianGroup::make({6});
  cs::SigmaContext ctx(c6, set_of(c6, {0, 3}));
  EXPECT_EQ(ctx.b(), 3);
  EXPECT_EQ(cs::members_of(ctx.coset(1)), (std::vector<int>{1, 4}));
  EXPECT_EQ(cs::members_of(ctx.coset(2)), (std::vector<int>{2, 5}));
  for (int j = 0; j < 3; ++j) {
    EXPECT_TRUE(cs::sigma(ctx, set_of(c6, {}), 1, j).none());
    EXPECT_TRUE(cs::sigma(ctx, set_of(c6, {1, 5}), 3, j).none());
    EXPECT_EQ(cs::sigma(ctx, set_of(c6, {0, 1, 2, 3, 4, 5}), 2, j), ctx.coset(j));
  }
  EXPECT_THROW(cs::sigma(ctx, set_of(c6, {1, 5}), 3, 3), cs::DomainError);
  EXPECT_THROW(cs::SigmaContext(c6, set_of(c6, {0, 1})), cs::DomainError);
  auto c2c2 = AbelianGroup::make({2, 2});
  EXPECT_THROW(cs::SigmaContext(c2c2, set_of(c2c2, {0})), cs::DomainError);  // quotient not cyclic
}

TEST(Sigma, LabelsRespectAdditionAndFactoredForm) {
  for (int n : {6, 8, 9, 12}) {
    auto g = AbelianGroup::make({n});
    for (const auto& sub : cs::cyclic_quotient_subgroups(g)) {
      cs::SigmaContext ctx(g, sub.members);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) EXPECT_EQ(ctx.label(g.add(x, y)), (ctx.label(x) + ctx.label(y)) % ctx.b());
      cs::for_each_inverse_closed(g, [&](const cs::ElementSet& s) {
        for (int u = 0; u < n; u += 2)
          for (int j = 0; j < ctx.b(); ++j) {
            const int i = ctx.label(u);
            const auto left = s & ctx.coset(j);
            const auto shifted = g.translate(s & ctx.coset(((j - i) % ctx.b() + ctx.b()) % ctx.b()), u);
            EXPECT_EQ(cs::sigma(ctx, s, u, j), left & shifted);
          }
      });
    }
  }
}

TEST(Psi, Examples) {
  auto c6 = AbelianGroup::make({6});
  cs::SigmaContext two(c6, set_of(c6, {0, 2, 4}));
  ASSERT_EQ(two.b(), 2);
  auto p = cs::psi_census(two, 1, 1, 3);
  EXPECT_EQ(p.count, p.total);  // empty conjunction

  cs::SigmaContext three(c6, set_of(c6, {0, 3}));
  auto q = cs::psi_census(three, 1, 1, 4);
  // Independent count over all 64 subsets.
  oracle::NaiveGroup naive({6});
  std::uint64_t expected = 0;
  for (std::uint64_t m = 0; m < 64; ++m) {
    bool closed = true;
    for (int x = 0; x < 6; ++x)
      if ((m >> x) & 1) closed = closed && ((m >> naive.neg(x)) & 1);
    if (!closed) continue;
    auto count = [&](int u) {
      int c = 0;
      for (int x : {2, 5})  // O_2
        c += ((m >> x) & 1) && ((m >> naive.add(x, 6 - u)) & 1);
      return c;
    };
    expected += count(1) == count(4);
  }
  EXPECT_EQ(q.count, expected);
  EXPECT_TRUE(q.vacuous);

  auto c12 = AbelianGroup::make({12});
  cs::SigmaContext four(c12, set_of(c12, {0, 4, 8}));
  auto w = cs::psi_census(four, 1, 1, 5);
  EXPECT_TRUE(w.vacuous);
  EXPECT_TRUE(w.within_bound);
  EXPECT_THROW(cs::psi_census(four, 0, 1, 5), cs::DomainError);
  EXPECT_THROW(cs::psi_census(four, 1, 1, 2), cs::DomainError);
}

}  // namespace
