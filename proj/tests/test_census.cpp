#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "cayleystab/census.hpp"
#include "cayleystab/serialize.hpp"
#include "cayleystab/verification.hpp"
#include "oracles.hpp"

using namespace cayleystab;

namespace {

AbelianGroup G(const char* spec) { return AbelianGroup::parse(spec); }

// Brute-force tallies over the naive group: every negation-closed subset,
// Aut(Γ) by filtering r! permutations and the block-preserving part of
// Aut(D(Γ)) by the column-matching count. Non-S₁ sets count as unstable.
struct OracleTally {
  std::uint64_t examined = 0, disconnected = 0, connected_bipartite = 0, not_twin_free = 0, trivially_unstable = 0;
  std::uint64_t s1 = 0, s2 = 0, stable = 0, nontrivially_unstable = 0;
};

bool oracle_connected(const oracle::Matrix& a) {
  std::vector<char> seen(a.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v = 0; v < a.size(); ++v)
      if (a[u][v] && !seen[v]) seen[v] = 1, stack.push_back(v);
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c; });
}

bool oracle_bipartite(const oracle::Matrix& a) {
  std::vector<int> side(a.size(), -1);
  for (std::size_t s = 0; s < a.size(); ++s) {
    if (side[s] >= 0) continue;
    side[s] = 0;
    std::vector<std::size_t> stack{s};
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < a.size(); ++v) {
        if (!a[u][v]) continue;
        if (side[v] < 0) side[v] = 1 - side[u], stack.push_back(v);
        else if (side[v] == side[u]) return false;
      }
    }
  }
  return true;
}

bool oracle_twin_free(const oracle::Matrix& a) {
  std::set<std::vector<char>> rows(a.begin(), a.end());
  return rows.size() == a.size();
}

OracleTally oracle_census(const std::vector<int>& factors) {
  const oracle::NaiveGroup g(factors);
  const int r = g.order();
  bool exponent_two = true;
  for (int x = 0; x < r; ++x) exponent_two = exponent_two && g.neg(x) == x;
  const unsigned long long r_iota = exponent_two ? r : 2ULL * r;
  OracleTally t;
  for (std::uint64_t m = 0; m < (1ULL << r); ++m) {
    std::vector<int> s;
    bool closed = true;
    for (int x = 0; x < r; ++x)
      if ((m >> x) & 1) {
        s.push_back(x);
        closed = closed && ((m >> g.neg(x)) & 1);
      }
    if (!closed) continue;
    ++t.examined;
    const auto a = oracle::cayley_matrix(g, s);
    const bool conn = oracle_connected(a), bip = oracle_bipartite(a), tf = oracle_twin_free(a);
    t.disconnected += !conn;
    t.connected_bipartite += conn && bip;
    t.not_twin_free += !tf;
    if (!conn || bip || !tf) {
      ++t.trivially_unstable;
      continue;
    }
    ++t.s1;
    const auto b = oracle::block_preserving_cover_automorphisms(a);
    const auto aut = oracle::brute_automorphisms(a).size();
    t.s2 += b == r_iota;
    if (b == aut)
      ++t.stable;
    else
      ++t.nontrivially_unstable;
  }
  return t;
}

// Orbits of the brute-force holomorph acting on Cayley graphs by relabeling
// vertices; the image of Cay(G, S) is the Cayley graph on the neighbours of 0.
std::size_t oracle_hol_orbit_count(const std::vector<int>& factors) {
  const oracle::NaiveGroup g(factors);
  const int r = g.order();
  const auto hol = oracle::brute_holomorph(g);
  std::set<std::uint64_t> seen;
  std::size_t orbits = 0;
  for (std::uint64_t m = 0; m < (1ULL << r); ++m) {
    bool closed = true;
    for (int x = 0; x < r && closed; ++x)
      if ((m >> x) & 1) closed = (m >> g.neg(x)) & 1;
    if (!closed || seen.count(m)) continue;
    ++orbits;
    for (const auto& p : hol) {
      // edge x ~ x + s becomes p(x) ~ p(x + s); read off the neighbours of 0
      oracle::Perm inv(p.size());
      for (int x = 0; x < r; ++x) inv[static_cast<std::size_t>(p[static_cast<std::size_t>(x)])] = x;
      const int pre0 = inv[0];
      std::uint64_t img = 0;
      for (int s = 0; s < r; ++s)
        if ((m >> s) & 1) img |= 1ULL << p[static_cast<std::size_t>(g.add(pre0, s))];
      seen.insert(img);
    }
  }
  return orbits;
}

// Isomorphism classes of Cay(G, S) over negation-closed S.
std::size_t oracle_form_count(const std::vector<int>& factors) {
  const oracle::NaiveGroup g(factors);
  const int r = g.order();
  std::vector<oracle::Matrix> reps;
  for (std::uint64_t m = 0; m < (1ULL << r); ++m) {
    std::vector<int> s;
    bool closed = true;
    for (int x = 0; x < r; ++x)
      if ((m >> x) & 1) {
        s.push_back(x);
        closed = closed && ((m >> g.neg(x)) & 1);
      }
    if (!closed) continue;
    const auto a = oracle::cayley_matrix(g, s);
    if (std::none_of(reps.begin(), reps.end(), [&](const oracle::Matrix& b) { return oracle::brute_isomorphic(a, b); }))
      reps.push_back(a);
  }
  return reps.size();
}

void expect_matches_oracle(const char* spec, const std::vector<int>& factors) {
  const CensusReport rep = exhaustive_census(G(spec));
  const OracleTally o = oracle_census(factors);
  const auto& k = rep.counts;
  EXPECT_EQ(k.examined, o.examined) << spec;
  EXPECT_EQ(k.disconnected, o.disconnected) << spec;
  EXPECT_EQ(k.connected_bipartite, o.connected_bipartite) << spec;
  EXPECT_EQ(k.not_twin_free, o.not_twin_free) << spec;
  EXPECT_EQ(k.trivially_unstable, o.trivially_unstable) << spec;
  EXPECT_EQ(k.s1, o.s1) << spec;
  EXPECT_EQ(k.s2, o.s2) << spec;
  EXPECT_EQ(k.stable, o.stable) << spec;
  EXPECT_EQ(k.nontrivially_unstable, o.nontrivially_unstable) << spec;
  EXPECT_TRUE(rep.consistent()) << spec;
  EXPECT_TRUE(k.cross_checks_pass()) << spec;
}

}  // namespace

TEST(InverseClosedSpace, CountsAndDistinctMembers) {
  EXPECT_EQ(InverseClosedSpace(G("C5")).count(), 8u);
  EXPECT_EQ(InverseClosedSpace(G("C4")).count(), 8u);
  EXPECT_EQ(InverseClosedSpace(G("C1")).count(), 2u);
  for (const auto& g : all_abelian_groups(16)) {
    const InverseClosedSpace space(g);
    if (space.bits() > 16) continue;
    std::set<std::string> seen;
    for (std::uint64_t i = 0; i < space.count(); ++i) {
      const ElementSet s = space.at(i);
      EXPECT_TRUE(g.is_inverse_closed(s));
      EXPECT_EQ(space.index_of(s), i);
      seen.insert(to_hex(s));
    }
    EXPECT_EQ(seen.size(), space.count()) << g.name();
    EXPECT_EQ(BigInt(space.count()), count_inverse_closed(g)) << g.name();
  }
}

TEST(StabilizedCount, MatchesBruteForce) {
  const std::map<std::string, std::vector<int>> groups = {
      {"C2", {2}}, {"C4", {4}}, {"C6", {6}}, {"C8", {8}}, {"C2xC2", {2, 2}}, {"C2xC4", {2, 4}}, {"C2xC2xC2", {2, 2, 2}}};
  for (const auto& [spec, factors] : groups) {
    const AbelianGroup g = G(spec.c_str());
    const oracle::NaiveGroup n(factors);
    for (int z = 1; z < g.order(); ++z) {
      if (g.neg(z) != z) continue;
      // element labels coincide: last factor least significant in both
      EXPECT_EQ(stabilized_count(g, z).count, BigInt(oracle::stabilized_subsets(n, z))) << spec << " z=" << z;
    }
  }
}

TEST(StabilizedCount, FrozenValues) {
  // frozen from oracle::stabilized_subsets
  EXPECT_EQ(stabilized_count(G("C4"), 2).count, 4);
  EXPECT_TRUE(stabilized_count(G("C4"), 2).matches_formula());
  EXPECT_EQ(stabilized_count(G("C8"), 4).count, 8);
  // no w with 2w = z: the count is 4 against a formula value of 8
  const StabilizedCount v = stabilized_count(G("C2xC2"), 1);
  EXPECT_EQ(v.count, 4);
  EXPECT_EQ(v.formula(), BigInt(8));
  EXPECT_FALSE(v.matches_formula());
  EXPECT_LT(v.orbit_exponent_x4, v.formula_exponent_x4);
}

TEST(StabilizedCount, RejectsBadInput) {
  EXPECT_THROW(stabilized_count(G("C4"), 0), PreconditionError);
  EXPECT_THROW(stabilized_count(G("C4"), 1), PreconditionError);
  EXPECT_THROW(stabilized_count(G("C4"), 4), DomainError);
  EXPECT_THROW(stabilized_count(G("C4"), -1), DomainError);
}

TEST(ExhaustiveCensus, MatchesOracle) {
  expect_matches_oracle("C5", {5});
  expect_matches_oracle("C7", {7});
  expect_matches_oracle("C2xC2", {2, 2});
  expect_matches_oracle("C6", {6});
  expect_matches_oracle("C4", {4});
}

TEST(ExhaustiveCensus, OddPrimeOrdersHaveNoNontrivialInstability) {
  const CensusReport c5 = exhaustive_census(G("C5"));
  EXPECT_EQ(c5.counts.examined, 8u);
  EXPECT_EQ(c5.counts.nontrivially_unstable, 0u);
  const CensusReport c7 = exhaustive_census(G("C7"));
  EXPECT_EQ(c7.counts.examined, 16u);
  EXPECT_EQ(c7.counts.nontrivially_unstable, 0u);
  EXPECT_EQ(exhaustive_census(G("C2xC2")).counts.examined, 16u);
}

TEST(ExhaustiveCensus, ProportionsAndIntervals) {
  const CensusReport rep = exhaustive_census(G("C7"));
  ASSERT_TRUE(rep.proportion(rep.counts.stable).has_value());
  EXPECT_DOUBLE_EQ(*rep.proportion(rep.counts.stable), static_cast<double>(rep.counts.stable) / 16);
  EXPECT_EQ(*rep.ci_half_width(rep.counts.stable), 0.0);
  for (const auto& b : rep.bound_checks) EXPECT_TRUE(b.holds) << b.bound;
}

TEST(ExhaustiveCensus, RefusesOversizedSpaces) {
  EXPECT_THROW(exhaustive_census(G("C64")), CapExceeded);
}

TEST(ExhaustiveCensus, WorkerCountDoesNotChangeTheReport) {
  const AbelianGroup g = G("C2xC4");
  CensusOptions one, four;
  four.workers = 4;
  const CensusReport a = exhaustive_census(g, one), b = exhaustive_census(g, four);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.workers, 1u);
  EXPECT_EQ(b.workers, 4u);
}

TEST(ExhaustiveCensus, KeepsRecordsInIndexOrder) {
  CensusOptions opt;
  opt.keep_records = true;
  opt.workers = 3;
  const AbelianGroup g = G("C6");
  const CensusReport rep = exhaustive_census(g, opt);
  const InverseClosedSpace space(g);
  ASSERT_EQ(rep.records.size(), space.count());
  for (std::uint64_t i = 0; i < space.count(); ++i) EXPECT_EQ(rep.records[i].set, space.at(i));
}

TEST(MonteCarloCensus, DeterministicPerSeed) {
  const AbelianGroup g = G("C10");
  const CensusReport a = monte_carlo_census(g, 300, 42);
  const CensusReport b = monte_carlo_census(g, 300, 42);
  CensusOptions three;
  three.workers = 3;
  const CensusReport c = monte_carlo_census(g, 300, 42, three);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_EQ(a.counts.examined, 300u);
  EXPECT_TRUE(a.consistent());
  EXPECT_GT(*a.ci_half_width(a.counts.stable), 0.0);
}

TEST(MonteCarloCensus, ZeroSamples) {
  const CensusReport rep = monte_carlo_census(G("C7"), 0, 1);
  EXPECT_EQ(rep.counts.examined, 0u);
  EXPECT_FALSE(rep.proportion(0).has_value());
  EXPECT_FALSE(rep.ci_half_width(0).has_value());
  EXPECT_TRUE(rep.consistent());
}

TEST(MonteCarloCensus, UnbiasedAcrossSeeds) {
  // Mean stable proportion over 100 seeds of 64 samples against the
  // exhaustive value, within 3 standard errors.
  const AbelianGroup g = G("C5");
  const double p = static_cast<double>(exhaustive_census(g).counts.stable) / 8;
  ASSERT_GT(p, 0.0);
  ASSERT_LT(p, 1.0);
  const int seeds = 100, n = 64;
  double sum = 0;
  for (int s = 0; s < seeds; ++s) {
    const CensusReport rep = monte_carlo_census(g, n, static_cast<std::uint64_t>(s) * 7919 + 1);
    sum += static_cast<double>(rep.counts.stable) / n;
  }
  const double se = std::sqrt(p * (1 - p) / (static_cast<double>(seeds) * n));
  EXPECT_NEAR(sum / seeds, p, 3 * se);
}

TEST(MonteCarloCensus, SamplesAreUniform) {
  // every one of the 8 inverse-closed sets of C5 drawn close to 1/8 of the time
  const InverseClosedSpace space(G("C5"));
  std::mt19937_64 rng(7);
  std::map<std::uint64_t, int> hits;
  const int n = 80000;
  for (int i = 0; i < n; ++i) ++hits[space.index_of(sample_inverse_closed(space, rng))];
  ASSERT_EQ(hits.size(), 8u);
  const double se = std::sqrt(n * (1.0 / 8) * (7.0 / 8));
  for (const auto& [idx, h] : hits) EXPECT_NEAR(h, n / 8.0, 4 * se) << idx;
}

TEST(HolOrbits, MatchBruteForceHolomorph) {
  EXPECT_EQ(hol_orbits(G("C5")).size(), 6u);
  EXPECT_EQ(hol_orbits(G("C3")).size(), 4u);
  EXPECT_EQ(hol_orbits(G("C1")).size(), 2u);
  const std::map<std::string, std::vector<int>> groups = {{"C6", {6}}, {"C2xC2", {2, 2}}, {"C8", {8}}, {"C2xC4", {2, 4}}};
  for (const auto& [spec, factors] : groups)
    EXPECT_EQ(hol_orbits(G(spec.c_str())).size(), oracle_hol_orbit_count(factors)) << spec;
}

TEST(HolOrbits, PartitionTheIndexSpace) {
  const AbelianGroup g = G("C3xC3");
  const auto orbits = hol_orbits(g);
  std::uint64_t total = 0;
  for (const auto& o : orbits) {
    EXPECT_TRUE(std::is_sorted(o.begin(), o.end()));
    total += o.size();
  }
  EXPECT_EQ(total, InverseClosedSpace(g).count());
}

TEST(UnlabeledCensus, FormsMatchBruteForceIsomorphism) {
  const std::map<std::string, std::vector<int>> groups = {{"C5", {5}}, {"C6", {6}}, {"C2xC2", {2, 2}}, {"C4", {4}}};
  for (const auto& [spec, factors] : groups) {
    const UnlabeledReport rep = unlabeled_census(G(spec.c_str()));
    EXPECT_EQ(rep.forms, oracle_form_count(factors)) << spec;
    EXPECT_TRUE(rep.lower_bound_holds()) << spec;
    EXPECT_EQ(rep.orbit_split_violations, 0u) << spec;
  }
}

TEST(UnlabeledCensus, SmallCases) {
  const UnlabeledReport c1 = unlabeled_census(G("C1"));
  EXPECT_EQ(c1.forms, 2u);
  EXPECT_EQ(c1.hol_orbits, 2u);
  const UnlabeledReport c5 = unlabeled_census(G("C5"));
  EXPECT_EQ(c5.hol_order, 20);
  EXPECT_EQ(c5.hol_orbits, 6u);
  EXPECT_TRUE(c5.lower_bound_holds());
  EXPECT_TRUE(c5.good_classes_are_orbits());
  EXPECT_EQ(c5.good_sets, exhaustive_census(G("C5")).counts.good);
}

TEST(Verification, ChecksPassExceptTheEqualityCount) {
  for (const auto& c : verify_all(8)) {
    if (c.name == "stabilized-subsets") {
      EXPECT_FALSE(c.passed());
      EXPECT_GT(c.failures, 0u);
    } else {
      EXPECT_TRUE(c.passed()) << c.name << ": " << (c.examples.empty() ? "" : c.examples[0]);
    }
    EXPECT_GT(c.checked, 0u) << c.name;
  }
}

TEST(Serialize, RecordJsonAndCsv) {
  const AbelianGroup g = G("C5");
  const StabilityRecord rec = classify(g, parse_set_literal(g, "1,4"));
  const auto j = record_json(g, rec);
  EXPECT_EQ(j["schema"], kRecordSchema);
  EXPECT_EQ(j["group"], "C5");
  EXPECT_EQ(j["aut_order"], 10);
  EXPECT_EQ(j["cover_aut_order"], 20);
  EXPECT_EQ(j["stable"], true);
  EXPECT_EQ(j["in_S3"], "no");
  EXPECT_TRUE(j["trivial_instability_reasons"].empty());
  const auto back = nlohmann::json::parse(j.dump());
  EXPECT_EQ(back, j);

  const std::string row = record_csv_row(g, rec);
  EXPECT_EQ(std::count(row.begin(), row.end(), ',') + 1, static_cast<long>(record_csv_columns().size()));
  EXPECT_EQ(record_csv_header().substr(0, 14), "group,set_hex,");
  EXPECT_EQ(row.substr(0, 3), "C5,");
}

TEST(Serialize, BigIntegersBecomeStringsPast53Bits) {
  EXPECT_TRUE(big_json(BigInt(1) << 53).is_number_unsigned());
  EXPECT_TRUE(big_json((BigInt(1) << 53) + 1).is_string());
  EXPECT_EQ(big_json(BigInt(1) << 70), "1180591620717411303424");
}

TEST(Serialize, CensusJsonRoundTripsCounts) {
  const CensusReport rep = monte_carlo_census(G("C6"), 100, 3);
  const auto j = nlohmann::json::parse(census_json(rep).dump());
  EXPECT_EQ(j["schema"], kCensusSchema);
  EXPECT_EQ(j["mode"]["kind"], "monte-carlo");
  EXPECT_EQ(j["mode"]["seed"], 3);
  for (const auto& [name, f] : CensusCounts::fields()) EXPECT_EQ(j["counts"][name].get<std::uint64_t>(), rep.counts.*f) << name;
  EXPECT_TRUE(j["consistent"].get<bool>());

  const std::string csv = census_csv(rep);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "bucket,count,proportion,ci95_half_width");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, CensusCounts::fields().size());
}

TEST(Serialize, CensusJsonlHasOneLinePerRecord) {
  CensusOptions opt;
  opt.keep_records = true;
  const AbelianGroup g = G("C5");
  const std::string text = census_jsonl(g, exhaustive_census(g, opt));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 8);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) EXPECT_EQ(nlohmann::json::parse(line)["schema"], kRecordSchema);
}

TEST(Serialize, BoundsCsvColumnsLineUp) {
  const std::string header = bounds_csv_header();
  const std::string row = bounds_csv_row(lemma_bound_table(1 << 20, Delta::parse("0.05")));
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
  EXPECT_EQ(row.substr(0, 8), "1048576,");
}
