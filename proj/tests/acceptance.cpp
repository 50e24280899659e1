// Acceptance run: one PASS/FAIL line per criterion. Arguments select
// criteria by number (default: all). Exit status is 1 if any selected
// criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cayleystab/bounds.hpp"
#include "cayleystab/census.hpp"
#include "cayleystab/stability.hpp"
#include "cayleystab/verification.hpp"

using namespace cayleystab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;
  std::function<Outcome()> run;
};

std::string summary(const VerificationCheck& c) {
  std::ostringstream os;
  os << c.checked << " checked, " << c.failures << " failed, " << c.skipped << " skipped";
  if (!c.examples.empty()) os << "; e.g. " << c.examples.front();
  return os.str();
}

Outcome from_check(const VerificationCheck& c) { return {c.passed() && c.checked > 0, summary(c)}; }

// Abelian groups of order ≤ limit whose exponent exceeds 2.
std::vector<AbelianGroup> exponent_above_two(int limit) {
  std::vector<AbelianGroup> out;
  for (auto& g : all_abelian_groups(limit))
    if (g.exponent() > 2) out.push_back(std::move(g));
  return out;
}

// Largest share of indeterminate records allowed in the hierarchy census.
constexpr double kMaxIndeterminateFraction = 0.05;

Outcome hierarchy() {
  std::uint64_t examined = 0, indeterminate = 0, s1 = 0, violations = 0, checked = 0;
  std::ostringstream os;
  for (const auto& g : exponent_above_two(10)) {
    const CensusReport rep = exhaustive_census(g);
    const auto& k = rep.counts;
    examined += k.examined;
    s1 += k.s1;
    indeterminate += k.indeterminate;
    checked += k.s2 + k.s3 + k.reduction_checked;
    const std::uint64_t v = k.s2_outside_s1 + k.s2_cover_violations + k.s3_outside_s3prime + k.reduction_violations;
    violations += v;
    if (v) os << g.name() << ": " << v << " violations; ";
  }
  const double frac = examined ? static_cast<double>(indeterminate) / static_cast<double>(examined) : 0.0;
  os << examined << " sets, " << checked << " membership checks, " << violations << " violations; indeterminate " << indeterminate
     << "/" << examined << " = " << frac * 100 << "% (of S1: " << indeterminate << "/" << s1 << ")";
  return {violations == 0 && frac < kMaxIndeterminateFraction, os.str()};
}

Outcome odd_order() {
  std::uint64_t s1 = 0, bad = 0;
  std::ostringstream os;
  for (const char* spec : {"C5", "C7", "C9", "C3xC3", "C11", "C13", "C15"}) {
    const CensusReport rep = exhaustive_census(AbelianGroup::parse(spec));
    s1 += rep.counts.s1;
    bad += rep.counts.nontrivially_unstable;
    if (rep.counts.nontrivially_unstable) os << spec << ": " << rep.counts.nontrivially_unstable << " nontrivially unstable; ";
  }
  os << s1 << " sets in S1 over 7 groups, " << bad << " nontrivially unstable";
  return {bad == 0, os.str()};
}

Outcome psi_bound() {
  std::uint64_t cases = 0, vacuous = 0, exceeded = 0;
  for (int n = 3; n <= 12; ++n) {
    const AbelianGroup g = AbelianGroup::make({n});
    for (const auto& sub : cyclic_quotient_subgroups(g)) {
      const SigmaContext ctx(g, sub.members);
      if (ctx.b() < 3) continue;
      for (int i = 1; i < ctx.b(); ++i) {
        std::vector<int> orbit;
        for (int x = 0; x < n; ++x)
          if (ctx.label(x) == i) orbit.push_back(x);
        for (std::size_t a = 0; a < orbit.size(); ++a)
          for (std::size_t b = a + 1; b < orbit.size(); ++b) {
            const PsiResult res = psi_census(ctx, i, orbit[a], orbit[b]);
            ++cases;
            if (res.vacuous)
              ++vacuous;
            else if (!res.within_bound)
              ++exceeded;
          }
      }
    }
  }
  std::ostringstream os;
  os << cases << " (N, i, {u,v}) cases, " << vacuous << " vacuous (2b <= 25), " << cases - vacuous << " compared, " << exceeded
     << " above the bound";
  return {cases > 0 && exceeded == 0, os.str()};
}

Outcome bounds_engine() {
  std::ostringstream os;
  bool ok = true;
  for (long r : {50000L, 100000L, 1000000L}) {
    const HTerms t = h_terms(BigReal(r, kDefaultPrecision), Delta::parse("0.001"));
    ok = ok && t.first < t.second;
    os << "r=" << r << ": " << t.first.to_string(8) << " < " << t.second.to_string(8) << "; ";
  }
  std::size_t grid = 0, within = 0;
  for (const auto& [r, d] : default_bound_grid()) {
    const BoundProfile p = lemma_bound_table(r, d, kDefaultPrecision);
    ++grid;
    within += p.component_sum_within_h && p.component_sum <= p.h.total;
  }
  os << "component sum <= h at " << within << "/" << grid << " grid points (" << kDefaultPrecision << " bits)";
  return {ok && within == grid, os.str()};
}

Outcome unlabeled() {
  std::ostringstream os;
  bool ok = true;
  std::uint64_t good_sets = 0, good_forms = 0;
  for (const auto& g : exponent_above_two(10)) {
    const UnlabeledReport rep = unlabeled_census(g);
    good_sets += rep.good_sets;
    good_forms += rep.good_forms;
    if (!rep.lower_bound_holds() || !rep.good_classes_are_orbits()) {
      ok = false;
      os << g.name() << ": good_forms " << rep.good_forms << ", good_sets " << rep.good_sets << ", |Hol| " << rep.hol_order
         << ", split " << rep.orbit_split_violations << ", mismatched " << rep.good_class_mismatches << "; ";
    }
  }
  os << good_sets << " good sets in " << good_forms << " good forms";
  return {ok && good_sets > 0, os.str()};
}

// Single-threaded wall-time limit for the C2xC10 census.
constexpr double kSingleThreadLimitS = 60.0;

Outcome determinism() {
  const AbelianGroup g = AbelianGroup::parse("C2xC10");
  std::ostringstream os;
  CensusOptions opt;
  opt.workers = 1;
  const auto t0 = std::chrono::steady_clock::now();
  const CensusReport base = exhaustive_census(g, opt);
  const double single = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool same = base.counts.examined == 4096;
  for (unsigned w : {4u, 8u}) {
    opt.workers = w;
    same = same && exhaustive_census(g, opt) == base;
  }
  // sampled mode at a fixed seed
  opt.workers = 1;
  const CensusReport mc = monte_carlo_census(g, 256, 20240601, opt);
  for (unsigned w : {4u, 8u}) {
    opt.workers = w;
    same = same && monte_carlo_census(g, 256, 20240601, opt) == mc;
  }
  os << base.counts.examined << " sets; exhaustive and sampled reports " << (same ? "identical" : "DIFFER")
     << " at 1/4/8 workers; single-threaded " << single << " s (limit " << kSingleThreadLimitS << " s)";
  return {same && single < kSingleThreadLimitS, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const Caps caps;
  const std::vector<Criterion> criteria = {
      {1, "inverse-closed subsets number 2^c(G), |G| <= 16", 10, [] { return from_check(verify_inverse_closed_counts(16)); }},
      {2, "subsets fixed by <R(z),iota> number exactly 2^(r/4+|I(G)|/2), |G| <= 16", 60,
       [] {
         const auto checks = verify_stabilized_counts(16);
         Outcome out = from_check(checks[0]);
         out.detail += "; as an upper bound: " + summary(checks[1]);
         return out;
       }},
      {3, "cover structure and faithful block action, |G| <= 10", 600,
       [&] { return from_check(verify_cover_block_stabilizer(10, caps)); }},
      {4, "bi-coset isomorphism and double-coset symmetry, |G| <= 8, |B| <= 20000", 600,
       [&] {
         Caps c = caps;
         c.b_elements = 20000;
         return from_check(verify_bicoset_model(8, c));
       }},
      {5, "S2 in S1, S2 stable, S3 in S3', reduction to S4/S5, |G| <= 10, exponent > 2", 1800, hierarchy},
      {6, "no nontrivially unstable sets on C5 C7 C9 C3xC3 C11 C13 C15", 1800, odd_order},
      {7, "fixed points of holomorph elements are empty or cosets, |G| <= 12", 5, [] { return from_check(verify_fixed_point_cosets(12)); }},
      {8, "Psi-set counts within 2^(c-2b/25+1), cyclic |G| <= 12, b >= 3", 300, psi_bound},
      {9, "h terms ordered at delta = 0.001 and component sum <= h on the grid", 10, bounds_engine},
      {10, "|U_good| >= |S_good|/|Hol(G)| and good classes are Hol-orbits, |G| <= 10, exponent > 2", 600, unlabeled},
      {11, "C2xC10 census identical at 1, 4, 8 workers", 600, determinism},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  bool all_pass = true;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = elapsed < c.time_limit_s;
    const bool pass = out.pass && in_time;
    all_pass = all_pass && pass;
    std::printf("%s %2d  %s  [%s]  %.2fs/%gs%s\n", pass ? "PASS" : "FAIL", c.id, c.title, out.detail.c_str(), elapsed,
                c.time_limit_s, in_time ? "" : " (over time)");
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
