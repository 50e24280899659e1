#pragma once

// Exhaustive and Monte-Carlo censuses over inverse-closed connection sets,
// the stabilized-subset count, Hol(G)-orbits and the unlabeled census.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cayleystab/abelian_group.hpp"
#include "cayleystab/autgrp.hpp"
#include "cayleystab/bounds.hpp"
#include "cayleystab/connection_set.hpp"
#include "cayleystab/error.hpp"
#include "cayleystab/graph.hpp"
#include "cayleystab/stability.hpp"

namespace cayleystab {

inline constexpr int kMaxExhaustiveBits = 30;
inline constexpr std::uint64_t kShardCount = 256;
inline constexpr std::uint64_t kSamplesPerShard = 64;

/// Additive per-bucket counters. Buckets overlap: a set can be both
/// disconnected and not twin-free.
struct CensusCounts {
  std::uint64_t examined = 0;
  std::uint64_t disconnected = 0;
  std::uint64_t connected_bipartite = 0;
  std::uint64_t not_twin_free = 0;
  std::uint64_t trivially_unstable = 0;
  std::uint64_t s1 = 0;
  std::uint64_t s2 = 0;
  std::uint64_t s3 = 0;
  std::uint64_t s3_indeterminate = 0;
  std::uint64_t s3prime = 0;
  std::uint64_t s4 = 0;
  std::uint64_t s4_indeterminate = 0;
  std::uint64_t s5 = 0;
  std::uint64_t s5_indeterminate = 0;
  std::uint64_t stable = 0;
  std::uint64_t unstable = 0;
  std::uint64_t nontrivially_unstable = 0;
  std::uint64_t indeterminate = 0;  // records with any tri-state field indeterminate
  std::uint64_t good = 0;           // |Aut(D(Γ))| = 2|R(G)⋊⟨ι⟩|
  // cross-checks; the *_violations fields must stay 0
  std::uint64_t s2_outside_s1 = 0;
  std::uint64_t s2_cover_violations = 0;   // S₂ member with |Aut(D)| ≠ 2|R⋊ι| or unstable
  std::uint64_t s3_outside_s3prime = 0;
  std::uint64_t reduction_checked = 0;        // determinate members of (S₁−S₂)−S₃
  std::uint64_t reduction_violations = 0;     // ... outside S₄ ∪ S₅
  std::uint64_t reduction_indeterminate = 0;
  std::uint64_t cover_order_violations = 0;  // 2|Aut(Γ)| does not divide |Aut(D)|

  using Field = std::uint64_t CensusCounts::*;
  static const std::vector<std::pair<const char*, Field>>& fields() {
    static const std::vector<std::pair<const char*, Field>> f = {
        {"examined", &CensusCounts::examined},
        {"disconnected", &CensusCounts::disconnected},
        {"connected_bipartite", &CensusCounts::connected_bipartite},
        {"not_twin_free", &CensusCounts::not_twin_free},
        {"trivially_unstable", &CensusCounts::trivially_unstable},
        {"S1", &CensusCounts::s1},
        {"S2", &CensusCounts::s2},
        {"S3", &CensusCounts::s3},
        {"S3_indeterminate", &CensusCounts::s3_indeterminate},
        {"S3prime", &CensusCounts::s3prime},
        {"S4", &CensusCounts::s4},
        {"S4_indeterminate", &CensusCounts::s4_indeterminate},
        {"S5", &CensusCounts::s5},
        {"S5_indeterminate", &CensusCounts::s5_indeterminate},
        {"stable", &CensusCounts::stable},
        {"unstable", &CensusCounts::unstable},
        {"nontrivially_unstable", &CensusCounts::nontrivially_unstable},
        {"indeterminate", &CensusCounts::indeterminate},
        {"good", &CensusCounts::good},
        {"check_S2_outside_S1", &CensusCounts::s2_outside_s1},
        {"check_S2_cover_violations", &CensusCounts::s2_cover_violations},
        {"check_S3_outside_S3prime", &CensusCounts::s3_outside_s3prime},
        {"check_reduction_checked", &CensusCounts::reduction_checked},
        {"check_reduction_violations", &CensusCounts::reduction_violations},
        {"check_reduction_indeterminate", &CensusCounts::reduction_indeterminate},
        {"check_cover_order_violations", &CensusCounts::cover_order_violations},
    };
    return f;
  }

  CensusCounts& operator+=(const CensusCounts& o) {
    for (const auto& [name, f] : fields()) this->*f += o.*f;
    return *this;
  }
  friend bool operator==(const CensusCounts&, const CensusCounts&) = default;

  /// Adds one classified set.
  void tally(const StabilityRecord& rec, long long r_iota_order) {
    ++examined;
    if (!rec.connected) ++disconnected;
    if (rec.connected && rec.bipartite) ++connected_bipartite;
    if (!rec.twin_free) ++not_twin_free;
    if (rec.trivially_unstable()) ++trivially_unstable;
    if (rec.in_S1) ++s1;
    if (rec.in_S2) ++s2;
    if (rec.in_S3 == Tri::yes) ++s3;
    if (rec.in_S3 == Tri::indeterminate) ++s3_indeterminate;
    if (rec.in_S1 && rec.in_S3prime) ++s3prime;
    if (rec.in_S4 == Tri::yes) ++s4;
    if (rec.in_S4 == Tri::indeterminate) ++s4_indeterminate;
    if (rec.in_S5 == Tri::yes) ++s5;
    if (rec.in_S5 == Tri::indeterminate) ++s5_indeterminate;
    if (rec.stable)
      ++stable;
    else
      ++unstable;
    if (rec.nontrivially_unstable()) ++nontrivially_unstable;
    if (rec.any_indeterminate()) ++indeterminate;
    const BigInt good_order = BigInt(2) * r_iota_order;
    if (rec.cover_aut_order == good_order) ++good;

    if (rec.in_S2 && !rec.in_S1) ++s2_outside_s1;
    if (rec.in_S2 && (rec.cover_aut_order != good_order || !rec.stable)) ++s2_cover_violations;
    if (rec.in_S3 == Tri::yes && !rec.in_S3prime) ++s3_outside_s3prime;
    if (rec.cover_aut_order % (2 * rec.aut_order) != 0) ++cover_order_violations;
    if (rec.in_S1 && !rec.in_S2 && rec.in_S3 != Tri::yes) {
      if (rec.in_S3 == Tri::indeterminate || rec.in_S4 == Tri::indeterminate || rec.in_S5 == Tri::indeterminate) {
        // a yes on either side already settles the inclusion
        if (rec.in_S4 == Tri::yes || rec.in_S5 == Tri::yes)
          ++reduction_checked;
        else
          ++reduction_indeterminate;
      } else {
        ++reduction_checked;
        if (rec.in_S4 != Tri::yes && rec.in_S5 != Tri::yes) ++reduction_violations;
      }
    }
  }

  bool cross_checks_pass() const {
    return s2_outside_s1 == 0 && s2_cover_violations == 0 && s3_outside_s3prime == 0 && reduction_violations == 0 &&
           cover_order_violations == 0;
  }
};

struct CensusMode {
  enum class Kind { exhaustive, monte_carlo };
  Kind kind = Kind::exhaustive;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const CensusMode&, const CensusMode&) = default;
  std::string name() const { return kind == Kind::exhaustive ? "exhaustive" : "monte-carlo"; }
};

/// A trivial-instability proportion against its closed-form bound.
struct BoundCheck {
  std::string bound;   // trivial-disconnected, ...
  std::string bucket;  // the counted bucket
  double log2_bound = 0;
  bool vacuous = false;  // bound ≥ 1
  bool holds = true;     // proportion ≤ bound; asserted only when not vacuous
  friend bool operator==(const BoundCheck&, const BoundCheck&) = default;
};

struct CensusReport {
  std::string group;
  int r = 0;
  int c = 0;
  BigInt total;  // 2^{c(G)}
  CensusMode mode;
  CensusCounts counts;
  std::vector<BoundCheck> bound_checks;
  // not part of equality
  double elapsed_seconds = 0;
  unsigned workers = 1;
  std::vector<StabilityRecord> records;  // in index (or sample) order, when requested

  std::optional<double> proportion(std::uint64_t count) const {
    if (counts.examined == 0) return std::nullopt;
    return static_cast<double>(count) / static_cast<double>(counts.examined);
  }
  /// Normal-approximation 95% half-width; 0 for exhaustive censuses.
  std::optional<double> ci_half_width(std::uint64_t count) const {
    const auto p = proportion(count);
    if (!p) return std::nullopt;
    if (mode.kind == CensusMode::Kind::exhaustive) return 0.0;
    return 1.96 * std::sqrt(*p * (1 - *p) / static_cast<double>(counts.examined));
  }

  /// S₂ ≤ S₁ ≤ examined, stable + unstable = examined (stability is always
  /// decided; tri-state gaps are counted in `indeterminate`), and an
  /// exhaustive census examined exactly 2^{c(G)} sets.
  bool consistent() const {
    const auto& k = counts;
    bool ok = k.s2 <= k.s1 && k.s1 <= k.examined && k.stable + k.unstable == k.examined &&
              k.indeterminate <= k.s1 && k.nontrivially_unstable <= k.unstable;
    if (mode.kind == CensusMode::Kind::exhaustive) ok = ok && BigInt(k.examined) == total;
    if (mode.kind == CensusMode::Kind::monte_carlo) ok = ok && k.examined == mode.samples;
    return ok;
  }

  bool bounds_hold() const {
    return std::all_of(bound_checks.begin(), bound_checks.end(), [](const BoundCheck& b) { return b.holds; });
  }

  friend bool operator==(const CensusReport& a, const CensusReport& b) {
    return a.group == b.group && a.r == b.r && a.c == b.c && a.total == b.total && a.mode == b.mode &&
           a.counts == b.counts && a.bound_checks == b.bound_checks;
  }
};

struct CensusOptions {
  Caps caps;
  unsigned workers = 1;
  bool keep_records = false;
};

namespace detail {

inline std::vector<BoundCheck> trivial_bound_checks(const AbelianGroup& g, const CensusCounts& k) {
  std::vector<BoundCheck> out;
  if (k.examined == 0) return out;
  const auto bounds = trivial_instability_bounds(g.order());
  const std::pair<const char*, std::uint64_t> rows[] = {
      {"trivial-disconnected", k.disconnected}, {"trivial-bipartite", k.connected_bipartite}, {"trivial-twins", k.not_twin_free}};
  for (const auto& [name, count] : rows) {
    const BoundValue& b = bounds.at(name);
    BoundCheck chk{name, name == std::string("trivial-disconnected") ? "disconnected"
                         : name == std::string("trivial-bipartite")  ? "connected_bipartite"
                                                                      : "not_twin_free",
                   b.log2.to_double(), b.vacuous(), true};
    if (!chk.vacuous && count > 0) {
      // log₂(count / examined) ≤ bound, at full precision
      const BigReal lhs = BigReal(BigInt(count), kDefaultPrecision).log2() - BigReal(BigInt(k.examined), kDefaultPrecision).log2();
      chk.holds = lhs <= b.log2;
    }
    out.push_back(std::move(chk));
  }
  return out;
}

/// Runs `shards` jobs on `workers` threads; job k writes only its own slot.
template <class Job>
void run_shards(std::uint64_t shards, unsigned workers, Job&& job) {
  workers = std::max(1u, workers);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto loop = [&] {
    for (;;) {
      const std::uint64_t k = next.fetch_add(1);
      if (k >= shards) return;
      try {
        job(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(shards);
        return;
      }
    }
  };
  if (workers == 1) {
    loop();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(loop);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

struct ShardResult {
  CensusCounts counts;
  std::vector<StabilityRecord> records;
};

inline CensusReport assemble(const StabilityContext& ctx, CensusMode mode, std::vector<ShardResult>& parts,
                             const CensusOptions& opt, std::chrono::steady_clock::time_point start) {
  CensusReport rep;
  rep.group = ctx.group().name();
  rep.r = ctx.r();
  rep.c = c_value(ctx.group());
  rep.total = count_inverse_closed(ctx.group());
  rep.mode = mode;
  rep.workers = std::max(1u, opt.workers);
  for (auto& p : parts) {
    rep.counts += p.counts;
    if (opt.keep_records)
      rep.records.insert(rep.records.end(), std::make_move_iterator(p.records.begin()), std::make_move_iterator(p.records.end()));
  }
  rep.bound_checks = trivial_bound_checks(ctx.group(), rep.counts);
  rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace detail

/// Classifies every inverse-closed S. The index space is split into a fixed
/// number of contiguous shards, so the merged report does not depend on the
/// worker count.
inline CensusReport exhaustive_census(const AbelianGroup& g, const CensusOptions& opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  const InverseClosedSpace space(g);
  if (space.bits() > kMaxExhaustiveBits)
    throw CapExceeded("exhaustive census: c(G) = " + std::to_string(space.bits()) + " too large", kMaxExhaustiveBits);
  const StabilityContext ctx(g, opt.caps);
  const std::uint64_t n = space.count();
  const std::uint64_t shards = std::min<std::uint64_t>(n, kShardCount);
  std::vector<detail::ShardResult> parts(shards);
  detail::run_shards(shards, opt.workers, [&](std::uint64_t k) {
    auto& part = parts[k];
    for (std::uint64_t i = k * n / shards; i < (k + 1) * n / shards; ++i) {
      StabilityRecord rec = classify(ctx, space.at(i));
      part.counts.tally(rec, ctx.r_iota_order());
      if (opt.keep_records) part.records.push_back(std::move(rec));
    }
  });
  CensusReport rep = detail::assemble(ctx, CensusMode{}, parts, opt, start);
  if (!rep.consistent()) throw InternalError("exhaustive census: bucket counts inconsistent");
  return rep;
}

/// Uniform random inverse-closed set: one fair bit per ι-orbit.
template <class Rng>
ElementSet sample_inverse_closed(const InverseClosedSpace& space, Rng& rng) {
  ElementSet s = space.group().empty_set();
  std::uint64_t word = 0;
  int left = 0;
  for (const auto& orbit : space.orbits()) {
    if (left == 0) {
      word = rng();
      left = 64;
    }
    if (word & 1U)
      for (int x : orbit) s.set(static_cast<std::size_t>(x));
    word >>= 1;
    --left;
  }
  return s;
}

/// Samples `samples` sets. Shard k draws samples [64k, 64k + 64) from
/// mt19937_64(seed ^ k), so the result is fixed by (seed, samples).
inline CensusReport monte_carlo_census(const AbelianGroup& g, std::uint64_t samples, std::uint64_t seed,
                                       const CensusOptions& opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  const InverseClosedSpace space(g);
  const StabilityContext ctx(g, opt.caps);
  const std::uint64_t shards = (samples + kSamplesPerShard - 1) / kSamplesPerShard;
  std::vector<detail::ShardResult> parts(shards);
  detail::run_shards(shards, opt.workers, [&](std::uint64_t k) {
    auto& part = parts[k];
    std::mt19937_64 rng(seed ^ k);
    const std::uint64_t end = std::min(samples, (k + 1) * kSamplesPerShard);
    for (std::uint64_t i = k * kSamplesPerShard; i < end; ++i) {
      StabilityRecord rec = classify(ctx, sample_inverse_closed(space, rng));
      part.counts.tally(rec, ctx.r_iota_order());
      if (opt.keep_records) part.records.push_back(std::move(rec));
    }
  });
  CensusReport rep =
      detail::assemble(ctx, CensusMode{CensusMode::Kind::monte_carlo, samples, seed}, parts, opt, start);
  if (!rep.consistent()) throw InternalError("monte-carlo census: bucket counts inconsistent");
  return rep;
}

// ---------------------------------------------------------------------------
// Subsets stabilized by ⟨R(z), ι⟩

struct StabilizedCount {
  BigInt count;             // subsets of G stabilized by ⟨R(z), ι⟩
  int formula_exponent_x4 = 0;  // 4·(r/4 + |I(G)|/2)
  int orbit_exponent_x4 = 0;    // 4·log₂(count) = r + |I(G)| + #{w : 2w = z}

  /// 2^{r/4 + |I(G)|/2} when the exponent is an integer.
  std::optional<BigInt> formula() const {
    if (formula_exponent_x4 % 4 != 0) return std::nullopt;
    return BigInt(1) << (formula_exponent_x4 / 4);
  }
  bool matches_formula() const { return formula_exponent_x4 == orbit_exponent_x4; }
};

/// Counts by orbits: a stabilized subset is a union of ⟨R(z), ι⟩-orbits.
inline StabilizedCount stabilized_count(const AbelianGroup& g, int z) {
  if (z < 0 || z >= g.order()) throw DomainError("stabilized_count: element out of range");
  if (z == 0 || g.neg(z) != z) throw PreconditionError("stabilized_count: z must be an involution");
  std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
  int orbits = 0;
  for (int x = 0; x < g.order(); ++x) {
    if (seen[static_cast<std::size_t>(x)]) continue;
    ++orbits;
    for (int y : {x, g.add(x, z), g.neg(x), g.neg(g.add(x, z))}) seen[static_cast<std::size_t>(y)] = 1;
  }
  int halves = 0;  // #{w : 2w = z}
  for (int w = 0; w < g.order(); ++w)
    if (g.add(w, w) == z) ++halves;
  StabilizedCount out;
  out.count = BigInt(1) << orbits;
  const int inv = static_cast<int>(involution_set(g).count());
  out.formula_exponent_x4 = g.order() + 2 * inv;
  out.orbit_exponent_x4 = g.order() + inv + halves;
  if (4 * orbits != out.orbit_exponent_x4) throw InternalError("stabilized_count: orbit count disagrees with orbit lengths");
  return out;
}

// ---------------------------------------------------------------------------
// Hol(G)-orbits

/// A generating set of the explicit group `auts`, chosen greedily.
inline std::vector<GroupAutomorphism> automorphism_generators(const AbelianGroup& g, const std::vector<GroupAutomorphism>& auts) {
  std::vector<GroupAutomorphism> gens;
  std::map<std::vector<int>, char> in;
  std::vector<GroupAutomorphism> members{GroupAutomorphism::identity(g)};
  in[members[0].table()] = 1;
  for (const auto& tau : auts) {
    if (in.count(tau.table())) continue;
    gens.push_back(tau);
    for (std::size_t q = 0; q < members.size(); ++q)
      for (const auto& s : gens) {
        GroupAutomorphism next = GroupAutomorphism::then(g, members[q], s);
        if (in.emplace(next.table(), 1).second) members.push_back(std::move(next));
      }
  }
  if (members.size() != auts.size()) throw InternalError("automorphism_generators: closure size mismatch");
  return gens;
}

/// Orbits of Hol(G) on the Cayley graphs Cay(G, S), S inverse-closed, as
/// index lists in ascending order. Hol(G) acts by relabeling vertices, and
/// Cay(G, S)^α = Cay(G, S^τ) for α = R(g)τ, so these are the Aut(G)-orbits
/// on connection sets. (Translating S itself by an involution also keeps it
/// inverse-closed, but is not an action on graphs.)
inline std::vector<std::vector<std::uint64_t>> hol_orbits(const AbelianGroup& g, std::size_t cap = kDefaultHolomorphCap) {
  const InverseClosedSpace space(g);
  if (space.bits() > 26) throw CapExceeded("hol_orbits: too many inverse-closed sets", std::size_t{1} << 26);
  const auto auts = automorphism_group_of(g, std::max<std::size_t>(kDefaultGroupCap, static_cast<std::size_t>(g.order())),
                                          cap / static_cast<std::size_t>(g.order()) + 1);
  if (auts.size() * static_cast<std::size_t>(g.order()) > cap) throw CapExceeded("hol_orbits: holomorph exceeds cap", cap);
  const auto gens = automorphism_generators(g, auts);
  const std::uint64_t n = space.count();
  std::vector<std::uint64_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::uint64_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  // Image of orbit k under τ is the orbit containing τ(first member).
  std::vector<std::vector<int>> orbit_image(gens.size());
  std::vector<int> orbit_of(static_cast<std::size_t>(g.order()));
  for (std::size_t k = 0; k < space.orbits().size(); ++k)
    for (int x : space.orbits()[k]) orbit_of[static_cast<std::size_t>(x)] = static_cast<int>(k);
  for (std::size_t t = 0; t < gens.size(); ++t)
    for (const auto& orbit : space.orbits()) orbit_image[t].push_back(orbit_of[static_cast<std::size_t>(gens[t](orbit[0]))]);
  for (std::uint64_t i = 0; i < n; ++i)
    for (const auto& img : orbit_image) {
      std::uint64_t j = 0;
      for (std::size_t k = 0; k < img.size(); ++k)
        if ((i >> k) & 1U) j |= std::uint64_t{1} << img[k];
      const auto a = find(i), b = find(j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::map<std::uint64_t, std::vector<std::uint64_t>> by_root;
  for (std::uint64_t i = 0; i < n; ++i) by_root[find(i)].push_back(i);
  std::vector<std::vector<std::uint64_t>> out;
  for (auto& [root, members] : by_root) out.push_back(std::move(members));
  return out;
}

// ---------------------------------------------------------------------------
// Unlabeled census

struct UnlabeledReport {
  std::string group;
  BigInt total;                  // 2^{c(G)}
  BigInt hol_order;              // |Hol(G)| = r·|Aut(G)|
  std::uint64_t forms = 0;       // |U|: distinct canonical forms of Cay(G, S)
  std::uint64_t good_forms = 0;  // |U_good|
  std::uint64_t good_sets = 0;   // |S_good|
  std::uint64_t hol_orbits = 0;
  std::uint64_t good_hol_orbits = 0;
  std::uint64_t orbit_split_violations = 0;  // Hol-orbits spread over several forms (must be 0)
  std::uint64_t good_class_mismatches = 0;   // good forms containing more than one Hol-orbit
  double elapsed_seconds = 0;

  /// |U_good|·|Hol(G)| ≥ |S_good|.
  bool lower_bound_holds() const { return BigInt(good_forms) * hol_order >= BigInt(good_sets); }
  bool good_classes_are_orbits() const { return good_class_mismatches == 0 && orbit_split_violations == 0; }
};

inline UnlabeledReport unlabeled_census(const AbelianGroup& g, const Caps& caps = {}) {
  const auto start = std::chrono::steady_clock::now();
  const InverseClosedSpace space(g);
  if (space.bits() > 26) throw CapExceeded("unlabeled census: too many inverse-closed sets", std::size_t{1} << 26);
  if (2 * g.order() > caps.aut_degree) throw CapExceeded("unlabeled census: cover exceeds automorphism cap", static_cast<std::size_t>(caps.aut_degree));
  const auto orbits = hol_orbits(g, caps.holomorph);
  const std::uint64_t n = space.count();
  std::vector<std::uint64_t> orbit_id(n);
  for (std::size_t k = 0; k < orbits.size(); ++k)
    for (auto i : orbits[k]) orbit_id[i] = k;

  const BigInt good_order = 2 * BigInt(g.exponent() <= 2 ? g.order() : 2 * g.order());
  struct FormClass {
    bool good = false;
    std::vector<std::uint64_t> orbit_ids;
  };
  std::map<std::vector<std::uint8_t>, FormClass> classes;
  std::vector<char> orbit_good(orbits.size(), 0);
  UnlabeledReport rep;
  rep.group = g.name();
  rep.total = count_inverse_closed(g);
  for (std::uint64_t i = 0; i < n; ++i) {
    const ElementSet s = space.at(i);
    const LabeledGraph gamma = cayley_graph(g, s);
    const bool good = automorphism_group(double_cover(gamma), {}, caps.aut_degree).order() == good_order;
    FormClass& fc = classes[canonical_form(gamma, caps.aut_degree).bytes];
    fc.good = fc.good || good;
    fc.orbit_ids.push_back(orbit_id[i]);
    if (good) {
      ++rep.good_sets;
      orbit_good[orbit_id[i]] = 1;
    }
  }
  std::vector<std::uint64_t> form_of_orbit(orbits.size(), UINT64_MAX);
  std::uint64_t form_index = 0;
  for (auto& [bytes, fc] : classes) {
    std::sort(fc.orbit_ids.begin(), fc.orbit_ids.end());
    fc.orbit_ids.erase(std::unique(fc.orbit_ids.begin(), fc.orbit_ids.end()), fc.orbit_ids.end());
    for (auto o : fc.orbit_ids) {
      if (form_of_orbit[o] != UINT64_MAX && form_of_orbit[o] != form_index) ++rep.orbit_split_violations;
      form_of_orbit[o] = form_index;
    }
    if (fc.good) {
      ++rep.good_forms;
      if (fc.orbit_ids.size() != 1) ++rep.good_class_mismatches;
    }
    ++form_index;
  }
  rep.forms = classes.size();
  rep.hol_orbits = orbits.size();
  rep.good_hol_orbits = static_cast<std::uint64_t>(std::count(orbit_good.begin(), orbit_good.end(), 1));
  const auto auts = automorphism_group_of(g, std::max<std::size_t>(kDefaultGroupCap, static_cast<std::size_t>(g.order())),
                                          caps.holomorph / static_cast<std::size_t>(g.order()) + 1);
  rep.hol_order = BigInt(g.order()) * auts.size();
  rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace cayleystab
