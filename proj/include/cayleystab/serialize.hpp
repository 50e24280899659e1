#pragma once

// JSON, JSONL and CSV renderings of records, census reports and bound
// profiles. Big integers become JSON numbers when they fit in 53 bits and
// decimal strings otherwise.

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "cayleystab/bounds.hpp"
#include "cayleystab/census.hpp"
#include "cayleystab/connection_set.hpp"
#include "cayleystab/stability.hpp"
#include "cayleystab/verification.hpp"

namespace cayleystab {

inline constexpr const char* kRecordSchema = "cayleystab.record/1";
inline constexpr const char* kCensusSchema = "cayleystab.census/1";
inline constexpr const char* kUnlabeledSchema = "cayleystab.unlabeled/1";

inline nlohmann::json big_json(const BigInt& v) {
  if (v >= 0 && v <= (BigInt(1) << 53)) return v.convert_to<std::uint64_t>();
  return v.str();
}

inline nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

// ---------------------------------------------------------------------------
// StabilityRecord

inline nlohmann::json record_json(const AbelianGroup& g, const StabilityRecord& rec) {
  return {
      {"schema", kRecordSchema},
      {"group", g.name()},
      {"set", format_set(g, rec.set)},
      {"set_hex", to_hex(rec.set)},
      {"aut_order", big_json(rec.aut_order)},
      {"cover_aut_order", big_json(rec.cover_aut_order)},
      {"b_order", big_json(rec.b_order)},
      {"connected", rec.connected},
      {"bipartite", rec.bipartite},
      {"twin_free", rec.twin_free},
      {"stable", rec.stable},
      {"in_S1", rec.in_S1},
      {"in_S2", rec.in_S2},
      {"in_S3", to_string(rec.in_S3)},
      {"in_S3prime", rec.in_S3prime},
      {"in_S4", to_string(rec.in_S4)},
      {"in_S5", to_string(rec.in_S5)},
      {"trivial_instability_reasons", reason_names(rec.reasons)},
      {"exponent_two", rec.exponent_two},
      {"intermediate_subgroups", rec.intermediate_subgroups},
  };
}

inline const std::vector<std::string>& record_csv_columns() {
  static const std::vector<std::string> cols = {"group",     "set_hex",   "aut_order", "cover_aut_order", "b_order",
                                                "connected", "bipartite", "twin_free", "stable",          "in_S1",
                                                "in_S2",     "in_S3prime", "exponent_two", "reasons",      "in_S3",
                                                "in_S4",     "in_S5"};
  return cols;
}

inline std::string record_csv_header() {
  std::string out;
  for (const auto& c : record_csv_columns()) out += (out.empty() ? "" : ",") + c;
  return out;
}

inline std::string record_csv_row(const AbelianGroup& g, const StabilityRecord& rec) {
  std::string reasons;
  for (const auto& r : reason_names(rec.reasons)) reasons += (reasons.empty() ? "" : "|") + r;
  auto b = [](bool v) { return v ? "1" : "0"; };
  std::ostringstream os;
  os << g.name() << ',' << to_hex(rec.set) << ',' << rec.aut_order << ',' << rec.cover_aut_order << ',' << rec.b_order << ','
     << b(rec.connected) << ',' << b(rec.bipartite) << ',' << b(rec.twin_free) << ',' << b(rec.stable) << ',' << b(rec.in_S1)
     << ',' << b(rec.in_S2) << ',' << b(rec.in_S3prime) << ',' << b(rec.exponent_two) << ',' << reasons << ','
     << to_string(rec.in_S3) << ',' << to_string(rec.in_S4) << ',' << to_string(rec.in_S5);
  return os.str();
}

// ---------------------------------------------------------------------------
// CensusReport

inline nlohmann::json census_json(const CensusReport& rep) {
  nlohmann::json counts = nlohmann::json::object(), props = nlohmann::json::object(), ci = nlohmann::json::object();
  for (const auto& [name, f] : CensusCounts::fields()) {
    counts[name] = rep.counts.*f;
    props[name] = optional_json(rep.proportion(rep.counts.*f));
    ci[name] = optional_json(rep.ci_half_width(rep.counts.*f));
  }
  nlohmann::json bounds = nlohmann::json::array();
  for (const auto& b : rep.bound_checks)
    bounds.push_back({{"bound", b.bound}, {"bucket", b.bucket}, {"log2_bound", b.log2_bound}, {"vacuous", b.vacuous}, {"holds", b.holds}});
  nlohmann::json mode = {{"kind", rep.mode.name()}};
  if (rep.mode.kind == CensusMode::Kind::monte_carlo) {
    mode["samples"] = rep.mode.samples;
    mode["seed"] = rep.mode.seed;
  }
  return {
      {"schema", kCensusSchema},
      {"group", rep.group},
      {"r", rep.r},
      {"c", rep.c},
      {"total", big_json(rep.total)},
      {"mode", mode},
      {"counts", counts},
      {"proportions", props},
      {"ci95_half_width", ci},
      {"bound_checks", bounds},
      {"consistent", rep.consistent()},
      {"cross_checks_pass", rep.counts.cross_checks_pass()},
      {"elapsed_seconds", rep.elapsed_seconds},
      {"workers", rep.workers},
  };
}

/// One row per bucket: bucket,count,proportion,ci95_half_width.
inline std::string census_csv(const CensusReport& rep) {
  std::ostringstream os;
  os << "bucket,count,proportion,ci95_half_width\n";
  os.precision(17);
  for (const auto& [name, f] : CensusCounts::fields()) {
    const auto p = rep.proportion(rep.counts.*f);
    const auto ci = rep.ci_half_width(rep.counts.*f);
    os << name << ',' << rep.counts.*f << ',';
    if (p) os << *p;
    os << ',';
    if (ci) os << *ci;
    os << '\n';
  }
  return os.str();
}

inline std::string census_jsonl(const AbelianGroup& g, const CensusReport& rep) {
  std::string out;
  for (const auto& rec : rep.records) out += record_json(g, rec).dump() + "\n";
  return out;
}

inline nlohmann::json unlabeled_json(const UnlabeledReport& rep) {
  return {
      {"schema", kUnlabeledSchema},
      {"group", rep.group},
      {"total", big_json(rep.total)},
      {"hol_order", big_json(rep.hol_order)},
      {"forms", rep.forms},
      {"good_forms", rep.good_forms},
      {"good_sets", rep.good_sets},
      {"hol_orbits", rep.hol_orbits},
      {"good_hol_orbits", rep.good_hol_orbits},
      {"orbit_split_violations", rep.orbit_split_violations},
      {"good_class_mismatches", rep.good_class_mismatches},
      {"lower_bound_holds", rep.lower_bound_holds()},
      {"good_classes_are_orbits", rep.good_classes_are_orbits()},
      {"elapsed_seconds", rep.elapsed_seconds},
  };
}

// ---------------------------------------------------------------------------
// Bounds

inline std::string bounds_csv_header() {
  std::string out =
      "r,delta,precision,log2_h,h,h_vacuous,log2_h_first,log2_h_second,first_below_second,log2_k,k,k_defined";
  for (const auto& name : bound_names()) out += ",log2_" + name + "," + name + "_vacuous";
  return out + ",log2_component_sum,component_sum_within_h";
}

inline std::string bounds_csv_row(const BoundProfile& p, int digits = 17) {
  std::ostringstream os;
  auto b = [](bool v) { return v ? "1" : "0"; };
  os << p.r << ',' << p.delta.to_string() << ',' << p.precision << ',' << p.h.total.to_string(digits) << ','
     << p.h.total.exp2().to_string(digits) << ',' << b(p.h_vacuous()) << ',' << p.h.first.to_string(digits) << ','
     << p.h.second.to_string(digits) << ',' << b(p.first_below_second) << ',';
  if (p.k) os << p.k->to_string(digits) << ',' << p.k->exp2().to_string(digits);
  else os << ',';
  os << ',' << b(p.k.has_value());
  for (const auto& name : bound_names()) {
    const BoundValue& v = p.bounds.at(name);
    os << ',' << v.log2.to_string(digits) << ',' << b(v.vacuous());
  }
  os << ',' << p.component_sum.to_string(digits) << ',' << b(p.component_sum_within_h);
  return os.str();
}

// ---------------------------------------------------------------------------
// Verification

inline nlohmann::json verification_json(const std::vector<VerificationCheck>& checks) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : checks)
    out.push_back({{"check", c.name},
                   {"statement", c.statement},
                   {"order_ceiling", c.order_ceiling},
                   {"checked", c.checked},
                   {"failures", c.failures},
                   {"skipped", c.skipped},
                   {"examples", c.examples},
                   {"passed", c.passed()}});
  return out;
}

}  // namespace cayleystab
