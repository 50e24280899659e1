// cayleystab: classify connection sets, run censuses, verify the exact
// lemmas and tabulate the closed-form bounds.
//
// Exit codes: 0 success, 1 a verification check failed, 2 bad input
// (parse or precondition), 3 a cap was exceeded, or --strict was given and
// indeterminate results are present.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cayleystab/bounds.hpp"
#include "cayleystab/census.hpp"
#include "cayleystab/connection_set.hpp"
#include "cayleystab/serialize.hpp"
#include "cayleystab/stability.hpp"
#include "cayleystab/verification.hpp"

namespace cs = cayleystab;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitCap = 3;

struct RunConfig {
  std::string group;
  std::string set_literal;
  bool symmetrize = false;
  cs::Caps caps;
  bool exhaustive = false;
  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool unlabeled = false;
  bool strict = false;
  std::string format = "json";
  std::string lemma_format = "csv";
  std::string json_path, csv_path, jsonl_path;
  int limit = 16;
  std::vector<std::string> r_values;
  std::vector<std::string> deltas;
  bool grid = false;
  long precision = cs::kDefaultPrecision;
};

unsigned default_workers() {
  if (const char* env = std::getenv("CAYLEYSTAB_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "ignoring CAYLEYSTAB_WORKERS=" << env << " (need an integer >= 1)\n";
  }
  return 1;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw cs::PreconditionError("cannot write " + path);
  out << text;
}

void add_cap_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--aut-cap", cfg.caps.aut_degree, "max vertices in an automorphism search")->check(CLI::PositiveNumber);
  cmd->add_option("--group-cap", cfg.caps.group, "max |G| for Aut(G) enumeration")->check(CLI::PositiveNumber);
  cmd->add_option("--holomorph-cap", cfg.caps.holomorph, "max |Hol(G)|")->check(CLI::PositiveNumber);
  cmd->add_option("--b-cap", cfg.caps.b_elements, "max |B(S)| for element scans")->check(CLI::PositiveNumber);
  cmd->add_option("--intermediate-cap", cfg.caps.intermediate, "max subgroups between R(G) and B(S)")->check(CLI::PositiveNumber);
}

int cmd_classify(const RunConfig& cfg) {
  const auto g = cs::AbelianGroup::parse(cfg.group);
  const auto s = cs::parse_set_literal(g, cfg.set_literal, cfg.symmetrize);
  const auto rec = cs::classify(g, s, cfg.caps);
  if (cfg.format == "csv")
    std::cout << cs::record_csv_header() << '\n' << cs::record_csv_row(g, rec) << '\n';
  else
    std::cout << cs::record_json(g, rec).dump(2) << '\n';
  return cfg.strict && rec.any_indeterminate() ? kExitCap : 0;
}

int cmd_census(const RunConfig& cfg) {
  const auto g = cs::AbelianGroup::parse(cfg.group);
  if (cfg.exhaustive == cfg.samples.has_value()) throw cs::PreconditionError("census: give exactly one of --exhaustive or --samples N");
  cs::CensusOptions opt;
  opt.caps = cfg.caps;
  opt.workers = cfg.workers;
  opt.keep_records = !cfg.jsonl_path.empty();
  const cs::CensusReport rep =
      cfg.exhaustive ? cs::exhaustive_census(g, opt) : cs::monte_carlo_census(g, *cfg.samples, cfg.seed, opt);
  std::optional<cs::UnlabeledReport> unl;
  if (cfg.unlabeled) unl = cs::unlabeled_census(g, cfg.caps);

  nlohmann::json report = cs::census_json(rep);
  if (unl) report["unlabeled"] = cs::unlabeled_json(*unl);
  if (!cfg.json_path.empty()) write_file(cfg.json_path, report.dump(2) + "\n");
  if (!cfg.csv_path.empty()) write_file(cfg.csv_path, cs::census_csv(rep));
  if (!cfg.jsonl_path.empty()) write_file(cfg.jsonl_path, cs::census_jsonl(g, rep));
  if (cfg.format == "csv")
    std::cout << cs::census_csv(rep);
  else
    std::cout << report.dump(2) << '\n';

  if (!rep.counts.cross_checks_pass() || !rep.bounds_hold()) return kExitFailure;
  if (unl && (!unl->lower_bound_holds() || !unl->good_classes_are_orbits())) return kExitFailure;
  return cfg.strict && rep.counts.indeterminate > 0 ? kExitCap : 0;
}

int cmd_check_lemmas(const RunConfig& cfg) {
  if (cfg.limit < 1) throw cs::PreconditionError("check-lemmas: --limit must be at least 1");
  const auto checks = cs::verify_all(cfg.limit, cfg.caps, cfg.workers);
  bool ok = true;
  if (cfg.lemma_format == "json") {
    std::cout << cs::verification_json(checks).dump(2) << '\n';
    for (const auto& c : checks) ok = ok && c.passed();
  } else {
    std::cout << "check,checked,failures,skipped,status\n";
    for (const auto& c : checks) {
      std::cout << c.name << ',' << c.checked << ',' << c.failures << ',' << c.skipped << ',' << (c.passed() ? "pass" : "FAIL")
                << '\n';
      for (const auto& e : c.examples) std::cerr << c.name << ": " << e << '\n';
      ok = ok && c.passed();
    }
  }
  return ok ? 0 : kExitFailure;
}

int cmd_bounds(const RunConfig& cfg) {
  std::vector<std::pair<cs::BigInt, cs::Delta>> rows;
  if (cfg.grid) rows = cs::default_bound_grid();
  std::vector<cs::Delta> deltas;
  for (const auto& d : cfg.deltas) deltas.push_back(cs::Delta::parse(d));
  if (deltas.empty() && !cfg.r_values.empty()) deltas.push_back(cs::Delta{});
  for (const auto& rv : cfg.r_values) {
    cs::BigInt r;
    try {
      r = cs::BigInt(rv);
    } catch (const std::exception&) {
      throw cs::DomainError("bounds: r must be an integer, got '" + rv + "'");
    }
    for (const auto& d : deltas) rows.emplace_back(r, d);
  }
  if (rows.empty()) throw cs::PreconditionError("bounds: give --grid or --r (with optional --delta)");
  std::cout << cs::bounds_csv_header() << '\n';
  for (const auto& [r, d] : rows) std::cout << cs::bounds_csv_row(cs::lemma_bound_table(r, d, cfg.precision)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  cfg.workers = default_workers();
  CLI::App app{"Stability of Cayley graphs on abelian groups: classification, censuses, lemma checks and bounds"};
  app.require_subcommand(1);

  auto* classify = app.add_subcommand("classify", "classify one connection set");
  classify->add_option("group", cfg.group, "group spec, e.g. C5 or C2xC10")->required();
  classify->add_option("set", cfg.set_literal, "connection set, e.g. 1,4 or (1,0),(0,3)")->required();
  classify->add_flag("--symmetrize", cfg.symmetrize, "close the set under negation instead of rejecting it");
  classify->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "csv"}));
  classify->add_flag("--strict", cfg.strict, "exit 3 when any tri-state field is indeterminate");
  add_cap_options(classify, cfg);

  auto* census = app.add_subcommand("census", "classify every (or a random sample of) connection set");
  census->add_option("group", cfg.group, "group spec")->required();
  auto* exh = census->add_flag("--exhaustive", cfg.exhaustive, "all 2^c(G) inverse-closed sets");
  census->add_option("--samples", cfg.samples, "Monte-Carlo sample count")->excludes(exh);
  census->add_option("--seed", cfg.seed, "Monte-Carlo seed");
  census->add_option("--workers", cfg.workers, "worker threads (default $CAYLEYSTAB_WORKERS or 1)")->check(CLI::PositiveNumber);
  census->add_flag("--unlabeled", cfg.unlabeled, "also count unlabeled graphs and Hol(G)-orbits");
  census->add_flag("--strict", cfg.strict, "exit 3 when indeterminate records are present");
  census->add_option("--format", cfg.format, "stdout format")->check(CLI::IsMember({"json", "csv"}));
  census->add_option("--json", cfg.json_path, "write the JSON report here");
  census->add_option("--csv", cfg.csv_path, "write the per-bucket CSV here");
  census->add_option("--jsonl", cfg.jsonl_path, "write one JSON record per set here");
  add_cap_options(census, cfg);

  auto* lemmas = app.add_subcommand("check-lemmas", "run the exact verification suite");
  lemmas->add_option("--limit", cfg.limit, "largest group order (default 16)");
  lemmas->add_option("--workers", cfg.workers, "worker threads for the census-based checks")->check(CLI::PositiveNumber);
  lemmas->add_option("--format", cfg.lemma_format, "output format (default csv)")->check(CLI::IsMember({"json", "csv"}));
  add_cap_options(lemmas, cfg);

  auto* bounds = app.add_subcommand("bounds", "evaluate h, k and the per-class bounds as CSV");
  bounds->add_option("--r", cfg.r_values, "r values (repeatable)");
  bounds->add_option("--delta", cfg.deltas, "delta values in (0, 1/2) (repeatable, default 0.1)");
  bounds->add_flag("--grid", cfg.grid, "the default (r, delta) grid");
  bounds->add_option("--precision", cfg.precision, "MPFR precision in bits")->check(CLI::Range(32L, 1L << 20));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*classify) return cmd_classify(cfg);
    if (*census) return cmd_census(cfg);
    if (*lemmas) return cmd_check_lemmas(cfg);
    if (*bounds) {
      // --delta alone checks its domain and lists nothing else
      if (cfg.r_values.empty() && !cfg.grid) {
        for (const auto& d : cfg.deltas) cs::Delta::parse(d);
      }
      return cmd_bounds(cfg);
    }
  } catch (const cs::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return kExitCap;
  } catch (const cs::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const cs::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
