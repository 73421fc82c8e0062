#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "coldstandby/config.hpp"
#include "coldstandby/montecarlo.hpp"

namespace coldstandby {

enum class Pattern {
  /// Paired difference policy 0 - policy 1 is positive for every utility.
  positive,
  /// ... negative for every utility.
  negative,
  /// Positive for some utility and negative for another.
  sign_varies,
  /// The best policy differs between scenarios.
  argmax_varies,
  /// Policies rank in list order: 0 > 1 > 2 > ...
  ranking,
  /// The last policy beats every other one.
  last_best,
};

const char* to_string(Pattern p);

struct Scenario {
  std::string label;
  ExperimentSpec spec;
};

struct CatalogEntry {
  std::string id;
  std::string description;
  Pattern pattern;
  /// Confidence level for the verdict's intervals.
  double level = 0.99;
  std::vector<Scenario> scenarios;
  /// Run the decile survival-dominance check of policy 0 over policy 1.
  bool survival_check = false;
};

/// 1000, 1200, ..., 8000.
std::vector<std::size_t> trace_sizes();

std::vector<std::string> catalog_ids();
/// Canned entry with sample sizes trace_sizes() plus n_final (when larger) and the given seed.
/// Throws std::invalid_argument for an unknown id.
CatalogEntry catalog_entry(const std::string& id, std::size_t n_final, std::uint64_t seed);

struct DecileCheck {
  std::vector<double> points;    // pooled deciles of both samples
  std::vector<double> surv_first;
  std::vector<double> surv_second;
  std::vector<double> tolerance; // 4 binomial standard errors
  bool dominates = false;
  OrderVerdict empirical;        // check_st_empirical(second, first)
};

/// Does the empirical survival function of `first` dominate that of `second`
/// at each pooled decile, within 4 binomial standard errors?
DecileCheck decile_dominance(std::span<const double> first, std::span<const double> second);

struct UtilityOutcome {
  std::string utility;
  std::vector<PolicyEstimate> estimates;  // at n_final
  /// Pattern-specific comparisons at n_final (policy 0 vs 1, adjacent ranks, or best vs rest).
  std::vector<PairedEstimate> pairs;
  std::size_t best = 0;                   // argmax of the estimates
  std::vector<TracePoint> trace;
};

struct ScenarioOutcome {
  std::string label;
  std::string spec_hash;
  std::vector<UtilityOutcome> utilities;
  bool has_decile_check = false;
  DecileCheck decile;
  bool matches = false;
};

struct Reproduction {
  std::string id;
  Pattern pattern;
  std::size_t n_final = 0;
  std::uint64_t seed = 0;
  std::vector<ScenarioOutcome> scenarios;
  bool matches = false;
  std::string summary;
};

Reproduction reproduce(const CatalogEntry& entry, const RunOptions& opts = {});
Reproduction reproduce(const std::string& id, std::size_t n_final, std::uint64_t seed, const RunOptions& opts = {});

/// Verdict document (pattern, per-scenario results, matches, summary).
Json verdict_json(const Reproduction& r);
/// Run metadata: seed, RNG name, per-scenario spec and hash, catalog id, n_final.
Json metadata_json(const CatalogEntry& entry, const Reproduction& r);

/// Writes trace CSVs, verdict.json, and metadata.json under `dir` (created if missing).
/// Returns the written file names.
std::vector<std::string> write_reproduction(const CatalogEntry& entry, const Reproduction& r, const std::string& dir);

/// Rebuilds the catalog entry recorded in metadata_json output.
CatalogEntry entry_from_metadata(const Json& metadata);

struct SweepRow {
  std::size_t policy = 0;
  PolicyEstimate estimate;
  /// Paired comparison against policy 0 (the lexicographically first).
  PairedEstimate versus_first;
};

struct SweepResult {
  std::string utility;
  std::vector<SweepRow> rows;  // sorted by estimate, best first
};

/// Every policy of the spec against the first, on common draws at sample size n.
std::vector<SweepResult> sweep(const ExperimentSpec& spec, std::size_t n, double level, const RunOptions& opts = {});
/// CSV header "rank,policy_id,estimate,se,diff_vs_first,diff_se,ci_low,ci_high".
std::string sweep_csv(const SweepResult& r, const std::vector<AllocationPolicy>& policies);

}  // namespace coldstandby
