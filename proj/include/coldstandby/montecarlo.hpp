#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "coldstandby/dependence.hpp"
#include "coldstandby/systems.hpp"
#include "coldstandby/utilities.hpp"

namespace coldstandby {

/// Finite joint law of the component lifetimes: atoms (one n-vector each) with probabilities.
struct DiscreteJoint {
  std::size_t dimension = 0;
  std::vector<double> atoms;  // row-major, atoms.size() = dimension * probs.size()
  std::vector<double> probs;

  static DiscreteJoint from(const DiscreteBivariate& d);
  /// Independent components with the given finite marginals.
  static DiscreteJoint independent(std::span<const Distribution> marginals);
  std::size_t outcomes() const { return probs.size(); }
  std::span<const double> atom(std::size_t k) const { return {atoms.data() + k * dimension, dimension}; }
  void validate() const;
};

using ComponentModel = std::variant<JointLifetimeModel, DiscreteJoint>;

std::size_t dimension(const ComponentModel& m);

struct ExperimentSpec {
  ComponentModel components;
  RedundancyModel redundancy;
  Topology topology;
  /// Every utility is evaluated on the same simulated lifetimes.
  std::vector<Utility> utilities;
  std::vector<AllocationPolicy> policies;
  std::vector<std::size_t> sample_sizes;
  std::uint64_t seed = 1;

  /// Throws ContractError on inconsistent dimensions, empty lists, or unsorted sample sizes.
  void validate() const;
  std::size_t max_sample_size() const;
};

struct RunOptions {
  /// Worker threads; 0 means one per hardware thread. Never changes results.
  std::size_t threads = 1;
  /// Share every draw across policies. When false each policy gets its own stream.
  bool common_random_numbers = true;
};

/// Draws per RNG chunk. Chunk c covers draw indices [c * kChunkSize, (c + 1) * kChunkSize).
inline constexpr std::size_t kChunkSize = 4096;

/// System lifetimes per policy for draws 0..n-1. Draw i depends only on (seed, i),
/// so a shorter run is a prefix of a longer one.
struct SimulationResult {
  std::size_t n = 0;
  std::vector<std::vector<double>> lifetimes;  // [policy][draw]
};

SimulationResult simulate(const ExperimentSpec& spec, std::size_t n, const RunOptions& opts = {});

/// Sum in a fixed pairwise tree; the result depends only on the values and their order.
double pairwise_sum(std::span<const double> v);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

/// Sample mean and standard error (sample sd / sqrt(n)).
MeanSe mean_se(std::span<const double> v);

struct PolicyEstimate {
  std::size_t policy = 0;
  std::size_t n = 0;
  double estimate = 0.0;
  double se = 0.0;
};

struct PairedEstimate {
  std::size_t first = 0;
  std::size_t second = 0;
  std::size_t n = 0;
  /// Mean of u(T_first) - u(T_second) over the shared draws.
  double difference = 0.0;
  double se = 0.0;
  double level = 0.99;
  double ci_low = 0.0;
  double ci_high = 0.0;

  bool excludes_zero() const { return ci_low > 0.0 || ci_high < 0.0; }
  /// +1 / -1 when the CI lies strictly above / below zero, else 0.
  int sign() const { return ci_low > 0.0 ? 1 : (ci_high < 0.0 ? -1 : 0); }
};

/// Two-sided normal quantile for a confidence level, e.g. 2.5758 at 0.99.
double normal_critical(double level);

/// Uses the first n draws of `sim`.
PolicyEstimate estimate(const SimulationResult& sim, const Utility& u, std::size_t policy, std::size_t n);
PairedEstimate paired_compare(const SimulationResult& sim, const Utility& u, std::size_t first, std::size_t second,
                              std::size_t n, double level);

/// Unpaired difference of two independent estimates, for variance comparisons.
PairedEstimate unpaired_compare(const PolicyEstimate& a, const PolicyEstimate& b, double level);

PolicyEstimate estimate(const ExperimentSpec& spec, std::size_t policy, std::size_t n, const RunOptions& opts = {},
                        std::size_t utility = 0);
PairedEstimate paired_compare(const ExperimentSpec& spec, std::size_t first, std::size_t second, std::size_t n,
                              double level, const RunOptions& opts = {}, std::size_t utility = 0);

struct TracePoint {
  std::size_t n = 0;
  std::size_t policy = 0;
  double estimate = 0.0;
  double se = 0.0;
};

struct EstimateReport {
  std::string utility;
  std::vector<PolicyEstimate> estimates;  // at the largest sample size
  std::vector<PairedEstimate> pairs;
  std::vector<TracePoint> trace;          // grouped by n ascending, then policy
};

/// Estimates for every policy at every sample size from one simulation of
/// the largest size; smaller sizes use prefixes of the same draws.
EstimateReport convergence_trace(const SimulationResult& sim, const ExperimentSpec& spec, const Utility& u);
EstimateReport convergence_trace(const ExperimentSpec& spec, std::size_t first, std::size_t second,
                                 const RunOptions& opts = {}, std::size_t utility = 0, double level = 0.99);

/// CSV with header "n,policy_id,estimate,se"; policy_id is the policy label.
std::string trace_csv(const std::vector<TracePoint>& trace, const std::vector<AllocationPolicy>& policies);

inline constexpr std::size_t kMaxBruteForceOutcomes = 10'000'000;

/// Exact E[u(T)] by enumerating every component atom and every spare outcome.
/// All spare laws must be finite discrete. Throws SizeError past 1e7 outcomes.
double brute_force_expectation(const DiscreteJoint& joint, const RedundancyModel& redundancy, const Topology& topology,
                               const Utility& u, const AllocationPolicy& policy);

}  // namespace coldstandby
