#include "coldstandby/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "coldstandby/errors.hpp"

namespace coldstandby {

DiscreteJoint DiscreteJoint::from(const DiscreteBivariate& d) {
  DiscreteJoint j;
  j.dimension = 2;
  const std::size_t k = d.size();
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (d.p(a, b) <= 0.0) continue;
      j.atoms.push_back(d.support()[a]);
      j.atoms.push_back(d.support()[b]);
      j.probs.push_back(d.p(a, b));
    }
  }
  return j;
}

DiscreteJoint DiscreteJoint::independent(std::span<const Distribution> marginals) {
  DiscreteJoint j;
  j.dimension = marginals.size();
  std::vector<const DiscreteFinite*> laws;
  for (const auto& m : marginals) {
    const auto* f = std::get_if<DiscreteFinite>(&m.kind());
    if (!f) throw ContractError("independent discrete joint needs finite marginals");
    laws.push_back(f);
  }
  std::vector<std::size_t> idx(j.dimension, 0);
  while (true) {
    double p = 1.0;
    for (std::size_t c = 0; c < j.dimension; ++c) {
      j.atoms.push_back(laws[c]->support[idx[c]]);
      p *= laws[c]->pmf[idx[c]];
    }
    j.probs.push_back(p);
    std::size_t c = 0;
    while (c < j.dimension && ++idx[c] == laws[c]->support.size()) idx[c++] = 0;
    if (c == j.dimension) break;
  }
  return j;
}

void DiscreteJoint::validate() const {
  if (dimension == 0 || probs.empty()) throw ContractError("discrete joint law is empty");
  if (atoms.size() != dimension * probs.size()) throw ContractError("discrete joint atoms and probabilities differ in count");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw ContractError("discrete joint probabilities must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ContractError("discrete joint probabilities must sum to 1");
}

std::size_t dimension(const ComponentModel& m) {
  if (const auto* dj = std::get_if<DiscreteJoint>(&m)) return dj->dimension;
  return std::get<JointLifetimeModel>(m).dimension();
}

void ExperimentSpec::validate() const {
  const std::size_t n = coldstandby::dimension(components);
  if (const auto* dj = std::get_if<DiscreteJoint>(&components)) dj->validate();
  topology.validate(n);
  if (utilities.empty()) throw ContractError("experiment needs at least one utility");
  if (policies.empty()) throw ContractError("experiment needs at least one policy");
  if (sample_sizes.empty()) throw ContractError("experiment needs at least one sample size");
  for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
    if (sample_sizes[i] < 2) throw ContractError("sample sizes must be at least 2");
    if (i && sample_sizes[i] <= sample_sizes[i - 1]) throw ContractError("sample sizes must be strictly ascending");
  }
  for (const auto& p : policies) {
    if (p.size() != n) throw ContractError("policy " + p.label() + " does not have one entry per component");
    if (p.is_matching()) {
      if (!redundancy.is_matched() || redundancy.count() != n) {
        throw ContractError("matching policy needs one matched spare per component");
      }
    } else {
      if (redundancy.is_matched()) throw ContractError("count policy needs a batch redundancy model");
      if (p.total() != redundancy.count()) {
        throw ContractError("policy " + p.label() + " allocates " + std::to_string(p.total()) + " of " +
                            std::to_string(redundancy.count()) + " spares");
      }
    }
  }
}

std::size_t ExperimentSpec::max_sample_size() const { return sample_sizes.back(); }

namespace {

// Draws the component and spare vectors of one replication.
class DrawSource {
 public:
  explicit DrawSource(const ExperimentSpec& spec) : spec_(spec) {
    if (const auto* joint = std::get_if<JointLifetimeModel>(&spec.components)) {
      sampler_.emplace(joint->copula());
      uniforms_.resize(joint->dimension());
    } else {
      const auto& dj = std::get<DiscreteJoint>(spec.components);
      cumulative_.resize(dj.outcomes());
      double acc = 0.0;
      for (std::size_t k = 0; k < dj.outcomes(); ++k) cumulative_[k] = (acc += dj.probs[k]);
    }
  }

  void draw(RandomStream& rng, std::size_t index, std::span<double> x, std::span<double> y) {
    if (sampler_) {
      const auto& joint = std::get<JointLifetimeModel>(spec_.components);
      sampler_->draw_uniforms(rng, uniforms_, index);
      sampler_->to_lifetimes(uniforms_, joint.marginals(), x);
    } else {
      const auto& dj = std::get<DiscreteJoint>(spec_.components);
      const double u = rng.uniform() * cumulative_.back();
      auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      const std::size_t k = std::min<std::size_t>(it - cumulative_.begin(), dj.outcomes() - 1);
      const auto a = dj.atom(k);
      std::copy(a.begin(), a.end(), x.begin());
    }
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = spec_.redundancy.law(i).quantile_open(rng.uniform());
  }

 private:
  const ExperimentSpec& spec_;
  std::optional<CopulaSampler> sampler_;
  std::vector<double> uniforms_;
  std::vector<double> cumulative_;
};

std::size_t worker_count(std::size_t requested, std::size_t chunks) {
  std::size_t t = requested;
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(t, chunks));
}

// Runs job(chunk) for every chunk; rethrows the failure of the lowest chunk.
template <class Job>
void for_each_chunk(std::size_t chunks, std::size_t threads, Job&& job) {
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_chunk = std::numeric_limits<std::size_t>::max();
  std::exception_ptr failure;
  auto worker = [&] {
    while (true) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        job(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (c < failed_chunk) {
          failed_chunk = c;
          failure = std::current_exception();
        }
      }
    }
  };
  const std::size_t n = worker_count(threads, chunks);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

SimulationResult simulate(const ExperimentSpec& spec, std::size_t n, const RunOptions& opts) {
  spec.validate();
  const std::size_t dim = coldstandby::dimension(spec.components);
  const std::size_t spares = spec.redundancy.count();
  const std::size_t policies = spec.policies.size();
  SimulationResult result;
  result.n = n;
  result.lifetimes.assign(policies, std::vector<double>(n));
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  // One stream shared by all policies, or one stream per policy.
  const std::size_t streams = opts.common_random_numbers ? 1 : policies;

  for_each_chunk(chunks * streams, opts.threads, [&](std::size_t job) {
    const std::size_t stream = job / chunks;
    const std::size_t chunk = job % chunks;
    RandomStream rng(spec.seed, opts.common_random_numbers ? 0 : stream + 1, chunk);
    DrawSource source(spec);
    std::vector<double> x(dim), y(spares), nodes(dim);
    const std::size_t begin = chunk * kChunkSize;
    const std::size_t end = std::min(n, begin + kChunkSize);
    for (std::size_t i = begin; i < end; ++i) {
      source.draw(rng, i, x, y);
      for (std::size_t p = 0; p < policies; ++p) {
        if (!opts.common_random_numbers && p != stream) continue;
        node_lifetimes(x, y, spec.policies[p], nodes);
        result.lifetimes[p][i] = system_lifetime_inplace(spec.topology, nodes);
      }
    }
  });
  return result;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

MeanSe mean_se(std::span<const double> v) {
  if (v.size() < 2) throw ContractError("standard error needs at least two values");
  const double n = static_cast<double>(v.size());
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; })) return {v[0], 0.0};
  const double mean = pairwise_sum(v) / n;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
  const double var = pairwise_sum(sq) / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

double normal_critical(double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * level);
}

namespace {
std::vector<double> utility_values(const SimulationResult& sim, const Utility& u, std::size_t policy, std::size_t n) {
  if (policy >= sim.lifetimes.size()) throw ContractError("policy index out of range");
  if (n > sim.n) throw ContractError("requested more draws than were simulated");
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = u(sim.lifetimes[policy][i]);
  return v;
}
}  // namespace

PolicyEstimate estimate(const SimulationResult& sim, const Utility& u, std::size_t policy, std::size_t n) {
  const auto ms = mean_se(utility_values(sim, u, policy, n));
  return {policy, n, ms.mean, ms.se};
}

PairedEstimate paired_compare(const SimulationResult& sim, const Utility& u, std::size_t first, std::size_t second,
                              std::size_t n, double level) {
  auto a = utility_values(sim, u, first, n);
  const auto b = utility_values(sim, u, second, n);
  for (std::size_t i = 0; i < n; ++i) a[i] -= b[i];
  const auto ms = mean_se(a);
  const double z = normal_critical(level);
  return {first, second, n, ms.mean, ms.se, level, ms.mean - z * ms.se, ms.mean + z * ms.se};
}

PairedEstimate unpaired_compare(const PolicyEstimate& a, const PolicyEstimate& b, double level) {
  const double diff = a.estimate - b.estimate;
  const double se = std::sqrt(a.se * a.se + b.se * b.se);
  const double z = normal_critical(level);
  return {a.policy, b.policy, std::min(a.n, b.n), diff, se, level, diff - z * se, diff + z * se};
}

PolicyEstimate estimate(const ExperimentSpec& spec, std::size_t policy, std::size_t n, const RunOptions& opts,
                        std::size_t utility) {
  const auto sim = simulate(spec, n, opts);
  return estimate(sim, spec.utilities.at(utility), policy, n);
}

PairedEstimate paired_compare(const ExperimentSpec& spec, std::size_t first, std::size_t second, std::size_t n,
                              double level, const RunOptions& opts, std::size_t utility) {
  if (!opts.common_random_numbers) throw ContractError("paired comparison needs common random numbers");
  const auto sim = simulate(spec, n, opts);
  return paired_compare(sim, spec.utilities.at(utility), first, second, n, level);
}

EstimateReport convergence_trace(const SimulationResult& sim, const ExperimentSpec& spec, const Utility& u) {
  EstimateReport r;
  r.utility = u.describe();
  for (std::size_t n : spec.sample_sizes) {
    for (std::size_t p = 0; p < spec.policies.size(); ++p) {
      const auto e = estimate(sim, u, p, n);
      r.trace.push_back({n, p, e.estimate, e.se});
      if (n == spec.max_sample_size()) r.estimates.push_back(e);
    }
  }
  return r;
}

EstimateReport convergence_trace(const ExperimentSpec& spec, std::size_t first, std::size_t second,
                                 const RunOptions& opts, std::size_t utility, double level) {
  const auto sim = simulate(spec, spec.max_sample_size(), opts);
  const Utility& u = spec.utilities.at(utility);
  auto r = convergence_trace(sim, spec, u);
  if (opts.common_random_numbers) r.pairs.push_back(paired_compare(sim, u, first, second, sim.n, level));
  return r;
}

std::string trace_csv(const std::vector<TracePoint>& trace, const std::vector<AllocationPolicy>& policies) {
  std::string out = "n,policy_id,estimate,se\n";
  char buf[128];
  for (const auto& t : trace) {
    std::snprintf(buf, sizeof buf, "%zu,\"%s\",%.17g,%.17g\n", t.n, policies.at(t.policy).label().c_str(), t.estimate,
                  t.se);
    out += buf;
  }
  return out;
}

double brute_force_expectation(const DiscreteJoint& joint, const RedundancyModel& redundancy, const Topology& topology,
                               const Utility& u, const AllocationPolicy& policy) {
  joint.validate();
  const std::size_t spares = redundancy.count();
  std::vector<const DiscreteFinite*> laws(spares);
  double outcomes = static_cast<double>(joint.outcomes());
  for (std::size_t i = 0; i < spares; ++i) {
    laws[i] = std::get_if<DiscreteFinite>(&redundancy.law(i).kind());
    if (!laws[i]) throw ContractError("brute force needs finite discrete spare laws");
    outcomes *= static_cast<double>(laws[i]->support.size());
  }
  if (outcomes > static_cast<double>(kMaxBruteForceOutcomes)) {
    throw SizeError("brute force would enumerate " + std::to_string(outcomes) + " outcomes");
  }
  const std::size_t n = joint.dimension;
  std::vector<double> y(spares), nodes(n);
  std::vector<std::size_t> idx(spares, 0);
  double total = 0.0;
  for (std::size_t k = 0; k < joint.outcomes(); ++k) {
    const auto x = joint.atom(k);
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      double p = joint.probs[k];
      for (std::size_t i = 0; i < spares; ++i) {
        y[i] = laws[i]->support[idx[i]];
        p *= laws[i]->pmf[idx[i]];
      }
      node_lifetimes(x, y, policy, nodes);
      total += p * u(system_lifetime_inplace(topology, nodes));
      std::size_t i = 0;
      while (i < spares && ++idx[i] == laws[i]->support.size()) idx[i++] = 0;
      if (i == spares) break;
    }
  }
  return total;
}

}  // namespace coldstandby
