#include "coldstandby/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "coldstandby/errors.hpp"

namespace coldstandby {

namespace {

struct Template {
  std::string description;
  Pattern pattern;
  double level;
  bool survival_check;
  // label -> spec without sample sizes and seed
  std::vector<Scenario> scenarios;
};

std::vector<Utility> utilities_series() {
  return {Utility::power(0.8), Utility::power(1.2), Utility::exp_saturating(0.5, 2.0), Utility::log()};
}

std::vector<Utility> utilities_parallel() {
  return {Utility::power(0.8), Utility::power(1.2), Utility::exp_saturating(10.0, 0.1), Utility::log()};
}

std::vector<Utility> power_grid(double from, double step, int count) {
  std::vector<Utility> u;
  for (int i = 0; i < count; ++i) u.push_back(Utility::power(from + step * i));
  return u;
}

AllocationPolicy counts(std::vector<std::size_t> r) { return AllocationPolicy::counts(std::move(r)); }

ExperimentSpec make_spec(ComponentModel c, RedundancyModel r, Topology t, std::vector<Utility> u,
                         std::vector<AllocationPolicy> p) {
  return ExperimentSpec{std::move(c), std::move(r), t, std::move(u), std::move(p), {}, 1};
}

// Two exponential components joined by a Clayton(1) copula in the given mode.
JointLifetimeModel clayton_pair(CopulaMode mode, double rate1, double rate2) {
  return JointLifetimeModel(CopulaModel(Generator::clayton(1.0), mode, 2),
                            {Distribution::exponential(rate1), Distribution::exponential(rate2)});
}

JointLifetimeModel gumbel_barnett_triple() {
  return JointLifetimeModel(CopulaModel(Generator::gumbel_barnett(), CopulaMode::copula, 3),
                            {Distribution::scaled_exp_cdf(1.0), Distribution::beta(3.0, 2.0),
                             Distribution::scaled_exp_cdf(2.0)});
}

RedundancyModel beta_spares() {
  return RedundancyModel::matched({Distribution::beta(3.0, 2.0), Distribution::beta(2.0, 2.0), Distribution::beta(1.0, 2.0)});
}

const CopulaMode kModes[] = {CopulaMode::copula, CopulaMode::survival};

Template make_template(const std::string& id) {
  const auto identity2 = AllocationPolicy::matching({0, 1});
  const auto swapped2 = AllocationPolicy::matching({1, 0});
  const auto identity3 = AllocationPolicy::matching({0, 1, 2});
  const auto swapped3 = AllocationPolicy::matching({1, 0, 2});
  auto weibull_batch = [] { return RedundancyModel::batch(Distribution::weibull(1.3), 5); };
  auto exp_spares = [] {
    return RedundancyModel::matched({Distribution::exponential(0.4), Distribution::exponential(0.6)});
  };

  Template t;
  if (id == "3.1" || id == "3.3") {
    const bool series = id == "3.1";
    t = {series ? "series, Clayton(1) pair Exp(0.8), Exp(0.3), matched spares Exp(0.4), Exp(0.6): identity vs swapped"
                : "parallel, Clayton(1) pair Exp(0.8), Exp(0.3), matched spares Exp(0.4), Exp(0.6): identity vs swapped",
         series ? Pattern::positive : Pattern::negative, 0.99, false, {}};
    for (CopulaMode mode : kModes) {
      t.scenarios.push_back({to_string(mode),
                             make_spec(clayton_pair(mode, 0.8, 0.3), exp_spares(),
                                       series ? Topology::series() : Topology::parallel(),
                                       series ? utilities_series() : utilities_parallel(), {identity2, swapped2})});
    }
  } else if (id == "3.2" || id == "3.4") {
    const bool series = id == "3.2";
    t = {series ? "series, Gumbel-Barnett triple, Beta spares, u = x^gamma for gamma = 0.04..0.40"
                : "parallel, Gumbel-Barnett triple, Beta spares, u = x^gamma for gamma = 1.0..3.0",
         Pattern::sign_varies, 0.99, false, {}};
    t.scenarios.push_back({"copula", make_spec(gumbel_barnett_triple(), beta_spares(),
                                               series ? Topology::series() : Topology::parallel(),
                                               series ? power_grid(0.04, 0.04, 10) : power_grid(1.0, 0.2, 11),
                                               {identity3, swapped3})});
  } else if (id == "3.5") {
    t = {"2-out-of-3, independent Exp(0.5), Exp(0.4), Exp(0.3), one Exp(lambda) spare, u = x^1.2",
         Pattern::argmax_varies, 0.95, false, {}};
    for (double lambda : {0.4, 2.2}) {
      char label[32];
      std::snprintf(label, sizeof label, "lambda_%g", lambda);
      JointLifetimeModel indep(CopulaModel(Generator::independence(), CopulaMode::copula, 3),
                               {Distribution::exponential(0.5), Distribution::exponential(0.4),
                                Distribution::exponential(0.3)});
      t.scenarios.push_back({label, make_spec(indep, RedundancyModel::batch(Distribution::exponential(lambda), 1),
                                              Topology::k_out_of_n(2), {Utility::power(1.2)},
                                              {counts({1, 0, 0}), counts({0, 1, 0}), counts({0, 0, 1})})});
    }
  } else if (id == "4.1" || id == "4.2" || id == "4.3" || id == "4.4") {
    const bool series = id == "4.1" || id == "4.2";
    std::vector<Utility> u;
    std::vector<AllocationPolicy> p;
    if (id == "4.1") {
      t = {"series, Clayton(1) pair Exp(0.5), Exp(0.3), five Weibull(1.3) spares: (3,2) vs (2,3)", Pattern::positive,
           0.99, true, {}};
      u = utilities_series();
      p = {counts({3, 2}), counts({2, 3})};
    } else if (id == "4.2") {
      t = {"series, Clayton(1) pair Exp(0.5), Exp(0.3), five Weibull(1.3) spares: (3,2) > (4,1) > (5,0)",
           Pattern::ranking, 0.95, false, {}};
      u = {Utility::power(0.8), Utility::power(1.2)};
      p = {counts({3, 2}), counts({4, 1}), counts({5, 0})};
    } else if (id == "4.3") {
      t = {"parallel, Clayton(1) pair Exp(0.5), Exp(0.3), five Weibull(1.3) spares: (3,2) vs (2,3)",
           Pattern::negative, 0.99, false, {}};
      u = utilities_parallel();
      p = {counts({3, 2}), counts({2, 3})};
    } else {
      t = {"parallel, Clayton(1) pair Exp(0.5), Exp(0.3), five Weibull(1.3) spares: (0,5) best of (2,3), (1,4), (0,5)",
           Pattern::last_best, 0.95, false, {}};
      u = {Utility::power(0.8), Utility::power(1.2)};
      p = {counts({2, 3}), counts({1, 4}), counts({0, 5})};
    }
    for (CopulaMode mode : kModes) {
      t.scenarios.push_back({to_string(mode), make_spec(clayton_pair(mode, 0.5, 0.3), weibull_batch(),
                                                        series ? Topology::series() : Topology::parallel(), u, p)});
    }
  } else {
    throw std::invalid_argument("unknown example id '" + id + "'");
  }
  return t;
}

std::vector<PairedEstimate> pattern_pairs(Pattern pattern, const SimulationResult& sim, const Utility& u,
                                          const std::vector<PolicyEstimate>& est, std::size_t n, double level) {
  std::vector<PairedEstimate> pairs;
  const std::size_t k = est.size();
  switch (pattern) {
    case Pattern::positive:
    case Pattern::negative:
    case Pattern::sign_varies:
      pairs.push_back(paired_compare(sim, u, 0, 1, n, level));
      break;
    case Pattern::ranking:
      for (std::size_t i = 0; i + 1 < k; ++i) pairs.push_back(paired_compare(sim, u, i, i + 1, n, level));
      break;
    case Pattern::last_best:
      for (std::size_t i = 0; i + 1 < k; ++i) pairs.push_back(paired_compare(sim, u, k - 1, i, n, level));
      break;
    case Pattern::argmax_varies: {
      std::vector<std::size_t> order(k);
      for (std::size_t i = 0; i < k; ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return est[a].estimate > est[b].estimate; });
      pairs.push_back(paired_compare(sim, u, order[0], order[1], n, level));
      break;
    }
  }
  return pairs;
}

bool all_signs(const std::vector<PairedEstimate>& pairs, int sign) {
  return std::all_of(pairs.begin(), pairs.end(), [&](const PairedEstimate& p) { return p.sign() == sign; });
}

std::string fmt_count(const char* what, std::size_t good, std::size_t total) {
  return std::string(what) + " " + std::to_string(good) + "/" + std::to_string(total) + " utilities";
}

}  // namespace

const char* to_string(Pattern p) {
  switch (p) {
    case Pattern::positive: return "positive";
    case Pattern::negative: return "negative";
    case Pattern::sign_varies: return "sign_varies";
    case Pattern::argmax_varies: return "argmax_varies";
    case Pattern::ranking: return "ranking";
    case Pattern::last_best: return "last_best";
  }
  return "?";
}

namespace {
Pattern parse_pattern(const std::string& s) {
  for (Pattern p : {Pattern::positive, Pattern::negative, Pattern::sign_varies, Pattern::argmax_varies,
                    Pattern::ranking, Pattern::last_best}) {
    if (s == to_string(p)) return p;
  }
  throw ConfigError("$.pattern", "unknown pattern '" + s + "'");
}
}  // namespace

std::vector<std::size_t> trace_sizes() {
  std::vector<std::size_t> s;
  for (std::size_t n = 1000; n <= 8000; n += 200) s.push_back(n);
  return s;
}

std::vector<std::string> catalog_ids() { return {"3.1", "3.2", "3.3", "3.4", "3.5", "4.1", "4.2", "4.3", "4.4"}; }

CatalogEntry catalog_entry(const std::string& id, std::size_t n_final, std::uint64_t seed) {
  if (n_final < 2) throw std::invalid_argument("n_final must be at least 2");
  auto t = make_template(id);
  std::vector<std::size_t> sizes;
  for (std::size_t n : trace_sizes()) {
    if (n < n_final) sizes.push_back(n);
  }
  sizes.push_back(n_final);
  CatalogEntry e{id, t.description, t.pattern, t.level, std::move(t.scenarios), t.survival_check};
  for (auto& s : e.scenarios) {
    s.spec.sample_sizes = sizes;
    s.spec.seed = seed;
    s.spec.validate();
  }
  return e;
}

DecileCheck decile_dominance(std::span<const double> first, std::span<const double> second) {
  if (first.size() != second.size() || first.empty()) throw ContractError("decile check needs equal, nonempty samples");
  DecileCheck d;
  std::vector<double> pooled(first.begin(), first.end());
  pooled.insert(pooled.end(), second.begin(), second.end());
  std::vector<double> a(first.begin(), first.end());
  std::vector<double> b(second.begin(), second.end());
  std::sort(pooled.begin(), pooled.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size());
  auto surv = [&](const std::vector<double>& v, double t) {
    return static_cast<double>(v.end() - std::upper_bound(v.begin(), v.end(), t)) / n;
  };
  d.dominates = true;
  for (int k = 1; k <= 9; ++k) {
    const auto idx = static_cast<std::size_t>(std::floor(k / 10.0 * static_cast<double>(pooled.size() - 1)));
    const double t = pooled[idx];
    const double s1 = surv(a, t);
    const double s2 = surv(b, t);
    const double tol = 4.0 * std::sqrt((s1 * (1.0 - s1) + s2 * (1.0 - s2)) / n);
    d.points.push_back(t);
    d.surv_first.push_back(s1);
    d.surv_second.push_back(s2);
    d.tolerance.push_back(tol);
    if (s1 < s2 - tol) d.dominates = false;
  }
  d.empirical = check_st_empirical(second, first);
  return d;
}

Reproduction reproduce(const CatalogEntry& entry, const RunOptions& opts) {
  Reproduction r;
  r.id = entry.id;
  r.pattern = entry.pattern;
  r.n_final = entry.scenarios.front().spec.max_sample_size();
  r.seed = entry.scenarios.front().spec.seed;
  std::vector<std::string> notes;
  for (const auto& sc : entry.scenarios) {
    const auto& spec = sc.spec;
    const auto sim = simulate(spec, spec.max_sample_size(), opts);
    ScenarioOutcome out;
    out.label = sc.label;
    out.spec_hash = spec_hash(spec);
    std::size_t positive = 0;
    std::size_t negative = 0;
    bool all_pairs_positive = true;
    for (const auto& u : spec.utilities) {
      auto rep = convergence_trace(sim, spec, u);
      UtilityOutcome uo;
      uo.utility = rep.utility;
      uo.estimates = rep.estimates;
      uo.trace = std::move(rep.trace);
      for (std::size_t p = 1; p < uo.estimates.size(); ++p) {
        if (uo.estimates[p].estimate > uo.estimates[uo.best].estimate) uo.best = p;
      }
      uo.pairs = pattern_pairs(entry.pattern, sim, u, uo.estimates, sim.n, entry.level);
      if (all_signs(uo.pairs, 1)) ++positive;
      if (all_signs(uo.pairs, -1)) ++negative;
      if (!all_signs(uo.pairs, 1)) all_pairs_positive = false;
      out.utilities.push_back(std::move(uo));
    }
    const std::size_t total = spec.utilities.size();
    std::string note = sc.label + ": ";
    switch (entry.pattern) {
      case Pattern::positive:
        out.matches = positive == total;
        note += fmt_count("positive differences,", positive, total);
        break;
      case Pattern::negative:
        out.matches = negative == total;
        note += fmt_count("negative differences,", negative, total);
        break;
      case Pattern::sign_varies:
        out.matches = positive > 0 && negative > 0;
        note += (out.matches ? "sign varies over the utility grid (" : "sign does not vary (") +
                std::to_string(positive) + " positive, " + std::to_string(negative) + " negative, " +
                std::to_string(total - positive - negative) + " undecided)";
        break;
      case Pattern::ranking:
        out.matches = all_pairs_positive;
        note += fmt_count("ranking in listed order for", positive, total);
        break;
      case Pattern::last_best:
        out.matches = all_pairs_positive;
        note += spec.policies.back().label() + " maximal for " + std::to_string(positive) + "/" +
                std::to_string(total) + " utilities";
        break;
      case Pattern::argmax_varies:
        out.matches = all_pairs_positive;
        note += "argmax " + spec.policies[out.utilities.front().best].label() +
                (all_pairs_positive ? ", separated from runner-up" : ", not separated from runner-up");
        break;
    }
    if (entry.survival_check && spec.policies.size() >= 2) {
      out.has_decile_check = true;
      out.decile = decile_dominance(sim.lifetimes[0], sim.lifetimes[1]);
      const auto* joint = std::get_if<JointLifetimeModel>(&spec.components);
      // The survival-function dominance is only claimed under a survival copula.
      const bool required = joint && joint->copula().mode() == CopulaMode::survival;
      note += std::string(", decile survival dominance ") + (out.decile.dominates ? "holds" : "fails") +
              (required ? "" : " (diagnostic)");
      if (required && !out.decile.dominates) out.matches = false;
    }
    notes.push_back(note);
    r.scenarios.push_back(std::move(out));
  }
  r.matches = std::all_of(r.scenarios.begin(), r.scenarios.end(), [](const ScenarioOutcome& s) { return s.matches; });
  if (entry.pattern == Pattern::argmax_varies) {
    bool differs = false;
    for (std::size_t i = 1; i < r.scenarios.size(); ++i) {
      if (r.scenarios[i].utilities.front().best != r.scenarios[0].utilities.front().best) differs = true;
    }
    r.matches = r.matches && differs;
    notes.push_back(differs ? "argmax differs across scenarios" : "argmax identical across scenarios");
  }
  r.summary = r.matches ? "matches" : "mismatch";
  for (const auto& n : notes) r.summary += "; " + n;
  return r;
}

Reproduction reproduce(const std::string& id, std::size_t n_final, std::uint64_t seed, const RunOptions& opts) {
  return reproduce(catalog_entry(id, n_final, seed), opts);
}

Json verdict_json(const Reproduction& r) {
  Json scenarios = Json::array();
  for (const auto& s : r.scenarios) {
    Json utilities = Json::array();
    for (const auto& u : s.utilities) {
      Json est = Json::array();
      Json pairs = Json::array();
      for (const auto& e : u.estimates) est.push_back({{"policy", e.policy}, {"estimate", e.estimate}, {"se", e.se}});
      for (const auto& p : u.pairs) {
        pairs.push_back({{"first", p.first}, {"second", p.second}, {"difference", p.difference}, {"se", p.se},
                         {"ci_low", p.ci_low}, {"ci_high", p.ci_high}, {"level", p.level}, {"sign", p.sign()}});
      }
      utilities.push_back({{"utility", u.utility}, {"estimates", est}, {"pairs", pairs}, {"best", u.best}});
    }
    Json sj{{"label", s.label}, {"spec_hash", s.spec_hash}, {"matches", s.matches}, {"utilities", utilities}};
    if (s.has_decile_check) {
      sj["decile_check"] = {{"points", s.decile.points},
                            {"survival_first", s.decile.surv_first},
                            {"survival_second", s.decile.surv_second},
                            {"tolerance", s.decile.tolerance},
                            {"dominates", s.decile.dominates},
                            {"empirical_st", to_string(s.decile.empirical.direction)},
                            {"empirical_st_violation", s.decile.empirical.worst_violation}};
    }
    scenarios.push_back(std::move(sj));
  }
  return Json{{"id", r.id},           {"pattern", to_string(r.pattern)}, {"n_final", r.n_final},
              {"seed", r.seed},       {"matches", r.matches},             {"summary", r.summary},
              {"scenarios", scenarios}};
}

Json metadata_json(const CatalogEntry& entry, const Reproduction& r) {
  Json scenarios = Json::array();
  for (const auto& s : entry.scenarios) {
    scenarios.push_back({{"label", s.label}, {"spec", to_json(s.spec)}, {"spec_hash", spec_hash(s.spec)}});
  }
  return Json{{"id", entry.id},
              {"description", entry.description},
              {"pattern", to_string(entry.pattern)},
              {"level", entry.level},
              {"survival_check", entry.survival_check},
              {"n_final", r.n_final},
              {"seed", r.seed},
              {"rng", std::string(RandomStream::kAlgorithm)},
              {"chunk_size", kChunkSize},
              {"scenarios", scenarios}};
}

CatalogEntry entry_from_metadata(const Json& m) {
  auto str = [&](const char* key) {
    if (!m.contains(key) || !m[key].is_string()) throw ConfigError(std::string("$.") + key, "expected a string");
    return m[key].get<std::string>();
  };
  CatalogEntry e;
  e.id = str("id");
  e.description = str("description");
  e.pattern = parse_pattern(str("pattern"));
  if (!m.contains("level") || !m["level"].is_number()) throw ConfigError("$.level", "expected a number");
  e.level = m["level"].get<double>();
  e.survival_check = m.value("survival_check", false);
  if (!m.contains("scenarios") || !m["scenarios"].is_array()) throw ConfigError("$.scenarios", "expected an array");
  for (std::size_t i = 0; i < m["scenarios"].size(); ++i) {
    const Json& s = m["scenarios"][i];
    const std::string path = "$.scenarios[" + std::to_string(i) + "]";
    if (!s.contains("label") || !s.contains("spec")) throw ConfigError(path, "expected label and spec");
    try {
      e.scenarios.push_back({s["label"].get<std::string>(), parse_experiment(s["spec"])});
    } catch (const ConfigError& err) {
      throw ConfigError(path + ".spec" + err.path().substr(1), err.what());
    }
  }
  if (e.scenarios.empty()) throw ConfigError("$.scenarios", "no scenarios");
  return e;
}

std::vector<std::string> write_reproduction(const CatalogEntry& entry, const Reproduction& r, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> files;
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    out << text;
    files.push_back(name);
  };
  for (std::size_t s = 0; s < r.scenarios.size(); ++s) {
    const auto& sc = r.scenarios[s];
    for (std::size_t u = 0; u < sc.utilities.size(); ++u) {
      write("trace_" + sc.label + "_u" + std::to_string(u + 1) + ".csv",
            trace_csv(sc.utilities[u].trace, entry.scenarios[s].spec.policies));
    }
  }
  write("verdict.json", verdict_json(r).dump(2) + "\n");
  write("metadata.json", metadata_json(entry, r).dump(2) + "\n");
  return files;
}

std::vector<SweepResult> sweep(const ExperimentSpec& spec, std::size_t n, double level, const RunOptions& opts) {
  auto s = spec;
  s.sample_sizes = {n};
  const auto sim = simulate(s, n, opts);
  std::vector<SweepResult> out;
  for (const auto& u : s.utilities) {
    SweepResult r;
    r.utility = u.describe();
    for (std::size_t p = 0; p < s.policies.size(); ++p) {
      SweepRow row;
      row.policy = p;
      row.estimate = estimate(sim, u, p, n);
      row.versus_first = paired_compare(sim, u, p, 0, n, level);
      r.rows.push_back(row);
    }
    std::stable_sort(r.rows.begin(), r.rows.end(),
                     [](const SweepRow& a, const SweepRow& b) { return a.estimate.estimate > b.estimate.estimate; });
    out.push_back(std::move(r));
  }
  return out;
}

std::string sweep_csv(const SweepResult& r, const std::vector<AllocationPolicy>& policies) {
  std::string out = "rank,policy_id,estimate,se,diff_vs_first,diff_se,ci_low,ci_high\n";
  char buf[256];
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    std::snprintf(buf, sizeof buf, "%zu,\"%s\",%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i + 1,
                  policies.at(row.policy).label().c_str(), row.estimate.estimate, row.estimate.se,
                  row.versus_first.difference, row.versus_first.se, row.versus_first.ci_low, row.versus_first.ci_high);
    out += buf;
  }
  return out;
}

}  // namespace coldstandby
