#include "coldstandby/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "coldstandby/errors.hpp"

namespace coldstandby {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string at(const std::string& path, const std::string& key) { return path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void allow_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; })) {
      throw ConfigError(at(path, it.key()), "unknown field");
    }
  }
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  require_object(j, path);
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(at(path, key), "missing field");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

double number_field(const Json& j, const char* key, const std::string& path) {
  return number(field(j, key, path), at(path, key));
}

std::size_t index_value(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

std::string string_field(const Json& j, const char* key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_string()) throw ConfigError(at(path, key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> number_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], at(path, i)));
  return out;
}

template <class F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

Distribution parse_distribution(const Json& j, const std::string& path) {
  const std::string kind = string_field(j, "kind", path);
  return wrap(path, [&] {
    if (kind == "exponential") {
      allow_keys(j, path, {"kind", "rate"});
      return Distribution::exponential(number_field(j, "rate", path));
    }
    if (kind == "weibull") {
      if (j.contains("scale")) {
        throw ConfigError(at(path, "scale"),
                          "weibull scale is fixed to 1; divide every lifetime by the scale before configuring");
      }
      allow_keys(j, path, {"kind", "shape"});
      return Distribution::weibull(number_field(j, "shape", path));
    }
    if (kind == "beta") {
      allow_keys(j, path, {"kind", "a", "b"});
      return Distribution::beta(number_field(j, "a", path), number_field(j, "b", path));
    }
    if (kind == "scaled_exp_cdf") {
      allow_keys(j, path, {"kind", "c"});
      return Distribution::scaled_exp_cdf(number_field(j, "c", path));
    }
    if (kind == "discrete") {
      allow_keys(j, path, {"kind", "support", "pmf"});
      return Distribution::discrete(number_array(field(j, "support", path), at(path, "support")),
                                    number_array(field(j, "pmf", path), at(path, "pmf")));
    }
    if (kind == "tabulated") {
      allow_keys(j, path, {"kind", "x0", "step", "cdf"});
      return Distribution::tabulated(number_field(j, "x0", path), number_field(j, "step", path),
                                     number_array(field(j, "cdf", path), at(path, "cdf")));
    }
    throw ConfigError(at(path, "kind"), "unknown distribution kind '" + kind + "'");
  });
}

Json to_json(const Distribution& d) {
  return std::visit(Overloaded{
                        [](const Exponential& e) { return Json{{"kind", "exponential"}, {"rate", e.rate}}; },
                        [](const Weibull& w) { return Json{{"kind", "weibull"}, {"shape", w.shape}}; },
                        [](const BetaDist& b) { return Json{{"kind", "beta"}, {"a", b.a}, {"b", b.b}}; },
                        [](const ScaledExpCdf& s) { return Json{{"kind", "scaled_exp_cdf"}, {"c", s.c}}; },
                        [](const DiscreteFinite& f) {
                          return Json{{"kind", "discrete"}, {"support", f.support}, {"pmf", f.pmf}};
                        },
                        [](const TabulatedCdf& t) {
                          return Json{{"kind", "tabulated"}, {"x0", t.x0}, {"step", t.step}, {"cdf", t.cdf}};
                        },
                    },
                    d.kind());
}

CopulaModel parse_copula(const Json& j, std::size_t dimension, const std::string& path) {
  allow_keys(j, path, {"generator", "theta", "mode"});
  const std::string name = string_field(j, "generator", path);
  const std::string mode_name = string_field(j, "mode", path);
  CopulaMode mode;
  if (mode_name == "copula") {
    mode = CopulaMode::copula;
  } else if (mode_name == "survival") {
    mode = CopulaMode::survival;
  } else {
    throw ConfigError(at(path, "mode"), "expected 'copula' or 'survival'");
  }
  return wrap(path, [&] {
    if (name == "clayton") return CopulaModel(Generator::clayton(number_field(j, "theta", path)), mode, dimension);
    if (j.contains("theta")) throw ConfigError(at(path, "theta"), "generator '" + name + "' takes no parameter");
    if (name == "gumbel_barnett") return CopulaModel(Generator::gumbel_barnett(), mode, dimension);
    if (name == "independence") return CopulaModel(Generator::independence(), mode, dimension);
    throw ConfigError(at(path, "generator"), "unknown generator '" + name + "'");
  });
}

Json to_json(const CopulaModel& m) {
  Json j;
  switch (m.generator().family()) {
    case GeneratorFamily::clayton:
      j["generator"] = "clayton";
      j["theta"] = m.generator().theta();
      break;
    case GeneratorFamily::gumbel_barnett: j["generator"] = "gumbel_barnett"; break;
    case GeneratorFamily::independence: j["generator"] = "independence"; break;
  }
  j["mode"] = to_string(m.mode());
  return j;
}

Utility parse_utility(const Json& j, const std::string& path) {
  const std::string kind = string_field(j, "kind", path);
  return wrap(path, [&] {
    if (kind == "power") {
      allow_keys(j, path, {"kind", "gamma"});
      return Utility::power(number_field(j, "gamma", path));
    }
    if (kind == "log") {
      allow_keys(j, path, {"kind"});
      return Utility::log();
    }
    if (kind == "exp_saturating") {
      allow_keys(j, path, {"kind", "a", "b"});
      return Utility::exp_saturating(number_field(j, "a", path), number_field(j, "b", path));
    }
    if (kind == "identity") {
      allow_keys(j, path, {"kind"});
      return Utility::identity();
    }
    if (kind == "tabulated") {
      allow_keys(j, path, {"kind", "x0", "step", "values"});
      return Utility::tabulated(number_field(j, "x0", path), number_field(j, "step", path),
                                number_array(field(j, "values", path), at(path, "values")));
    }
    throw ConfigError(at(path, "kind"), "unknown utility kind '" + kind + "'");
  });
}

Json to_json(const Utility& u) {
  return std::visit(Overloaded{
                        [](const PowerUtility& p) { return Json{{"kind", "power"}, {"gamma", p.gamma}}; },
                        [](const LogUtility&) { return Json{{"kind", "log"}}; },
                        [](const ExpSaturatingUtility& e) {
                          return Json{{"kind", "exp_saturating"}, {"a", e.a}, {"b", e.b}};
                        },
                        [](const IdentityUtility&) { return Json{{"kind", "identity"}}; },
                        [](const TabulatedUtility& t) {
                          return Json{{"kind", "tabulated"}, {"x0", t.x0}, {"step", t.step}, {"values", t.values}};
                        },
                    },
                    u.kind());
}

Topology parse_topology(const Json& j, const std::string& path) {
  const std::string kind = string_field(j, "kind", path);
  if (kind == "series") {
    allow_keys(j, path, {"kind"});
    return Topology::series();
  }
  if (kind == "parallel") {
    allow_keys(j, path, {"kind"});
    return Topology::parallel();
  }
  if (kind == "k_out_of_n") {
    allow_keys(j, path, {"kind", "k"});
    const std::size_t k = index_value(field(j, "k", path), at(path, "k"));
    return wrap(at(path, "k"), [&] { return Topology::k_out_of_n(k); });
  }
  throw ConfigError(at(path, "kind"), "unknown topology '" + kind + "'");
}

Json to_json(const Topology& t) {
  switch (t.kind()) {
    case Topology::Kind::series: return Json{{"kind", "series"}};
    case Topology::Kind::parallel: return Json{{"kind", "parallel"}};
    case Topology::Kind::k_out_of_n: return Json{{"kind", "k_out_of_n"}, {"k", t.k()}};
  }
  return Json{};
}

AllocationPolicy parse_policy(const Json& j, const std::string& path) {
  require_object(j, path);
  if (j.contains("matching")) {
    allow_keys(j, path, {"matching"});
    const Json& a = j["matching"];
    const std::string p = at(path, "matching");
    if (!a.is_array()) throw ConfigError(p, "expected an array");
    std::vector<std::size_t> perm;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::size_t v = index_value(a[i], at(p, i));
      if (v == 0) throw ConfigError(at(p, i), "matching entries are 1-based");
      perm.push_back(v - 1);
    }
    return wrap(p, [&] { return AllocationPolicy::matching(std::move(perm)); });
  }
  if (j.contains("counts")) {
    allow_keys(j, path, {"counts"});
    const Json& a = j["counts"];
    const std::string p = at(path, "counts");
    if (!a.is_array()) throw ConfigError(p, "expected an array");
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < a.size(); ++i) r.push_back(index_value(a[i], at(p, i)));
    return wrap(p, [&] { return AllocationPolicy::counts(std::move(r)); });
  }
  throw ConfigError(path, "expected 'matching' or 'counts'");
}

Json to_json(const AllocationPolicy& p) {
  if (p.is_matching()) {
    std::vector<std::size_t> one_based;
    for (std::size_t v : p.values()) one_based.push_back(v + 1);
    return Json{{"matching", one_based}};
  }
  return Json{{"counts", p.values()}};
}

RedundancyModel parse_redundancy(const Json& j, const std::string& path) {
  require_object(j, path);
  if (j.contains("matched")) {
    allow_keys(j, path, {"matched"});
    const Json& a = j["matched"];
    const std::string p = at(path, "matched");
    if (!a.is_array() || a.empty()) throw ConfigError(p, "expected a nonempty array");
    std::vector<Distribution> laws;
    for (std::size_t i = 0; i < a.size(); ++i) laws.push_back(parse_distribution(a[i], at(p, i)));
    return RedundancyModel::matched(std::move(laws));
  }
  if (j.contains("batch")) {
    allow_keys(j, path, {"batch", "count"});
    return RedundancyModel::batch(parse_distribution(j["batch"], at(path, "batch")),
                                  index_value(field(j, "count", path), at(path, "count")));
  }
  throw ConfigError(path, "expected 'matched' or 'batch'");
}

Json to_json(const RedundancyModel& r) {
  if (r.is_matched()) {
    Json a = Json::array();
    for (const auto& d : r.laws()) a.push_back(to_json(d));
    return Json{{"matched", a}};
  }
  return Json{{"batch", to_json(r.law(0))}, {"count", r.count()}};
}

DiscreteBivariate parse_bivariate(const Json& j, const std::string& path) {
  allow_keys(j, path, {"support", "pmf"});
  auto support = number_array(field(j, "support", path), at(path, "support"));
  const Json& rows = field(j, "pmf", path);
  const std::string p = at(path, "pmf");
  if (!rows.is_array() || rows.size() != support.size()) throw ConfigError(p, "expected one row per support point");
  std::vector<double> pmf;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto row = number_array(rows[i], at(p, i));
    if (row.size() != support.size()) throw ConfigError(at(p, i), "expected one entry per support point");
    pmf.insert(pmf.end(), row.begin(), row.end());
  }
  return wrap(path, [&] { return DiscreteBivariate(std::move(support), std::move(pmf)); });
}

ComponentModel parse_components(const Json& j, const std::string& path) {
  require_object(j, path);
  if (j.contains("copula")) {
    allow_keys(j, path, {"copula", "marginals"});
    const Json& a = field(j, "marginals", path);
    const std::string p = at(path, "marginals");
    if (!a.is_array()) throw ConfigError(p, "expected an array");
    std::vector<Distribution> marginals;
    for (std::size_t i = 0; i < a.size(); ++i) marginals.push_back(parse_distribution(a[i], at(p, i)));
    auto copula = parse_copula(j["copula"], marginals.size(), at(path, "copula"));
    return JointLifetimeModel(std::move(copula), std::move(marginals));
  }
  if (j.contains("bivariate")) {
    allow_keys(j, path, {"bivariate"});
    return DiscreteJoint::from(parse_bivariate(j["bivariate"], at(path, "bivariate")));
  }
  if (j.contains("atoms")) {
    allow_keys(j, path, {"atoms", "probs"});
    const Json& a = j["atoms"];
    const std::string p = at(path, "atoms");
    if (!a.is_array() || a.empty()) throw ConfigError(p, "expected a nonempty array");
    DiscreteJoint dj;
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto atom = number_array(a[i], at(p, i));
      if (i == 0) dj.dimension = atom.size();
      if (atom.size() != dj.dimension) throw ConfigError(at(p, i), "atoms must all have the same length");
      dj.atoms.insert(dj.atoms.end(), atom.begin(), atom.end());
    }
    dj.probs = number_array(field(j, "probs", path), at(path, "probs"));
    wrap(path, [&] {
      dj.validate();
      return 0;
    });
    return dj;
  }
  throw ConfigError(path, "expected 'copula', 'bivariate', or 'atoms'");
}

Json to_json(const ComponentModel& c) {
  if (const auto* joint = std::get_if<JointLifetimeModel>(&c)) {
    Json m = Json::array();
    for (const auto& d : joint->marginals()) m.push_back(to_json(d));
    return Json{{"copula", to_json(joint->copula())}, {"marginals", m}};
  }
  const auto& dj = std::get<DiscreteJoint>(c);
  Json atoms = Json::array();
  for (std::size_t k = 0; k < dj.outcomes(); ++k) {
    const auto a = dj.atom(k);
    atoms.push_back(std::vector<double>(a.begin(), a.end()));
  }
  return Json{{"atoms", atoms}, {"probs", dj.probs}};
}

namespace {

std::vector<AllocationPolicy> all_policies(const ComponentModel& components, const RedundancyModel& r) {
  const std::size_t n = dimension(components);
  if (!r.is_matched()) return enumerate_policies(n, r.count());
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<AllocationPolicy> out;
  do {
    out.push_back(AllocationPolicy::matching(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<std::size_t> parse_sample_sizes(const Json& j, const std::string& path) {
  std::vector<std::size_t> sizes;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) sizes.push_back(index_value(j[i], at(path, i)));
  } else if (j.is_object()) {
    allow_keys(j, path, {"from", "to", "step", "final"});
    const std::size_t from = index_value(field(j, "from", path), at(path, "from"));
    const std::size_t to = index_value(field(j, "to", path), at(path, "to"));
    const std::size_t step = index_value(field(j, "step", path), at(path, "step"));
    if (step == 0) throw ConfigError(at(path, "step"), "step must be positive");
    for (std::size_t n = from; n <= to; n += step) sizes.push_back(n);
    if (j.contains("final")) {
      const std::size_t fin = index_value(j["final"], at(path, "final"));
      if (sizes.empty() || fin > sizes.back()) sizes.push_back(fin);
    }
  } else {
    throw ConfigError(path, "expected an array or {from, to, step}");
  }
  if (sizes.empty()) throw ConfigError(path, "no sample sizes");
  return sizes;
}

}  // namespace

ExperimentSpec parse_experiment(const Json& j) {
  const std::string root = "$";
  require_object(j, root);
  allow_keys(j, root, {"components", "redundancy", "topology", "utility", "utilities", "policies", "sample_sizes",
                       "seed", "description"});
  auto components = parse_components(field(j, "components", root), "$.components");
  auto redundancy = parse_redundancy(field(j, "redundancy", root), "$.redundancy");
  auto topology = parse_topology(field(j, "topology", root), "$.topology");

  std::vector<Utility> utilities;
  if (j.contains("utilities")) {
    const Json& a = j["utilities"];
    if (!a.is_array() || a.empty()) throw ConfigError("$.utilities", "expected a nonempty array");
    for (std::size_t i = 0; i < a.size(); ++i) utilities.push_back(parse_utility(a[i], at("$.utilities", i)));
  } else {
    utilities.push_back(parse_utility(field(j, "utility", root), "$.utility"));
  }

  std::vector<AllocationPolicy> policies;
  const Json& pj = field(j, "policies", root);
  if (pj.is_string()) {
    if (pj.get<std::string>() != "all") throw ConfigError("$.policies", "expected an array or \"all\"");
    policies = all_policies(components, redundancy);
  } else if (pj.is_array()) {
    for (std::size_t i = 0; i < pj.size(); ++i) policies.push_back(parse_policy(pj[i], at("$.policies", i)));
  } else {
    throw ConfigError("$.policies", "expected an array or \"all\"");
  }

  ExperimentSpec spec{std::move(components), std::move(redundancy), topology, std::move(utilities),
                      std::move(policies), parse_sample_sizes(field(j, "sample_sizes", root), "$.sample_sizes"), 1};
  if (j.contains("seed")) {
    const Json& s = j["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      throw ConfigError("$.seed", "expected a nonnegative integer");
    }
    spec.seed = s.get<std::uint64_t>();
  }
  wrap(root, [&] {
    spec.validate();
    return 0;
  });
  return spec;
}

Json to_json(const ExperimentSpec& spec) {
  Json utilities = Json::array();
  for (const auto& u : spec.utilities) utilities.push_back(to_json(u));
  Json policies = Json::array();
  for (const auto& p : spec.policies) policies.push_back(to_json(p));
  return Json{{"components", to_json(spec.components)},
              {"redundancy", to_json(spec.redundancy)},
              {"topology", to_json(spec.topology)},
              {"utilities", utilities},
              {"policies", policies},
              {"sample_sizes", spec.sample_sizes},
              {"seed", spec.seed}};
}

std::string spec_hash(const ExperimentSpec& spec) {
  const std::string text = to_json(spec).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json read_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file, "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(file, e.what());
  }
}

ExperimentSpec load_experiment(const std::string& file) { return parse_experiment(read_json_file(file)); }

}  // namespace coldstandby
