#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "coldstandby/experiments.hpp"

using namespace coldstandby;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("catalog") {
  CHECK(trace_sizes().size() == 36);
  CHECK(trace_sizes().front() == 1000);
  CHECK(trace_sizes().back() == 8000);
  for (const auto& id : catalog_ids()) {
    const auto e = catalog_entry(id, 100000, 1);
    CHECK(!e.scenarios.empty());
    for (const auto& s : e.scenarios) CHECK(s.spec.sample_sizes.back() == 100000);
  }
  CHECK_THROWS_AS(catalog_entry("9.9", 1000, 1), std::invalid_argument);
  CHECK(catalog_entry("3.2", 10, 1).scenarios[0].spec.utilities.size() == 10);
  CHECK(catalog_entry("3.4", 10, 1).scenarios[0].spec.utilities.size() == 11);
}

TEST_CASE("every catalog entry runs at n = 1e5 within the time budget") {
  for (const auto& id : catalog_ids()) {
    const auto start = std::chrono::steady_clock::now();
    const auto r = reproduce(id, 100000, 1);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    INFO(id, ": ", r.summary);
    CHECK(seconds < 60);
    CHECK(!r.summary.empty());
  }
}

TEST_CASE("reproduction files replay bit-identically from metadata") {
  const auto dir = std::filesystem::temp_directory_path() / "coldstandby_replay_test";
  std::filesystem::remove_all(dir);
  const auto entry = catalog_entry("3.1", 20000, 5);
  const auto r = reproduce(entry);
  const auto files = write_reproduction(entry, r, (dir / "a").string());
  CHECK(files.size() == 2 * 4 + 2);

  const auto replayed = entry_from_metadata(read_json_file((dir / "a" / "metadata.json").string()));
  write_reproduction(replayed, reproduce(replayed, RunOptions{2, true}), (dir / "b").string());
  for (const auto& f : files) {
    INFO(f);
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  const auto verdict = read_json_file((dir / "a" / "verdict.json").string());
  CHECK(verdict["id"] == "3.1");
  std::filesystem::remove_all(dir);
}

TEST_CASE("decile dominance") {
  std::vector<double> a(5000), b(5000);
  RandomStream rng(1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = Distribution::exponential(0.5).draw(rng);
    b[i] = Distribution::exponential(1.0).draw(rng);
  }
  const auto d = decile_dominance(a, b);
  CHECK(d.points.size() == 9);
  CHECK(d.dominates);
  CHECK_FALSE(decile_dominance(b, a).dominates);
}

TEST_CASE("survival dominance on the series survival-copula spec") {
  const auto entry = catalog_entry("3.1", 200000, 3);
  const auto& spec = entry.scenarios[1].spec;
  REQUIRE(std::get<JointLifetimeModel>(spec.components).copula().mode() == CopulaMode::survival);
  const auto sim = simulate(spec, 200000);
  CHECK(decile_dominance(sim.lifetimes[0], sim.lifetimes[1]).dominates);
}

TEST_CASE("sweep") {
  const auto spec = load_experiment(std::string(COLDSTANDBY_CONFIG_DIR) + "/series_batch_sweep.json");
  const auto results = sweep(spec, 100000, 0.95);
  REQUIRE(results.size() == 2);
  CHECK(results[0].rows.size() == 6);
  for (const auto& r : results) CHECK(spec.policies[r.rows[0].policy] == AllocationPolicy::counts({3, 2}));
  const auto csv = sweep_csv(results[0], spec.policies);
  CHECK(csv.rfind("rank,policy_id,estimate,se,diff_vs_first,diff_se,ci_low,ci_high\n1,\"(3,2)\",", 0) == 0);

  // Exchangeable components and identical spares: every matching ties with the first.
  JointLifetimeModel joint(CopulaModel(Generator::clayton(2), CopulaMode::copula, 3),
                           {Distribution::exponential(1), Distribution::exponential(1), Distribution::exponential(1)});
  const auto w = Distribution::weibull(1.3);
  ExperimentSpec sym{joint, RedundancyModel::matched({w, w, w}), Topology::series(), {Utility::identity()},
                     {}, {50000}, 2};
  for (const auto& perm : std::vector<std::vector<std::size_t>>{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0},
                                                                {2, 0, 1}, {2, 1, 0}}) {
    sym.policies.push_back(AllocationPolicy::matching(perm));
  }
  std::size_t covered = 0, pairs = 0;
  const auto tied = sweep(sym, 50000, 0.99);
  for (const auto& row : tied[0].rows) {
    if (row.policy == 0) continue;
    ++pairs;
    covered += row.versus_first.ci_low <= 0 && row.versus_first.ci_high >= 0;
  }
  CHECK(pairs == 5);
  // Five 99% intervals: allow one miss.
  CHECK(covered >= 4);
}
