// Command-line front end: example reproduction, policy sweeps, order and
// dependence checks, and the brute-force oracle.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "coldstandby/config.hpp"
#include "coldstandby/dependence.hpp"
#include "coldstandby/errors.hpp"
#include "coldstandby/experiments.hpp"
#include "coldstandby/stochastic_orders.hpp"

namespace cs = coldstandby;
using cs::Json;

namespace {

constexpr const char* kOutputEnv = "COLDSTANDBY_OUTPUT_DIR";

std::string default_output_dir() {
  const char* env = std::getenv(kOutputEnv);
  return env && *env ? env : ".";
}

// Inline JSON, or @file to read it from disk.
Json json_argument(const std::string& text, const std::string& what) {
  if (!text.empty() && text.front() == '@') return cs::read_json_file(text.substr(1));
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw cs::ConfigError(what, e.what());
  }
}

// First line: support points. Then one pmf row per support point.
cs::DiscreteBivariate read_pmf_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw cs::ConfigError(file, "cannot open file");
  auto parse_row = [&](const std::string& line, std::size_t lineno) {
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        v.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw cs::ConfigError(file + ":" + std::to_string(lineno), "not a number: '" + cell + "'");
      }
    }
    return v;
  };
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> support;
  std::vector<double> pmf;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto row = parse_row(line, lineno);
    if (support.empty()) {
      support = row;
    } else {
      if (row.size() != support.size()) throw cs::ConfigError(file + ":" + std::to_string(lineno), "row length");
      pmf.insert(pmf.end(), row.begin(), row.end());
    }
  }
  try {
    return cs::DiscreteBivariate(support, pmf);
  } catch (const std::invalid_argument& e) {
    throw cs::ConfigError(file, e.what());
  }
}

Json order_json(const cs::OrderVerdict& v) {
  return Json{{"order", cs::to_string(v.order)},
              {"direction", cs::to_string(v.direction)},
              {"worst_violation", v.worst_violation},
              {"witness_first", v.witness_first},
              {"witness_second", v.witness_second},
              {"closed_form", v.closed_form},
              {"note", v.note}};
}

Json sufficient_json(const cs::SufficientVerdict& v) {
  Json chain = Json::array();
  for (const auto& l : v.chain) {
    chain.push_back({{"pair", {l.first + 1, l.second + 1}}, {"direction", cs::to_string(l.direction)}});
  }
  Json j{{"holds", v.holds},
         {"mode_matches", v.mode_matches},
         {"generator_log_convex", v.generator_log_convex},
         {"generator_violation", v.generator_violation},
         {"chain_ok", v.chain_ok},
         {"chain", chain},
         {"reason", v.reason}};
  if (!v.chain_ok) j["failing_pair"] = {v.failing.first + 1, v.failing.second + 1};
  return j;
}

Json discrete_json(const cs::DiscreteWsaiVerdict& v, const cs::DiscreteBivariate& d) {
  return Json{{"holds", v.holds},
              {"min_slack", v.min_slack},
              {"witness", {d.support()[v.witness_a], d.support()[v.witness_b]}}};
}

Json falsify_json(const cs::FalsifyVerdict& v) {
  return Json{{"holds", v.holds}, {"worst_margin", v.worst_margin}, {"worst_trial", v.worst_trial},
              {"trials", v.trials}};
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cold-standby redundancy allocation toolkit"};
  app.require_subcommand(1);
  std::size_t threads = 1;
  app.add_option("--threads", threads, "Worker threads (0 = all cores); results do not depend on it")
      ->capture_default_str();

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "Run a canned example and write traces plus a verdict");
  std::string id;
  std::size_t n_final = 1'000'000;
  std::uint64_t seed = 1;
  std::string out_dir;
  rep->add_option("--id", id, "Example id")->required()->check(CLI::IsMember(cs::catalog_ids()));
  rep->add_option("--n", n_final, "Final sample size")->capture_default_str();
  rep->add_option("--seed", seed, "Seed")->capture_default_str();
  rep->add_option("--out", out_dir, std::string("Output directory (default $") + kOutputEnv + " or .)");

  // replay
  auto* replay = app.add_subcommand("replay", "Re-run a reproduction from its metadata.json");
  std::string metadata_file;
  replay->add_option("--metadata", metadata_file, "metadata.json written by reproduce")->required();
  replay->add_option("--out", out_dir, "Output directory");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Rank every policy of a config against the first");
  std::string config_file;
  std::size_t sweep_n = 1'000'000;
  double level = 0.95;
  sw->add_option("--config", config_file, "Experiment JSON")->required();
  sw->add_option("--n", sweep_n, "Sample size")->capture_default_str();
  sw->add_option("--level", level, "Confidence level")->capture_default_str();
  sw->add_option("--out", out_dir, "Directory for ranking CSVs (stdout when omitted)");

  // check-order
  auto* co = app.add_subcommand("check-order", "Compare two distributions in a stochastic order");
  std::string order_name, d1_text, d2_text;
  std::size_t grid_points = 2000;
  bool no_closed_form = false;
  co->add_option("--order", order_name, "lr, hr, rh, st, icx, or icv")->required();
  co->add_option("--d1", d1_text, "First distribution (JSON or @file)")->required();
  co->add_option("--d2", d2_text, "Second distribution (JSON or @file)")->required();
  co->add_option("--grid-points", grid_points, "Grid size")->capture_default_str();
  co->add_flag("--no-closed-form", no_closed_form, "Always use the numerical route");

  // check-dependence
  auto* cd = app.add_subcommand("check-dependence", "Sufficient LWSAI/RWSAI conditions and exact discrete checks");
  std::string model_file, pmf_file;
  std::size_t trials = 10000;
  cd->add_option("--model", model_file, "Experiment or components JSON");
  cd->add_option("--exact-discrete", pmf_file, "CSV: support row, then pmf rows");
  cd->add_option("--trials", trials, "Falsifier trials")->capture_default_str();
  cd->add_option("--seed", seed, "Falsifier seed")->capture_default_str();

  // oracle
  auto* orc = app.add_subcommand("oracle", "Exact expectation for finite discrete experiments");
  std::size_t mc_n = 0;
  orc->add_option("--config", config_file, "Experiment JSON with finite discrete laws")->required();
  orc->add_option("--mc", mc_n, "Also run Monte Carlo with this many draws");

  app.add_subcommand("list", "List example ids");

  CLI11_PARSE(app, argc, argv);

  try {
    cs::RunOptions opts;
    opts.threads = threads;
    if (out_dir.empty()) out_dir = default_output_dir();

    if (app.got_subcommand("list")) {
      for (const auto& i : cs::catalog_ids()) {
        std::cout << i << "  " << cs::catalog_entry(i, 2, 1).description << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(rep) || app.got_subcommand(replay)) {
      const auto entry = app.got_subcommand(rep) ? cs::catalog_entry(id, n_final, seed)
                                                 : cs::entry_from_metadata(cs::read_json_file(metadata_file));
      const auto result = cs::reproduce(entry, opts);
      cs::write_reproduction(entry, result, out_dir);
      std::cout << entry.id << ": " << result.summary << "\n";
      return 0;
    }

    if (app.got_subcommand(sw)) {
      const auto spec = cs::load_experiment(config_file);
      const auto results = cs::sweep(spec, sweep_n, level, opts);
      for (std::size_t u = 0; u < results.size(); ++u) {
        const auto csv = cs::sweep_csv(results[u], spec.policies);
        if (sw->count("--out")) {
          std::filesystem::create_directories(out_dir);
          write_file(std::filesystem::path(out_dir) / ("ranking_u" + std::to_string(u + 1) + ".csv"), csv);
        } else {
          std::cout << "# utility " << results[u].utility << "\n" << csv;
        }
      }
      return 0;
    }

    if (app.got_subcommand(co)) {
      const auto d1 = cs::parse_distribution(json_argument(d1_text, "--d1"), "--d1");
      const auto d2 = cs::parse_distribution(json_argument(d2_text, "--d2"), "--d2");
      cs::OrderCheckOptions o;
      o.grid_points = grid_points;
      o.allow_closed_form = !no_closed_form;
      std::cout << order_json(cs::check_order(cs::parse_order(order_name), d1, d2, o)).dump(2) << "\n";
      return 0;
    }

    if (app.got_subcommand(cd)) {
      if (model_file.empty() && pmf_file.empty()) throw CLI::ValidationError("give --model and/or --exact-discrete");
      Json out;
      if (!model_file.empty()) {
        Json j = cs::read_json_file(model_file);
        const Json& comp = j.contains("components") ? j["components"] : j;
        auto components = cs::parse_components(comp, j.contains("components") ? "$.components" : "$");
        if (const auto* joint = std::get_if<cs::JointLifetimeModel>(&components)) {
          out["lwsai_sufficient"] = sufficient_json(cs::check_lwsai_sufficient(*joint));
          out["rwsai_sufficient"] = sufficient_json(cs::check_rwsai_sufficient(*joint));
        } else {
          out["note"] = "discrete components: use --exact-discrete for bivariate pmfs";
        }
      }
      if (!pmf_file.empty()) {
        const auto d = read_pmf_csv(pmf_file);
        cs::RandomStream rng(seed);
        out["lwsai_exact"] = discrete_json(cs::check_lwsai_discrete_exact(d), d);
        out["rwsai_exact"] = discrete_json(cs::check_rwsai_discrete_exact(d), d);
        out["lwsai_falsifier"] = falsify_json(cs::check_wsai_falsify(d, cs::WsaiClass::left, trials, rng));
        out["rwsai_falsifier"] = falsify_json(cs::check_wsai_falsify(d, cs::WsaiClass::right, trials, rng));
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (app.got_subcommand(orc)) {
      const auto spec = cs::load_experiment(config_file);
      const auto* joint = std::get_if<cs::DiscreteJoint>(&spec.components);
      if (!joint) throw cs::ConfigError("$.components", "oracle needs 'bivariate' or 'atoms' components");
      Json rows = Json::array();
      cs::SimulationResult sim;
      if (mc_n >= 2) sim = cs::simulate(spec, mc_n, opts);
      for (std::size_t u = 0; u < spec.utilities.size(); ++u) {
        for (std::size_t p = 0; p < spec.policies.size(); ++p) {
          Json row{{"utility", spec.utilities[u].describe()},
                   {"policy", spec.policies[p].label()},
                   {"exact", cs::brute_force_expectation(*joint, spec.redundancy, spec.topology, spec.utilities[u],
                                                         spec.policies[p])}};
          if (mc_n >= 2) {
            const auto e = cs::estimate(sim, spec.utilities[u], p, mc_n);
            row["mc_estimate"] = e.estimate;
            row["mc_se"] = e.se;
          }
          rows.push_back(row);
        }
      }
      std::cout << rows.dump(2) << "\n";
      return 0;
    }
  } catch (const cs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
