#pragma once

#include <string>

#include <json.hpp>

#include "coldstandby/montecarlo.hpp"

namespace coldstandby {

using Json = nlohmann::json;

// Parsers throw ConfigError carrying the JSON path of the offending field,
// e.g. "$.components.marginals[1].rate".

Distribution parse_distribution(const Json& j, const std::string& path);
Json to_json(const Distribution& d);

CopulaModel parse_copula(const Json& j, std::size_t dimension, const std::string& path);
Json to_json(const CopulaModel& m);

Utility parse_utility(const Json& j, const std::string& path);
Json to_json(const Utility& u);

Topology parse_topology(const Json& j, const std::string& path);
Json to_json(const Topology& t);

/// {"matching": [2,1,3]} (1-based) or {"counts": [3,2]}.
AllocationPolicy parse_policy(const Json& j, const std::string& path);
Json to_json(const AllocationPolicy& p);

RedundancyModel parse_redundancy(const Json& j, const std::string& path);
Json to_json(const RedundancyModel& r);

DiscreteBivariate parse_bivariate(const Json& j, const std::string& path);

ComponentModel parse_components(const Json& j, const std::string& path);
Json to_json(const ComponentModel& c);

/// Full experiment document. "policies": "all" enumerates every count vector
/// (batch spares) or every matching (matched spares).
ExperimentSpec parse_experiment(const Json& j);
Json to_json(const ExperimentSpec& spec);
ExperimentSpec load_experiment(const std::string& file);

/// FNV-1a 64-bit hash of the canonical JSON form, as 16 hex digits.
std::string spec_hash(const ExperimentSpec& spec);

/// Reads a whole file; throws ConfigError("<file>", ...) when unreadable or not JSON.
Json read_json_file(const std::string& file);

}  // namespace coldstandby
