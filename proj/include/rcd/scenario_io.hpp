#pragma once

#include <filesystem>
#include <string>

#include "rcd/backend.hpp"
#include "rcd/optimizer.hpp"

namespace rcd {

struct LoadedConfig {
    Scenario scenario;
    OptimizerConfig optimizer;
};

// Parse and validate a scenario JSON document. Schema errors name the exact
// key path (e.g. "scenario.backend.ec_latency.base_ms: expected a positive
// number"). The optional "optimizer" object overrides OptimizerConfig
// defaults. See docs/scenario.md for the schema.
LoadedConfig load_scenario_json(const std::string& text);
LoadedConfig load_scenario_file(const std::filesystem::path& path);

// Serialization of results (stable key order for reproducible files).
std::string evaluation_record_to_json(const EvaluationRecord& rec);
std::string baseline_result_to_json(const BaselineResult& res);

} // namespace rcd
