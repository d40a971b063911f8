#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavsep/simulator.hpp"

// Simulation config file: UTF-8 JSON with a strict schema. Unknown keys are
// rejected so experiment configs cannot contain silent typos.

namespace uavsep::config {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimulateSpec {
    sim::ScenarioConfig scenario;  // policy field is overwritten per entry of `policies`
    std::vector<rid::MessageFormat> policies = {
        rid::MessageFormat::SnmacBaseline, rid::MessageFormat::Standard,
        rid::MessageFormat::Candidate1, rid::MessageFormat::Candidate2};
    int runs = 500;
    int threads = 0;  // 0 = hardware concurrency
};

SimulateSpec simulate_spec_from_json(const nlohmann::json& j);
nlohmann::json simulate_spec_to_json(const SimulateSpec& spec);

// Parses and validates; throws ConfigError with byte-offset (parse) or
// JSON-pointer style field (validation) diagnostics.
SimulateSpec load_simulate_spec(const std::filesystem::path& path);

} // namespace uavsep::config
