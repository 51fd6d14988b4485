#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "htmrec/experiment.hpp"

namespace htmrec {

// Config files are JSON with this fixed schema (all keys optional):
//   sp:     { n, m, gamma, seed }
//   tm:     { delta, sigma, init }
//   split:  { train_per_class, test_per_class, train_session, test_session }
//   filter_radius, architecture ("sp_only" | "sp_tm"), center_crop,
//   manifest (path consumed by the CLI)
// Unknown keys are rejected so typos cannot silently fall back to defaults.

nlohmann::json default_config_json();

// Defaults overlaid with the file's values; unknown keys raise ConfigError.
nlohmann::json load_config_file(const std::filesystem::path& path);

// Applies one dotted-path override such as "tm.delta=0.05". The key must
// already exist in the config; the value parses as JSON, falling back to a
// plain string (so architecture=sp_tm works unquoted).
void apply_override(nlohmann::json& config, const std::string& key_eq_value);

// Validates ranges and converts; throws ConfigError naming the bad field.
ExperimentConfig experiment_config_from_json(const nlohmann::json& config);

nlohmann::json to_json(const ExperimentConfig& cfg);

// FNV-1a 64 over the canonical dump, as 16 hex digits. Embedded in result
// file names so sweep outputs never collide across configs.
std::string config_hash(const nlohmann::json& config);

}  // namespace htmrec
