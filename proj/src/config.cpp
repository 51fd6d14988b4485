#include "htmrec/config.hpp"

#include <fstream>

namespace htmrec {

using nlohmann::json;

json default_config_json() {
  return json{
      {"sp", {{"n", 2}, {"m", 2}, {"gamma", 0.5}, {"seed", 0}}},
      {"tm", {{"delta", 0.01}, {"sigma", 0.5}, {"init", 0.5}}},
      {"split",
       {{"train_per_class", 13},
        {"test_per_class", 13},
        {"train_session", 1},
        {"test_session", 2}}},
      {"filter_radius", 1},
      {"architecture", "sp_tm"},
      {"center_crop", false},
      {"manifest", ""},
  };
}

namespace {

void merge_checked(json& base, const json& overlay, const std::string& prefix) {
  for (const auto& [key, value] : overlay.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) {
      throw ConfigError("config: unknown key \"" + path + "\"");
    }
    if (base[key].is_object()) {
      if (!value.is_object()) {
        throw ConfigError("config: \"" + path + "\" must be an object");
      }
      merge_checked(base[key], value, path);
    } else {
      base[key] = value;
    }
  }
}

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError("config: \"" + path + "\" must be a number");
  return j.get<double>();
}

int require_int(const json& j, const std::string& path) {
  if (!j.is_number_integer())
    throw ConfigError("config: \"" + path + "\" must be an integer");
  return j.get<int>();
}

}  // namespace

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  json file;
  try {
    file = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!file.is_object()) throw ConfigError(path.string() + ": top level must be an object");
  json config = default_config_json();
  try {
    merge_checked(config, file, "");
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config;
}

void apply_override(json& config, const std::string& key_eq_value) {
  const std::size_t eq = key_eq_value.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override \"" + key_eq_value + "\" is not of the form key=value");
  }
  const std::string key = key_eq_value.substr(0, eq);
  const std::string value = key_eq_value.substr(eq + 1);

  json* node = &config;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (!node->is_object() || !node->contains(part)) {
      throw ConfigError("override: unknown config key \"" + key + "\"");
    }
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (node->is_object()) {
    throw ConfigError("override: \"" + key + "\" names a section, not a value");
  }

  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;  // unquoted strings
  *node = parsed;
}

ExperimentConfig experiment_config_from_json(const json& config) {
  ExperimentConfig cfg;

  const json& sp = config.at("sp");
  cfg.sp.n = require_int(sp.at("n"), "sp.n");
  cfg.sp.m = require_int(sp.at("m"), "sp.m");
  cfg.sp.gamma = require_number(sp.at("gamma"), "sp.gamma");
  if (!sp.at("seed").is_number_integer())
    throw ConfigError("config: \"sp.seed\" must be an integer");
  cfg.sp.seed = sp.at("seed").get<std::uint64_t>();

  const json& tm = config.at("tm");
  cfg.tm.delta = require_number(tm.at("delta"), "tm.delta");
  cfg.tm.sigma = require_number(tm.at("sigma"), "tm.sigma");
  cfg.tm.init = require_number(tm.at("init"), "tm.init");

  const json& split = config.at("split");
  cfg.split.train_per_class = require_int(split.at("train_per_class"), "split.train_per_class");
  cfg.split.test_per_class = require_int(split.at("test_per_class"), "split.test_per_class");
  cfg.split.train_session = require_int(split.at("train_session"), "split.train_session");
  cfg.split.test_session = require_int(split.at("test_session"), "split.test_session");

  cfg.filter_radius = require_int(config.at("filter_radius"), "filter_radius");
  if (!config.at("architecture").is_string())
    throw ConfigError("config: \"architecture\" must be a string");
  cfg.architecture = architecture_from_string(config.at("architecture").get<std::string>());
  if (!config.at("center_crop").is_boolean())
    throw ConfigError("config: \"center_crop\" must be a boolean");
  cfg.center_crop = config.at("center_crop").get<bool>();

  // Range checks, so bad values fail at load time with the field named.
  if (cfg.sp.n < 1) throw ConfigError("config: \"sp.n\" must be >= 1");
  if (cfg.sp.m < 1) throw ConfigError("config: \"sp.m\" must be >= 1");
  if (cfg.sp.gamma < 0.0 || cfg.sp.gamma > 1.0)
    throw ConfigError("config: \"sp.gamma\" must lie in [0, 1]");
  if (!(cfg.tm.delta > 0.0) || cfg.tm.delta > 1.0)
    throw ConfigError("config: \"tm.delta\" must lie in (0, 1]");
  if (cfg.tm.sigma < 0.0 || cfg.tm.sigma > 1.0)
    throw ConfigError("config: \"tm.sigma\" must lie in [0, 1]");
  if (cfg.tm.init < 0.0 || cfg.tm.init > 1.0)
    throw ConfigError("config: \"tm.init\" must lie in [0, 1]");
  if (cfg.split.train_per_class < 1)
    throw ConfigError("config: \"split.train_per_class\" must be >= 1");
  if (cfg.split.test_per_class < 1)
    throw ConfigError("config: \"split.test_per_class\" must be >= 1");
  for (const char* key : {"train_session", "test_session"}) {
    const int s = std::string(key) == "train_session" ? cfg.split.train_session
                                                      : cfg.split.test_session;
    if (s != 1 && s != 2)
      throw ConfigError("config: \"split." + std::string(key) + "\" must be 1 or 2");
  }
  if (cfg.filter_radius < 1) throw ConfigError("config: \"filter_radius\" must be >= 1");

  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  return json{
      {"sp",
       {{"n", cfg.sp.n}, {"m", cfg.sp.m}, {"gamma", cfg.sp.gamma}, {"seed", cfg.sp.seed}}},
      {"tm", {{"delta", cfg.tm.delta}, {"sigma", cfg.tm.sigma}, {"init", cfg.tm.init}}},
      {"split",
       {{"train_per_class", cfg.split.train_per_class},
        {"test_per_class", cfg.split.test_per_class},
        {"train_session", cfg.split.train_session},
        {"test_session", cfg.split.test_session}}},
      {"filter_radius", cfg.filter_radius},
      {"architecture", to_string(cfg.architecture)},
      {"center_crop", cfg.center_crop},
  };
}

std::string config_hash(const json& config) {
  const std::string dump = config.dump();
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf);
}

}  // namespace htmrec
