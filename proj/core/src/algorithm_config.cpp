#include "dcop/algorithm_config.hpp"

#include <set>
#include <stdexcept>

#include "dcop/gls.hpp"
#include "dcop/local_search.hpp"
#include "dcop/maxsum.hpp"
#include "json.hpp"

namespace dcop {

using nlohmann::json;

namespace {

void only_keys(const json& cfg, const std::string& algo, std::initializer_list<const char*> allowed) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  ok.insert("algo");
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    if (!ok.count(it.key())) throw std::invalid_argument(algo + ": unknown config key '" + it.key() + "'");
  }
}

template <typename T>
T opt(const json& cfg, const char* key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  try {
    return cfg[key].get<T>();
  } catch (const json::exception& ex) {
    throw std::invalid_argument(std::string("bad value for '") + key + "': " + ex.what());
  }
}

}  // namespace

std::unique_ptr<Algorithm> make_algorithm(const std::string& config_json) {
  json cfg;
  try {
    cfg = json::parse(config_json);
  } catch (const json::parse_error& ex) {
    throw std::invalid_argument(std::string("malformed algorithm config: ") + ex.what());
  }
  if (!cfg.is_object() || !cfg.contains("algo") || !cfg["algo"].is_string()) {
    throw std::invalid_argument("algorithm config needs a string 'algo' field");
  }
  const auto algo = cfg["algo"].get<std::string>();
  if (algo == "dsa") {
    only_keys(cfg, algo, {"p", "allow_sideways"});
    return std::make_unique<Dsa>(DsaConfig{opt(cfg, "p", 0.8), opt(cfg, "allow_sideways", false)});
  }
  if (algo == "mgm") {
    only_keys(cfg, algo, {});
    return std::make_unique<Mgm>();
  }
  if (algo == "mgm2") {
    only_keys(cfg, algo, {"offer_p"});
    return std::make_unique<Mgm2>(Mgm2Config{opt(cfg, "offer_p", 0.5)});
  }
  if (algo == "dgls") {
    only_keys(cfg, algo, {"manner", "gamma", "scope", "evaporate_on_qlm_only"});
    DglsConfig c;
    c.manner = parse_manner(opt<std::string>(cfg, "manner", "M"));
    c.gamma = opt(cfg, "gamma", 0.5);
    c.scope = parse_scope(opt<std::string>(cfg, "scope", "col"));
    c.evaporate_on_qlm_only = opt(cfg, "evaporate_on_qlm_only", false);
    return std::make_unique<Dgls>(c);
  }
  if (algo == "gdba") {
    only_keys(cfg, algo, {"manner", "violation", "scope"});
    GdbaConfig c;
    c.manner = parse_manner(opt<std::string>(cfg, "manner", "M"));
    c.violation = parse_violation(opt<std::string>(cfg, "violation", "NM"));
    c.scope = parse_scope(opt<std::string>(cfg, "scope", "tab"));
    return std::make_unique<Gdba>(c);
  }
  if (algo == "dms") {
    only_keys(cfg, algo, {"lambda", "damp_direction"});
    MaxsumConfig c;
    c.damping = opt(cfg, "lambda", 0.9);
    c.damp_direction = parse_damp_direction(opt<std::string>(cfg, "damp_direction", "both"));
    return std::make_unique<DampedMaxsum>(c);
  }
  throw std::invalid_argument("unknown algorithm '" + algo + "'");
}

}  // namespace dcop
