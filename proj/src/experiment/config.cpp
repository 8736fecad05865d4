#include "grda/experiment/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace grda::exp {

namespace {

using nlohmann::json;

double get_number(const json& j, const std::string& key) {
  if (!j.at(key).is_number()) throw ConfigError("config: '" + key + "' must be a number");
  return j.at(key).get<double>();
}

std::size_t get_count(const json& j, const std::string& key) {
  if (!j.at(key).is_number_integer() || j.at(key).get<long long>() < 0)
    throw ConfigError("config: '" + key + "' must be a nonnegative integer");
  return j.at(key).get<std::size_t>();
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");

  static const char* known[] = {
      "problem",     "d",           "k",          "rho",        "sigma_eps",
      "support_size","min_active_magnitude",      "algorithm",  "c0",
      "c",           "mu",          "t0",         "gamma",      "horizon",
      "repetitions", "band_paths",  "kernel_samples",           "dt",
      "alpha",       "seed",        "out_dir",    "threads",    "h_diag",
      "sign_zero_tol"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool found = false;
    for (const char* k : known)
      if (it.key() == k) {
        found = true;
        break;
      }
    if (!found) throw ConfigError("config: unknown key '" + it.key() + "'");
  }

  ExperimentConfig cfg;
  if (!j.contains("d")) throw ConfigError("config: missing required key 'd'");
  cfg.d = get_count(j, "d");

  if (j.contains("problem")) {
    const std::string p = j.at("problem").get<std::string>();
    if (p == "lr")
      cfg.problem = Problem::Lr;
    else if (p == "pca")
      cfg.problem = Problem::Pca;
    else
      throw ConfigError("config: 'problem' must be \"lr\" or \"pca\"");
  }
  if (j.contains("algorithm")) {
    const std::string a = j.at("algorithm").get<std::string>();
    if (a == "sgd")
      cfg.algorithm = Algorithm::Sgd;
    else if (a == "rda")
      cfg.algorithm = Algorithm::Rda;
    else if (a == "grda")
      cfg.algorithm = Algorithm::Grda;
    else
      throw ConfigError("config: 'algorithm' must be \"sgd\", \"rda\", or \"grda\"");
  }

  cfg.support_size = cfg.d;  // default: dense truth
  if (j.contains("k")) cfg.k = get_count(j, "k");
  if (j.contains("rho")) cfg.rho = get_number(j, "rho");
  if (j.contains("sigma_eps")) cfg.sigma_eps = get_number(j, "sigma_eps");
  if (j.contains("support_size")) cfg.support_size = get_count(j, "support_size");
  if (j.contains("min_active_magnitude"))
    cfg.min_active_magnitude = get_number(j, "min_active_magnitude");
  if (j.contains("c0")) cfg.c0 = get_number(j, "c0");
  if (j.contains("c")) cfg.c = get_number(j, "c");
  if (j.contains("mu")) cfg.mu = get_number(j, "mu");
  if (j.contains("t0")) cfg.t0 = get_number(j, "t0");
  if (j.contains("gamma")) cfg.gamma = get_number(j, "gamma");
  if (j.contains("horizon")) cfg.horizon = get_number(j, "horizon");
  if (j.contains("repetitions")) cfg.repetitions = get_count(j, "repetitions");
  if (j.contains("band_paths")) cfg.band_paths = get_count(j, "band_paths");
  if (j.contains("kernel_samples")) cfg.kernel_samples = get_count(j, "kernel_samples");
  if (j.contains("dt")) cfg.dt = get_number(j, "dt");
  if (j.contains("alpha")) cfg.alpha = get_number(j, "alpha");
  if (j.contains("sign_zero_tol")) cfg.sign_zero_tol = get_number(j, "sign_zero_tol");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer())
      throw ConfigError("config: 'seed' must be an integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("threads")) cfg.threads = static_cast<unsigned>(get_count(j, "threads"));
  if (j.contains("h_diag")) {
    if (!j.at("h_diag").is_array()) throw ConfigError("config: 'h_diag' must be an array");
    cfg.h_diag = j.at("h_diag").get<std::vector<double>>();
  }

  if (cfg.d < 1) throw ConfigError("config: d must be >= 1");
  if (!(cfg.gamma > 0)) throw ConfigError("config: gamma must be positive");
  if (!(cfg.horizon > 0)) throw ConfigError("config: horizon must be positive");
  if (cfg.repetitions < 1) throw ConfigError("config: repetitions must be >= 1");
  if (!(cfg.alpha > 0 && cfg.alpha < 1)) throw ConfigError("config: alpha outside (0,1)");
  if (!(cfg.dt > 0)) throw ConfigError("config: dt must be positive");
  if (!(std::abs(cfg.rho) < 1)) throw ConfigError("config: |rho| must be < 1");
  if (cfg.sigma_eps < 0) throw ConfigError("config: sigma_eps must be >= 0");
  if (cfg.support_size < 1 || cfg.support_size > cfg.d)
    throw ConfigError("config: support_size must lie in 1..d");
  if (cfg.min_active_magnitude < 0)
    throw ConfigError("config: min_active_magnitude must be >= 0");
  if (cfg.sign_zero_tol < 0)
    throw ConfigError("config: sign_zero_tol must be >= 0");
  if (cfg.problem == Problem::Pca) {
    if (cfg.k < 1 || cfg.k > 2) throw ConfigError("config: k must be 1 or 2");
    if (cfg.support_size * cfg.k > cfg.d)
      throw ConfigError("config: k disjoint supports of size support_size must fit in d");
  }
  if (cfg.algorithm == Algorithm::Rda && !(cfg.c0 >= 0))
    throw ConfigError("config: c0 must be >= 0");
  if (cfg.algorithm == Algorithm::Grda) {
    if (!(cfg.c > 0)) throw ConfigError("config: c must be positive");
    if (!(cfg.mu > 0)) throw ConfigError("config: mu must be positive");
    if (cfg.t0 < 0) throw ConfigError("config: t0 must be >= 0");
  }
  if (cfg.h_diag) {
    if (cfg.h_diag->size() != cfg.d) throw ConfigError("config: h_diag must have length d");
    for (double v : *cfg.h_diag)
      if (!(v > 0)) throw ConfigError("config: h_diag entries must be positive");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace grda::exp
