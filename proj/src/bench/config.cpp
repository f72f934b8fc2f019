#include "ccbo/bench/config.hpp"

#include "ccbo/errors.hpp"
#include "ccbo/problems/problem.hpp"
#include "ccbo/seed.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ccbo::bench {

void StudyConfig::validate() const {
  const auto names = problems::problem_names();
  if (std::find(names.begin(), names.end(), problem) == names.end()) throw ConfigError("unknown problem '" + problem + "'");
  if (variants.empty()) throw ConfigError("no variants selected");
  for (const auto& v : variants) opt::parse_variant(v);
  if (reps < 1) throw ConfigError("reps must be at least 1");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  if (out.empty()) throw ConfigError("output directory must be set");
  algorithm(0, variants.front()).validate();
}

std::uint64_t StudyConfig::repetition_seed(int repetition) const {
  return derive_seed(seed, {static_cast<std::uint64_t>(repetition)});
}

opt::AlgorithmConfig StudyConfig::algorithm(int repetition, const std::string& variant) const {
  opt::AlgorithmConfig c;
  c.variant = opt::parse_variant(variant);
  c.t_init = t_init;
  c.budget = budget;
  c.alpha = alpha;
  c.n_u = mc_u;
  c.n_traj = mc_traj;
  c.n_improvement = mc_improvement;
  c.cand_factor = cand_factor;
  c.restarts = restarts;
  c.retrain_restarts = retrain_restarts;
  c.seed = repetition_seed(repetition);
  c.repetition = repetition;
  return c;
}

StudyConfig parse_config(const std::string& json_text, StudyConfig c) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, val] : j.items()) {
      if (key == "problem") c.problem = val.get<std::string>();
      else if (key == "variants") c.variants = val.get<std::vector<std::string>>();
      else if (key == "reps") c.reps = val.get<int>();
      else if (key == "budget") c.budget = val.get<int>();
      else if (key == "t_init") c.t_init = val.get<int>();
      else if (key == "alpha") c.alpha = val.get<double>();
      else if (key == "seed") c.seed = val.get<std::uint64_t>();
      else if (key == "out") c.out = val.get<std::string>();
      else if (key == "jobs") c.jobs = val.get<int>();
      else if (key == "cand_factor") c.cand_factor = val.get<int>();
      else if (key == "restarts") c.restarts = val.get<int>();
      else if (key == "retrain_restarts") c.retrain_restarts = val.get<int>();
      else if (key == "mc") {
        for (const auto& [k, v] : val.items()) {
          if (k == "traj") c.mc_traj = v.get<int>();
          else if (k == "u") c.mc_u = v.get<int>();
          else if (k == "improvement") c.mc_improvement = v.get<int>();
          else throw ConfigError("unknown config key 'mc." + k + "'");
        }
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config value has the wrong type: ") + e.what());
  }
  return c;
}

StudyConfig load_config(const std::string& path, StudyConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

}  // namespace ccbo::bench
