#pragma once

#include "ccbo/opt/algorithm.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ccbo::bench {

struct StudyConfig {
  std::string problem = "analytic-2d";
  std::vector<std::string> variants{"REF", "SMCS", "MMCU", "MMCS"};
  int reps = 10;
  int budget = 40;
  int t_init = 6;
  /// Negative: the problem's own alpha.
  double alpha = -1.0;
  std::uint64_t seed = 1;
  std::string out = "ccbo-out";
  int mc_traj = 200;
  int mc_u = 100;
  int mc_improvement = 500;
  int cand_factor = 500;
  int restarts = 20;
  int retrain_restarts = 3;
  int jobs = 1;

  /// Throws ConfigError.
  void validate() const;
  /// Algorithm settings for one (repetition, variant) pair.
  opt::AlgorithmConfig algorithm(int repetition, const std::string& variant) const;
  /// Seed of a repetition; independent of the variant.
  std::uint64_t repetition_seed(int repetition) const;
};

/// Reads a JSON config file. Recognized keys: problem, variants, reps, budget,
/// t_init, alpha, seed, out, jobs, cand_factor, restarts, retrain_restarts and
/// a nested "mc" object with traj, u and improvement. Unknown keys are errors.
StudyConfig load_config(const std::string& path, StudyConfig base = {});
StudyConfig parse_config(const std::string& json_text, StudyConfig base = {});

}  // namespace ccbo::bench
