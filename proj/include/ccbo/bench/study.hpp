#pragma once

#include "ccbo/bench/config.hpp"
#include "ccbo/bench/report.hpp"
#include "ccbo/opt/run_record.hpp"

#include <string>
#include <vector>

namespace ccbo::bench {

struct VariantSummary {
  std::string variant;
  Quartiles final_best;
  Quartiles final_distance;
  std::vector<double> constraint_shares;
  int completed_runs = 0;
  int failed_runs = 0;
};

struct StudySummary {
  std::vector<opt::RunRecord> runs;  // repetition-major, variants in config order
  std::vector<VariantSummary> variants;
  std::vector<VariantConvergence> convergence;
  std::vector<ConstraintUsage> usage;
  /// Every run completed.
  bool complete = true;
};

/// Summary statistics of a set of runs against the problem's reference optimum.
StudySummary summarize(std::vector<opt::RunRecord> runs, const std::vector<std::string>& variant_order);

/// Runs reps x variants optimizations on a pool of `jobs` threads. Each
/// repetition shares its initial design and candidate sets across variants.
/// Writes runs/<variant>_rep<k>.csv, summary.jsonl, convergence tables, a
/// gnuplot stub and constraint_usage.csv under config.out.
StudySummary run_study(const StudyConfig& config);

}  // namespace ccbo::bench
