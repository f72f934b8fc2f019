#include "ccbo/bench/study.hpp"

#include "ccbo/errors.hpp"
#include "ccbo/problems/problem.hpp"
#include "ccbo/problems/true_metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <thread>

namespace ccbo::bench {

namespace fs = std::filesystem;

namespace {

std::string run_file(const opt::RunRecord& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_rep%03d.csv", r.variant.c_str(), r.repetition);
  return buf;
}

nlohmann::json quartiles_json(const Quartiles& q) {
  auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  return {{"n", q.n}, {"q25", num(q.q25)}, {"median", num(q.median)}, {"q75", num(q.q75)}};
}

}  // namespace

StudySummary summarize(std::vector<opt::RunRecord> runs, const std::vector<std::string>& variant_order) {
  StudySummary s;
  s.runs = std::move(runs);
  if (s.runs.empty()) return s;
  const auto ref = problems::reference_optimum(s.runs.front().problem);
  s.convergence = convergence(s.runs, ref);
  s.usage = constraint_usage(s.runs);
  for (const auto& name : variant_order) {
    VariantSummary v;
    v.variant = name;
    std::vector<double> finals, dists;
    for (const auto& r : s.runs) {
      if (r.variant != name) continue;
      (r.completed() ? v.completed_runs : v.failed_runs)++;
      if (!r.completed()) s.complete = false;
      if (r.rows.empty()) continue;
      const auto b = best_so_far(r).back();
      if (!b.found) continue;
      finals.push_back(b.value);
      dists.push_back((b.x - ref.x).norm());
    }
    v.final_best = quartiles(finals);
    v.final_distance = quartiles(dists);
    for (const auto& u : s.usage)
      if (u.variant == name && u.repetition < 0) v.constraint_shares = u.shares;
    s.variants.push_back(std::move(v));
  }
  return s;
}

StudySummary run_study(const StudyConfig& config) {
  config.validate();
  const auto problem = problems::make_problem(config.problem);
  const fs::path out(config.out);
  fs::create_directories(out / "runs");

  struct Task {
    int rep;
    std::string variant;
  };
  std::vector<Task> tasks;
  for (int rep = 0; rep < config.reps; ++rep)
    for (const auto& v : config.variants) tasks.push_back({rep, v});

  std::vector<opt::RunRecord> runs(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      try {
        runs[i] = opt::run(problem, config.algorithm(t.rep, t.variant));
      } catch (const std::exception& e) {
        runs[i].problem = problem.name;
        runs[i].variant = t.variant;
        runs[i].repetition = t.rep;
        runs[i].error = e.what();
      }
      std::ofstream csv(out / "runs" / run_file(runs[i]));
      opt::write_run_csv(csv, runs[i]);
    }
  };
  const int n_threads = std::min<int>(config.jobs, static_cast<int>(tasks.size()));
  std::vector<std::thread> pool;
  for (int k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  StudySummary s = summarize(std::move(runs), config.variants);

  std::ofstream js(out / "summary.jsonl");
  for (const auto& r : s.runs) js << opt::run_summary_json(r) << '\n';
  for (const auto& v : s.variants) {
    nlohmann::json j;
    j["type"] = "variant";
    j["variant"] = v.variant;
    j["final_best"] = quartiles_json(v.final_best);
    j["final_distance"] = quartiles_json(v.final_distance);
    j["constraint_shares"] = v.constraint_shares;
    j["completed_runs"] = v.completed_runs;
    j["failed_runs"] = v.failed_runs;
    js << j.dump() << '\n';
  }
  nlohmann::json study;
  study["type"] = "study";
  study["problem"] = config.problem;
  study["reps"] = config.reps;
  study["budget"] = config.budget;
  study["t_init"] = config.t_init;
  study["seed"] = config.seed;
  study["complete"] = s.complete;
  js << study.dump() << '\n';
  js.close();

  if (!s.runs.empty() && std::any_of(s.runs.begin(), s.runs.end(), [](const auto& r) { return !r.rows.empty(); })) {
    report_convergence(config.out);
    report_constraint_usage(config.out);
  }
  return s;
}

}  // namespace ccbo::bench
