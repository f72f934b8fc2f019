#include "ccbo/bench/report.hpp"

#include "ccbo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <set>

namespace ccbo::bench {

namespace fs = std::filesystem;

Quartiles quartiles(std::vector<double> v) {
  Quartiles q;
  q.n = static_cast<int>(v.size());
  if (v.empty()) {
    q.q25 = q.median = q.q75 = std::numeric_limits<double>::quiet_NaN();
    return q;
  }
  std::sort(v.begin(), v.end());
  auto at = [&](double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  q.q25 = at(0.25);
  q.median = at(0.5);
  q.q75 = at(0.75);
  return q;
}

std::vector<BestSoFar> best_so_far(const opt::RunRecord& run) {
  std::vector<BestSoFar> out;
  BestSoFar cur;
  for (const auto& row : run.rows) {
    if (row.true_feasible && (!cur.found || row.true_mean_objective < cur.value)) {
      cur.found = true;
      cur.value = row.true_mean_objective;
      cur.x = row.incumbent_x;
    }
    out.push_back(cur);
  }
  return out;
}

std::vector<VariantConvergence> convergence(const std::vector<opt::RunRecord>& runs,
                                            const problems::ReferenceOptimum& reference) {
  std::map<std::string, std::vector<const opt::RunRecord*>> by_variant;
  std::vector<std::string> order;
  for (const auto& r : runs) {
    if (r.rows.empty()) continue;
    if (!by_variant.count(r.variant)) order.push_back(r.variant);
    by_variant[r.variant].push_back(&r);
  }
  std::vector<VariantConvergence> out;
  for (const auto& name : order) {
    const auto& group = by_variant[name];
    VariantConvergence vc;
    vc.variant = name;
    vc.l = group.front()->l;
    std::set<int> grid;
    for (const auto* r : group)
      for (const auto& row : r->rows) grid.insert(row.constraint_evals);
    std::vector<std::vector<BestSoFar>> bests;
    for (const auto* r : group) bests.push_back(best_so_far(*r));
    for (int e : grid) {
      ConvergencePoint pt;
      pt.constraint_evals = e;
      std::vector<double> vals, dists;
      for (std::size_t k = 0; k < group.size(); ++k) {
        const auto& rows = group[k]->rows;
        if (rows.back().constraint_evals < e) continue;  // stopped before this budget
        std::size_t idx = 0;
        for (std::size_t i = 0; i < rows.size() && rows[i].constraint_evals <= e; ++i) idx = i;
        ++pt.runs;
        const auto& b = bests[k][idx];
        if (!b.found) continue;
        vals.push_back(b.value);
        if (reference.x.size() == b.x.size()) dists.push_back((b.x - reference.x).norm());
      }
      pt.best = quartiles(vals);
      pt.distance = quartiles(dists);
      vc.points.push_back(pt);
    }
    out.push_back(std::move(vc));
  }
  return out;
}

std::vector<ConstraintUsage> constraint_usage(const std::vector<opt::RunRecord>& runs) {
  std::vector<ConstraintUsage> out;
  std::map<std::string, std::pair<std::vector<double>, int>> sums;
  std::vector<std::string> order;
  for (const auto& r : runs) {
    if (r.rows.empty()) continue;
    ConstraintUsage u;
    u.variant = r.variant;
    u.repetition = r.repetition;
    u.calls = r.final_row().constraint_calls;
    const int total = r.final_row().constraint_evals;
    for (int c : u.calls) u.shares.push_back(total > 0 ? static_cast<double>(c) / total : 0.0);
    if (total > 0) {
      auto& [acc, n] = sums[r.variant];
      if (acc.empty()) {
        acc.assign(u.shares.size(), 0.0);
        order.push_back(r.variant);
      }
      for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += u.shares[p];
      ++n;
    }
    out.push_back(std::move(u));
  }
  for (const auto& name : order) {
    const auto& [acc, n] = sums[name];
    ConstraintUsage avg;
    avg.variant = name;
    for (double s : acc) avg.shares.push_back(s / n);
    out.push_back(std::move(avg));
  }
  return out;
}

std::vector<opt::RunRecord> load_runs(const std::string& run_dir) {
  const fs::path dir = fs::path(run_dir) / "runs";
  std::vector<fs::path> files;
  if (fs::is_directory(dir))
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().extension() == ".csv") files.push_back(e.path());
  if (files.empty()) throw DataError("no run records found under '" + dir.string() + "'");
  std::sort(files.begin(), files.end());
  std::vector<opt::RunRecord> runs;
  for (const auto& f : files) {
    std::ifstream in(f);
    runs.push_back(opt::read_run_csv(in));
  }
  return runs;
}

namespace {

void write_quartiles(std::ostream& os, const Quartiles& q) {
  auto put = [&](double v) {
    if (std::isnan(v)) {
      os << " nan";
    } else {
      os << ' ' << v;
    }
  };
  os << ' ' << q.n;
  put(q.q25);
  put(q.median);
  put(q.q75);
}

}  // namespace

std::vector<VariantConvergence> report_convergence(const std::string& run_dir) {
  const auto runs = load_runs(run_dir);
  const auto ref = problems::reference_optimum(runs.front().problem);
  const auto tables = convergence(runs, ref);
  std::ofstream all(fs::path(run_dir) / "convergence.dat");
  all << "# variant constraint_evals iteration runs n_best best_q25 best_median best_q75 n_dist dist_q25 dist_median "
         "dist_q75\n"
      << std::setprecision(10);
  for (const auto& vc : tables) {
    std::ofstream one(fs::path(run_dir) / ("convergence_" + vc.variant + ".dat"));
    one << "# constraint_evals iteration runs n_best best_q25 best_median best_q75 n_dist dist_q25 dist_median "
           "dist_q75\n"
        << std::setprecision(10);
    for (const auto& p : vc.points) {
      const double iteration = static_cast<double>(p.constraint_evals) / vc.l;
      all << vc.variant << ' ' << p.constraint_evals << ' ' << iteration << ' ' << p.runs;
      one << p.constraint_evals << ' ' << iteration << ' ' << p.runs;
      write_quartiles(all, p.best);
      write_quartiles(all, p.distance);
      write_quartiles(one, p.best);
      write_quartiles(one, p.distance);
      all << '\n';
      one << '\n';
    }
  }
  std::ofstream gp(fs::path(run_dir) / "convergence.gp");
  gp << "# gnuplot -p convergence.gp\n"
        "set xlabel 'iteration (l constraint evaluations)'\n"
        "set multiplot layout 1,2\n"
        "set ylabel 'best feasible E_U f'\n"
        "plot";
  for (std::size_t k = 0; k < tables.size(); ++k) {
    const auto f = "'convergence_" + tables[k].variant + ".dat'";
    gp << (k ? ", \\\n     " : " ") << f << " using 2:6 with lines title '" << tables[k].variant << "', " << f
       << " using 2:5:7 with filledcurves fs transparent solid 0.2 notitle";
  }
  gp << "\nset ylabel 'distance to reference optimum'\nplot";
  for (std::size_t k = 0; k < tables.size(); ++k) {
    const auto f = "'convergence_" + tables[k].variant + ".dat'";
    gp << (k ? ", \\\n     " : " ") << f << " using 2:10 with lines title '" << tables[k].variant << "'";
  }
  gp << "\nunset multiplot\n";
  return tables;
}

std::vector<ConstraintUsage> report_constraint_usage(const std::string& run_dir) {
  const auto runs = load_runs(run_dir);
  const auto rows = constraint_usage(runs);
  std::ofstream os(fs::path(run_dir) / "constraint_usage.csv");
  os << "# ccbo constraint-usage schema 1\nvariant,repetition";
  const int l = runs.front().l;
  for (int p = 0; p < l; ++p) os << ",g" << p + 1 << "_calls";
  for (int p = 0; p < l; ++p) os << ",g" << p + 1 << "_share";
  os << '\n' << std::setprecision(10);
  for (const auto& r : rows) {
    os << r.variant << ',' << (r.repetition < 0 ? std::string("mean") : std::to_string(r.repetition));
    for (int p = 0; p < l; ++p) {
      os << ',';
      if (static_cast<std::size_t>(p) < r.calls.size()) os << r.calls[static_cast<std::size_t>(p)];
    }
    for (double s : r.shares) os << ',' << s;
    os << '\n';
  }
  return rows;
}

}  // namespace ccbo::bench
