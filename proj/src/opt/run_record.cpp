#include "ccbo/opt/run_record.hpp"

#include "ccbo/errors.hpp"

#include <json.hpp>

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace ccbo::opt {

namespace {

void put_vec(std::ostream& os, const Eigen::VectorXd& v, Eigen::Index n) {
  for (Eigen::Index k = 0; k < n; ++k) {
    os << ',';
    if (v.size() == n) os << v[k];
  }
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Eigen::VectorXd get_vec(const std::vector<std::string>& cells, std::size_t& at, Eigen::Index n) {
  Eigen::VectorXd v(n);
  bool empty = false;
  for (Eigen::Index k = 0; k < n; ++k) {
    const std::string& c = cells.at(at++);
    if (c.empty()) {
      empty = true;
    } else {
      v[k] = std::stod(c);
    }
  }
  return empty ? Eigen::VectorXd() : v;
}

}  // namespace

void write_run_csv(std::ostream& os, const RunRecord& r) {
  os << "# ccbo run-record schema " << kRunCsvSchema << " problem=" << r.problem << " variant=" << r.variant
     << " repetition=" << r.repetition << " d=" << r.d << " m=" << r.m << " l=" << r.l << " alpha=" << r.alpha
     << " status=" << (r.completed() ? "ok" : "aborted") << '\n';
  os << "iteration,constraint_evals,objective_evals";
  for (int p = 0; p < r.l; ++p) os << ",g" << p + 1 << "_evals";
  for (Eigen::Index k = 0; k < r.d; ++k) os << ",x_targ" << k;
  for (Eigen::Index k = 0; k < r.m; ++k) os << ",u_f" << k;
  for (Eigen::Index k = 0; k < r.m; ++k) os << ",u_g" << k;
  os << ",constraint,x_fallback";
  for (Eigen::Index k = 0; k < r.d; ++k) os << ",incumbent_x" << k;
  os << ",incumbent_value,incumbent_fallback,true_mean_objective,true_pof,true_feasible\n";
  os << std::setprecision(17);
  for (const auto& row : r.rows) {
    os << row.iteration << ',' << row.constraint_evals << ',' << row.objective_evals;
    for (int c : row.constraint_calls) os << ',' << c;
    put_vec(os, row.x_targ, r.d);
    put_vec(os, row.u_f, r.m);
    put_vec(os, row.u_g, r.m);
    os << ',';
    if (row.iteration > 0) {
      if (row.p) {
        os << *row.p + 1;
      } else {
        os << "all";
      }
    }
    os << ',' << (row.x_fallback ? 1 : 0);
    put_vec(os, row.incumbent_x, r.d);
    os << ',' << row.incumbent_value << ',' << (row.incumbent_fallback ? 1 : 0) << ',' << row.true_mean_objective << ','
       << row.true_pof << ',' << (row.true_feasible ? 1 : 0) << '\n';
  }
}

RunRecord read_run_csv(std::istream& is) {
  RunRecord r;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ccbo run-record schema ", 0) != 0)
    throw DataError("read_run_csv: missing schema line");
  std::stringstream meta(line.substr(2));
  std::string word, status;
  int schema = 0;
  meta >> word >> word >> word >> schema;
  if (schema != kRunCsvSchema) throw DataError("read_run_csv: unsupported schema version");
  while (meta >> word) {
    const auto eq = word.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = word.substr(0, eq), val = word.substr(eq + 1);
    if (key == "problem") r.problem = val;
    else if (key == "variant") r.variant = val;
    else if (key == "repetition") r.repetition = std::stoi(val);
    else if (key == "d") r.d = std::stol(val);
    else if (key == "m") r.m = std::stol(val);
    else if (key == "l") r.l = std::stoi(val);
    else if (key == "alpha") r.alpha = std::stod(val);
    else if (key == "status") status = val;
  }
  if (status != "ok") r.error = "aborted";
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    std::size_t at = 0;
    IterationRow row;
    row.iteration = std::stoi(cells.at(at++));
    row.constraint_evals = std::stoi(cells.at(at++));
    row.objective_evals = std::stoi(cells.at(at++));
    for (int p = 0; p < r.l; ++p) row.constraint_calls.push_back(std::stoi(cells.at(at++)));
    row.x_targ = get_vec(cells, at, r.d);
    row.u_f = get_vec(cells, at, r.m);
    row.u_g = get_vec(cells, at, r.m);
    const std::string& pc = cells.at(at++);
    if (!pc.empty() && pc != "all") row.p = std::stoi(pc) - 1;
    row.x_fallback = cells.at(at++) == "1";
    row.incumbent_x = get_vec(cells, at, r.d);
    row.incumbent_value = std::stod(cells.at(at++));
    row.incumbent_fallback = cells.at(at++) == "1";
    row.true_mean_objective = std::stod(cells.at(at++));
    row.true_pof = std::stod(cells.at(at++));
    row.true_feasible = cells.at(at++) == "1";
    r.rows.push_back(std::move(row));
  }
  return r;
}

std::string run_summary_json(const RunRecord& r) {
  nlohmann::json j;
  j["problem"] = r.problem;
  j["variant"] = r.variant;
  j["repetition"] = r.repetition;
  j["status"] = r.completed() ? "ok" : "aborted";
  if (!r.completed()) j["error"] = r.error;
  j["wall_seconds"] = r.wall_seconds;
  if (!r.rows.empty()) {
    const auto& f = r.final_row();
    j["iterations"] = f.iteration;
    j["constraint_evals"] = f.constraint_evals;
    j["objective_evals"] = f.objective_evals;
    j["constraint_calls"] = f.constraint_calls;
    j["final_x"] = std::vector<double>(f.incumbent_x.data(), f.incumbent_x.data() + f.incumbent_x.size());
    j["final_true_mean_objective"] = f.true_mean_objective;
    j["final_true_pof"] = f.true_pof;
    j["final_true_feasible"] = f.true_feasible;
    j["final_fallback"] = f.incumbent_fallback;
  }
  return j.dump();
}

}  // namespace ccbo::opt
