// Acceptance checks. `ccbo_acceptance N` runs criterion N and prints one
// PASS/FAIL line; without an argument every criterion runs in turn.

#include "ccbo/acq/acquisition.hpp"
#include "ccbo/acq/criteria.hpp"
#include "ccbo/bench/study.hpp"
#include "ccbo/errors.hpp"
#include "ccbo/gp/constraint_model.hpp"
#include "ccbo/gp/kernel.hpp"
#include "ccbo/gp/train.hpp"
#include "ccbo/opt/algorithm.hpp"
#include "ccbo/opt/doe.hpp"
#include "ccbo/problems/true_metrics.hpp"
#include "ccbo/robust/feasibility.hpp"
#include "ccbo/robust/mvn_cdf.hpp"
#include "ccbo/robust/normal.hpp"
#include "ccbo/robust/pof_study.hpp"
#include "ccbo/seed.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

using namespace ccbo;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path out_dir(const std::string& name) {
  const fs::path p = fs::current_path() / "acceptance_out" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Eigen::MatrixXd uniform_points(Eigen::Index n, Eigen::Index d, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd x(n, d);
  for (auto& v : x.reshaped()) v = u(rng);
  return x;
}

std::vector<int> cycle_levels(Eigen::Index n, int l) {
  std::vector<int> v;
  for (Eigen::Index i = 0; i < n; ++i) v.push_back(static_cast<int>(i % l));
  return v;
}

// ---------------------------------------------------------------------------
// 1. GP correctness

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  std::uniform_real_distribution<double> ang(-kPi, kPi), ls(0.15, 1.0);
  double worst_update = 0.0, worst_ll = 0.0, worst_interp = 0.0, worst_psd = 0.0, worst_diag = 0.0;

  for (int l : {2, 3, 4})
    for (int k = 0; k < 1000; ++k) {
      std::vector<double> a(gp::angle_count(l));
      for (auto& t : a) t = ang(rng);
      const Eigen::MatrixXd T = gp::hypersphere_matrix(a, l, 1.7);
      worst_diag = std::max(worst_diag, (T.diagonal().array() - 1.7).abs().maxCoeff());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
      worst_psd = std::max(worst_psd, -es.eigenvalues().minCoeff() / 1.7);
    }

  for (int trial = 0; trial < 20; ++trial) {
    const int l = trial % 2 ? 2 : 0;
    const Eigen::Index dim = 2 + trial % 3;
    gp::KernelSpec s = l ? gp::KernelSpec::multi_output(dim, 2) : gp::KernelSpec::scalar(dim);
    for (Eigen::Index k = 0; k < dim; ++k) s.lengthscales[k] = ls(rng);
    for (auto& t : s.angles) t = ang(rng);
    s.variance = 0.5 + trial * 0.1;
    const gp::PointSet p(uniform_points(15 + trial, dim, rng), l ? cycle_levels(15 + trial, 2) : std::vector<int>{});
    Eigen::VectorXd y(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i)
      y[i] = 10.0 * std::sin(3.0 * p.coords()(i, 0)) + p.coords().row(i).squaredNorm() + p.level(i);
    const auto box = gp::InputBox::unit(dim);
    const auto m = gp::GpModel::condition(s, box, p, y);

    const Eigen::VectorXd mu = m.mean(p);
    worst_interp = std::max(worst_interp, (mu - y).cwiseAbs().maxCoeff() / y.cwiseAbs().maxCoeff());

    const gp::PointSet q(uniform_points(8, dim, rng), l ? cycle_levels(8, 2) : std::vector<int>{});
    const Eigen::MatrixXd C = m.covariance(q, q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    worst_psd = std::max(worst_psd, -es.eigenvalues().minCoeff() / C.diagonal().maxCoeff() - 1e-12);

    // Dense likelihood with full-pivot LU in standardized units.
    const Eigen::VectorXd r = m.scaling().standardize(p, y).array() - s.prior_mean;
    Eigen::MatrixXd K = gp::kernel_matrix(s, p, p);
    K.diagonal().array() += m.jitter() * s.variance;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    const double dense = -0.5 * r.dot(lu.solve(r)) - 0.5 * std::log(lu.determinant()) -
                         0.5 * static_cast<double>(p.size()) * std::log(2.0 * kPi);
    worst_ll = std::max(worst_ll, std::abs(m.log_likelihood() - dense));

    // One-step update against re-conditioning with believer outputs.
    gp::PointSet pend(uniform_points(l ? 2 : 1, dim, rng), l ? std::vector<int>{0, 1} : std::vector<int>{});
    const Eigen::MatrixXd upd = m.one_step_update_cov(pend, q);
    gp::PointSet aug = p;
    aug.append(pend);
    Eigen::VectorXd ya(aug.size());
    ya << y, m.mean(pend);
    const auto re = gp::GpModel::condition(s, box, aug, ya, m.scaling(), {m.jitter(), 10.0, 1e-4});
    Eigen::VectorXd sc(q.size());
    for (Eigen::Index i = 0; i < q.size(); ++i) sc[i] = 1.0 / m.scaling().scale[static_cast<std::size_t>(q.level(i))];
    worst_update = std::max(
        worst_update, (sc.asDiagonal() * (upd - re.covariance(q, q)) * sc.asDiagonal()).cwiseAbs().maxCoeff());
  }
  const double t = seconds_since(t0);
  Outcome o;
  o.pass = worst_update <= 1e-8 && worst_ll <= 1e-8 && worst_interp <= 1e-6 && worst_psd <= 1e-10 &&
           worst_diag <= 1e-12 && t < 60.0;
  std::ostringstream os;
  os << "update " << worst_update << ", loglik " << worst_ll << ", interp " << worst_interp << ", psd " << worst_psd
     << ", diag " << worst_diag << ", " << t << " s";
  o.detail = os.str();
  return o;
}

// ---------------------------------------------------------------------------
// 2. Closed forms against Monte Carlo

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(202);
  std::uniform_real_distribution<double> um(-2.0, 2.0), us(0.1, 2.0), ut(-2.0, 2.0);
  std::normal_distribution<double> normal;
  const long n = 10000000;
  double worst_z = 0.0;
  for (int k = 0; k < 20; ++k) {
    // z within two standard deviations of m, so that improvement has non-negligible probability.
    const double m = um(rng), s = us(rng), z = m + s * ut(rng);
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (long i = 0; i < n; ++i) {
      const double imp = std::max(z - (m + s * normal(rng)), 0.0);
      const double i2 = imp * imp;
      s1 += imp;
      s2 += i2;
      s3 += i2 * imp;
      s4 += i2 * i2;
    }
    const double dn = static_cast<double>(n);
    const double mean = s1 / dn, m2 = s2 / dn, m3 = s3 / dn, m4 = s4 / dn;
    const double var_i = m2 - mean * mean;
    const double se_ei = std::sqrt(var_i / dn);
    // Sample variance estimator: SE from the fourth central moment.
    const double mu4 = m4 - 4 * mean * m3 + 6 * mean * mean * m2 - 3 * std::pow(mean, 4);
    const double se_var = std::sqrt(std::max(mu4 - var_i * var_i, 0.0) / dn);
    worst_z = std::max(worst_z, std::abs(acq::expected_improvement(m, s, z) - mean) / se_ei);
    worst_z = std::max(worst_z, std::abs(acq::improvement_variance(m, s, z) - var_i) / se_var);
  }

  double worst_mvn = 0.0;
  std::uniform_real_distribution<double> ur(-0.95, 0.95);
  for (int k = 0; k < 50; ++k) {
    const double r = ur(rng);
    Eigen::Matrix2d c;
    c << 1, r, r, 1;
    const double v = robust::mvn_cdf(Eigen::Vector2d::Zero(), c, Eigen::Vector2d::Zero()).value;
    worst_mvn = std::max(worst_mvn, std::abs(v - (0.25 + std::asin(r) / (2 * kPi))));
  }
  for (int k = 0; k < 20; ++k) {
    // Trivariate orthant: 1/8 + (asin r12 + asin r13 + asin r23) / (4 pi).
    Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return normal(rng); });
    Eigen::MatrixXd c = a * a.transpose() + 0.2 * Eigen::Matrix3d::Identity();
    const Eigen::VectorXd sd = c.diagonal().cwiseSqrt();
    c = sd.cwiseInverse().asDiagonal() * c * sd.cwiseInverse().asDiagonal();
    const Eigen::Vector3d mean = Eigen::Vector3d::Random() * 2.0;
    const double v = robust::mvn_cdf(mean, c, mean).value;
    const double exact = 0.125 + (std::asin(c(0, 1)) + std::asin(c(0, 2)) + std::asin(c(1, 2))) / (4 * kPi);
    worst_mvn = std::max(worst_mvn, std::abs(v - exact));
  }
  for (Eigen::Index dim : {2, 3, 5}) {
    const Eigen::VectorXd mean = Eigen::VectorXd::Random(dim), up = Eigen::VectorXd::Random(dim);
    const Eigen::VectorXd var = Eigen::VectorXd::Random(dim).array().abs() + 0.1;
    double prod = 1.0;
    for (Eigen::Index i = 0; i < dim; ++i) prod *= robust::norm_cdf((up[i] - mean[i]) / std::sqrt(var[i]));
    worst_mvn = std::max(worst_mvn, std::abs(robust::mvn_cdf(mean, var.asDiagonal().toDenseMatrix(), up).value - prod));
  }
  Outcome o;
  o.pass = worst_z <= 3.0 && worst_mvn <= 5e-4;
  std::ostringstream os;
  os << "worst EI/variance deviation " << worst_z << " SE over 20 triples, worst mvn_cdf error " << worst_mvn << ", "
     << seconds_since(t0) << " s";
  o.detail = os.str();
  return o;
}

// ---------------------------------------------------------------------------
// 3. PoF accuracy of the multi-output model on the 4D problem

Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  robust::PofStudyOptions opt;
  opt.n_train = 30;
  opt.repetitions = 10;
  const auto r = robust::pof_error_study(problems::problem_4d(), opt, 0x5eed);
  const fs::path dir = out_dir("c3");
  std::ofstream csv(dir / "pof_study.csv");
  robust::write_pof_study_csv(csv, r);
  int wins = 0;
  std::ostringstream os;
  for (const auto& rep : r.repetitions) wins += rep.mean_error_multioutput < rep.mean_error_independent ? 1 : 0;
  const double t = seconds_since(t0);
  os << "multi-output better in " << wins << "/10 repetitions, " << t << " s";
  return {wins >= 7 && t < 600.0, os.str()};
}

// ---------------------------------------------------------------------------
// 4 and 5. Optimization studies

bench::StudyConfig study(const std::string& problem, int t_init, int budget, std::vector<std::string> variants,
                         const std::string& name) {
  bench::StudyConfig c;
  c.problem = problem;
  c.variants = std::move(variants);
  c.reps = 10;
  c.t_init = t_init;
  c.budget = budget;
  c.seed = 2024;
  c.out = out_dir(name).string();
  return c;
}

const bench::VariantSummary& summary_of(const bench::StudySummary& s, const std::string& v) {
  for (const auto& x : s.variants)
    if (x.variant == v) return x;
  throw Error("missing variant " + v);
}

void print_study(const bench::StudySummary& s) {
  for (const auto& v : s.variants) {
    std::cout << "  " << v.variant << ": median best " << v.final_best.median << " [" << v.final_best.q25 << ", "
              << v.final_best.q75 << "] n=" << v.final_best.n << ", median distance " << v.final_distance.median
              << ", shares";
    for (double sh : v.constraint_shares) std::cout << ' ' << sh;
    std::cout << ", failed " << v.failed_runs << '\n';
  }
}

Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = bench::run_study(study("analytic-2d", 6, 40, {"REF", "SMCS", "MMCU", "MMCS"}, "c4"));
  const double t = seconds_since(t0);
  print_study(s);
  const double ref_value = problems::reference_optimum("analytic-2d").value;
  bool a = true;
  std::ostringstream os;
  for (const auto& v : s.variants) {
    const double rel = std::abs(v.final_best.median - ref_value) / std::abs(ref_value);
    a = a && v.final_best.n > 0 && rel <= 0.05;
  }
  const double ref_med = summary_of(s, "REF").final_best.median;
  const bool b = summary_of(s, "MMCS").final_best.median <= ref_med && summary_of(s, "MMCU").final_best.median <= ref_med;
  bool c = true;
  for (const char* v : {"SMCS", "MMCS"}) {
    const double sh = summary_of(s, v).constraint_shares.at(0);
    c = c && sh >= 0.55 && sh <= 0.85;
  }
  for (const char* v : {"REF", "MMCU"}) c = c && summary_of(s, v).constraint_shares.at(0) == 0.5;
  os << "(a) within 5%: " << (a ? "yes" : "no") << ", (b) coupled <= REF: " << (b ? "yes" : "no")
     << ", (c) g1 shares: " << (c ? "yes" : "no") << ", complete " << (s.complete ? "yes" : "no") << ", " << t << " s";
  return {a && b && c && s.complete && t < 1800.0, os.str()};
}

Outcome criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = bench::run_study(study("analytic-4d", 30, 160, {"REF", "MMCS"}, "c5"));
  const double t = seconds_since(t0);
  print_study(s);
  const auto& ref = summary_of(s, "REF");
  const auto& mmcs = summary_of(s, "MMCS");
  const bool best = mmcs.final_best.median <= ref.final_best.median;
  const bool dist = mmcs.final_distance.median <= ref.final_distance.median;
  std::ostringstream os;
  os << "MMCS best " << mmcs.final_best.median << " vs REF " << ref.final_best.median << ", distance "
     << mmcs.final_distance.median << " vs " << ref.final_distance.median << ", complete "
     << (s.complete ? "yes" : "no") << ", " << t << " s";
  return {best && dist && s.complete && t < 7200.0, os.str()};
}

// ---------------------------------------------------------------------------
// 6. Degenerate configurations

opt::AlgorithmConfig small(opt::Variant v, int budget) {
  opt::AlgorithmConfig c;
  c.variant = v;
  c.budget = budget;
  c.seed = 606;
  return c;
}

std::string csv_body(const opt::RunRecord& r) {
  std::ostringstream os;
  opt::write_run_csv(os, r);
  const std::string s = os.str();
  return s.substr(s.find('\n') + 1);  // drop the line naming the variant
}

Outcome criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream os;

  // l = 1: SMCS is the split-u REF path and always evaluates the only constraint.
  auto p1 = problems::problem_2d();
  p1.constraints.resize(1);
  const auto smcs = opt::run(p1, small(opt::Variant::kSmcs, 15));
  auto rc = small(opt::Variant::kRef, 15);
  rc.split_u = true;
  const auto ref = opt::run(p1, rc);
  bool p_one = smcs.completed() && smcs.rows.size() == 16;
  for (std::size_t k = 1; k < smcs.rows.size(); ++k) p_one = p_one && smcs.rows[k].p == std::optional<int>(0);
  bool same_path = smcs.completed() && ref.completed() && smcs.rows.size() == ref.rows.size();
  for (std::size_t k = 0; same_path && k < smcs.rows.size(); ++k) {
    const auto &a = smcs.rows[k], &b = ref.rows[k];
    same_path = a.x_targ == b.x_targ && a.u_f == b.u_f && a.u_g == b.u_g && a.incumbent_x == b.incumbent_x &&
                a.incumbent_value == b.incumbent_value && a.constraint_calls == b.constraint_calls &&
                a.true_mean_objective == b.true_mean_objective;
  }
  // The coupled model with a single level coincides with the scalar one.
  const auto mmcs = opt::run(p1, small(opt::Variant::kMmcs, 15));
  const bool coupled_same = mmcs.completed() && csv_body(mmcs) == csv_body(smcs);
  os << "l=1 p always 1: " << p_one << ", SMCS == split-u REF: " << same_path << ", MMCS == SMCS: " << coupled_same;

  // Zero budget.
  bool zero = true;
  for (auto v : {opt::Variant::kRef, opt::Variant::kSmcs, opt::Variant::kMmcu, opt::Variant::kMmcs}) {
    const auto r = opt::run(problems::problem_2d(), small(v, 0));
    zero = zero && r.completed() && r.rows.size() == 1 && r.rows[0].constraint_evals == 0;
  }
  os << ", zero budget: " << zero;

  // Zero cross-correlation: coupled model with orthogonal levels vs independent models.
  Rng rng(66);
  const auto prob = problems::problem_2d();
  const auto box = prob.joint_box();
  const Eigen::MatrixXd pts = opt::scale_to_box(uniform_points(24, 2, rng), box.lower, box.upper);
  const gp::PointSet data(pts);
  Eigen::VectorXd yf(24), g1(24), g2(24);
  for (Eigen::Index i = 0; i < 24; ++i) {
    const Eigen::VectorXd x = pts.row(i).head(1).transpose(), u = pts.row(i).tail(1).transpose();
    yf[i] = prob.objective(x, u);
    g1[i] = prob.constraints[0](x, u);
    g2[i] = prob.constraints[1](x, u);
  }
  gp::KernelSpec s = gp::KernelSpec::scalar(2, 0.25);
  gp::KernelSpec sm = gp::KernelSpec::multi_output(2, 2, 0.25);  // angle pi/2: uncorrelated levels
  const auto f = gp::GpModel::condition(s, box, data, yf);
  std::vector<gp::GpModel> gs{gp::GpModel::condition(s, box, data, g1), gp::GpModel::condition(s, box, data, g2)};
  const auto ind = gp::ConstraintModel::independent(std::move(gs));
  gp::PointSet st = data.with_level(0);
  st.append(data.with_level(1));
  Eigen::VectorXd ys(48);
  ys << g1, g2;
  const auto cpl = gp::ConstraintModel::coupled(gp::GpModel::condition(sm, box, st, ys));
  const auto quad = robust::monte_carlo_quadrature(prob.u_sampler, 50, 7);
  const robust::ZProcess z(f, quad);
  Eigen::MatrixXd cx = opt::scale_to_box(uniform_points(40, 1, rng), prob.x_lower, prob.x_upper);
  Eigen::MatrixXd cu = opt::scale_to_box(uniform_points(40, 1, rng), prob.u_lower, prob.u_upper);
  acq::AcquisitionSettings set;
  set.n_traj = 1000;
  set.n_improvement = 2000;
  const auto zinc = robust::incumbent_feasible_min(z, ind, cx, quad, 0.05);
  const acq::AcquisitionContext ca(f, ind, quad, z, zinc.value, cx, cu, set, 1);
  const acq::AcquisitionContext cb(f, cpl, quad, z, zinc.value, cx, cu, set, 2);  // independent random numbers
  double worst = 0.0;
  for (Eigen::Index i = 0; i < 10; ++i) {
    const Eigen::VectorXd x = cx.row(i).transpose();
    const double pa = acq::pof(ca, x), pb = acq::pof(cb, x);
    const double se = std::sqrt((pa * (1 - pa) + pb * (1 - pb)) / set.n_traj);
    if (se > 0) worst = std::max(worst, std::abs(pa - pb) / se);
    else if (pa != pb) worst = std::max(worst, 1e9);
  }
  // S_f: the standard error comes from the spread over independent seeds.
  // S_g has no sampling noise.
  const Eigen::VectorXd xt = cx.row(0).transpose();
  const Eigen::MatrixXd us = cu.topRows(10);
  const Eigen::VectorXd sfa = acq::sf(ca, xt, us), sfb = acq::sf(cb, xt, us);
  Eigen::MatrixXd reps(10, 8);
  for (int k = 0; k < 8; ++k)
    reps.col(k) = acq::sf(acq::AcquisitionContext(f, ind, quad, z, zinc.value, cx, cu, set, 100 + k), xt, us);
  double worst_sf = 0.0;
  for (Eigen::Index i = 0; i < us.rows(); ++i) {
    const double mean = reps.row(i).mean();
    const double sd = std::sqrt((reps.row(i).array() - mean).square().sum() / 7.0);
    const double diff = std::abs(sfa[i] - sfb[i]);
    if (sd > 0) worst_sf = std::max(worst_sf, diff / (std::sqrt(2.0) * sd));
    else if (diff > 0) worst_sf = std::max(worst_sf, 1e9);
  }
  double worst_sg = 0.0;
  for (std::optional<int> p : {std::optional<int>{}, std::optional<int>{0}, std::optional<int>{1}}) {
    const Eigen::VectorXd a = acq::sg(ca, xt, cu.topRows(10), p), b = acq::sg(cb, xt, cu.topRows(10), p);
    worst_sg = std::max(worst_sg, (a - b).cwiseAbs().maxCoeff());
  }
  const bool zero_corr = worst <= 3.0 && worst_sf <= 3.0 && worst_sg <= 1e-6;
  os << ", zero correlation: PoF " << worst << " SE, S_f " << worst_sf << ", S_g " << worst_sg << ", "
     << seconds_since(t0) << " s";
  return {p_one && same_path && coupled_same && zero && zero_corr, os.str()};
}

// ---------------------------------------------------------------------------
// 7. Determinism

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  bool same = true;
  int files = 0;
  for (const std::string problem : {"analytic-2d", "analytic-4d"}) {
    bench::StudyConfig c;
    c.problem = problem;
    c.reps = 2;
    c.budget = problem == "analytic-2d" ? 12 : 10;
    c.t_init = problem == "analytic-2d" ? 6 : 15;
    c.seed = 77;
    c.out = out_dir("c7_a_" + problem).string();
    c.jobs = 1;
    bench::run_study(c);
    bench::StudyConfig c2 = c;
    c2.out = out_dir("c7_b_" + problem).string();
    c2.jobs = 2;  // scheduling must not matter
    bench::run_study(c2);
    for (const auto& e : fs::directory_iterator(fs::path(c.out) / "runs")) {
      ++files;
      same = same && slurp(e.path()) == slurp(fs::path(c2.out) / "runs" / e.path().filename());
    }
  }
  std::ostringstream os;
  os << files << " run CSVs compared, " << (same ? "all byte-identical" : "differences found") << ", "
     << seconds_since(t0) << " s";
  return {same && files == 16, os.str()};
}

const std::vector<std::function<Outcome()>> kCriteria{criterion1, criterion2, criterion3, criterion4,
                                                      criterion5, criterion6, criterion7};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  } else {
    for (int i = 1; i <= 7; ++i) which.push_back(i);
  }
  int failures = 0;
  for (int c : which) {
    if (c < 1 || c > 7) {
      std::cerr << "unknown criterion " << c << '\n';
      return 2;
    }
    Outcome o;
    try {
      o = kCriteria[static_cast<std::size_t>(c - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c << ": " << o.detail << std::endl;
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
