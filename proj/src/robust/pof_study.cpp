#include "ccbo/robust/pof_study.hpp"

#include "ccbo/errors.hpp"
#include "ccbo/gp/constraint_model.hpp"
#include "ccbo/opt/doe.hpp"
#include "ccbo/robust/mvn_cdf.hpp"
#include "ccbo/seed.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace ccbo::robust {

namespace {

constexpr int kCsvSchema = 1;

double model_pof(const gp::ConstraintModel& model, const Eigen::VectorXd& x, const Eigen::MatrixXd& us) {
  const int l = model.n_outputs();
  const gp::PointSet q = gp::PointSet::expand(x, us, l);
  const Eigen::VectorXd mu = model.mean(q);
  const auto blocks = model.block_covariances(q, l);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(l);
  double s = 0.0;
  for (Eigen::Index j = 0; j < us.rows(); ++j)
    s += mvn_cdf(mu.segment(j * l, l), blocks[static_cast<std::size_t>(j)], zero).value;
  return s / static_cast<double>(us.rows());
}

double true_pof(const problems::ProblemDefinition& p, const Eigen::VectorXd& x, const Eigen::MatrixXd& us) {
  Eigen::Index ok = 0;
  for (Eigen::Index j = 0; j < us.rows(); ++j) {
    const Eigen::VectorXd u = us.row(j).transpose();
    bool feasible = true;
    for (const auto& g : p.constraints) feasible = feasible && g(x, u) <= 0.0;
    ok += feasible ? 1 : 0;
  }
  return static_cast<double>(ok) / static_cast<double>(us.rows());
}

}  // namespace

PofStudyResult pof_error_study(const problems::ProblemDefinition& problem, const PofStudyOptions& options,
                               std::uint64_t seed) {
  problem.validate();
  if (options.n_train < 2 || options.n_test < 1 || options.n_mc < 1 || options.repetitions < 1)
    throw ConfigError("pof_error_study: sizes must be positive");
  const int l = problem.l();
  const Eigen::Index d = problem.d();
  const gp::InputBox box = problem.joint_box();

  PofStudyResult result;
  for (int rep = 0; rep < options.repetitions; ++rep) {
    const std::uint64_t rep_seed = derive_seed(seed, {static_cast<std::uint64_t>(rep)});

    std::vector<gp::GpModel> scalar_models;
    gp::PointSet stacked;
    Eigen::VectorXd stacked_y(0);
    for (int p = 0; p < l; ++p) {
      const opt::InitialDesign doe =
          opt::init_doe(problem, options.n_train, derive_seed(rep_seed, {tag(Stream::kDoe), static_cast<std::uint64_t>(p)}));
      Eigen::MatrixXd coords(options.n_train, d + problem.m());
      coords << doe.x, doe.u;
      Eigen::VectorXd y(options.n_train);
      for (Eigen::Index i = 0; i < y.size(); ++i)
        y[i] = problem.constraints[static_cast<std::size_t>(p)](doe.x.row(i).transpose(), doe.u.row(i).transpose());
      const gp::PointSet pts(coords);
      scalar_models.push_back(gp::fit(gp::KernelSpec::scalar(box.dim()), box, pts, y, options.train,
                                      derive_seed(rep_seed, {tag(Stream::kTraining), static_cast<std::uint64_t>(p)})));
      stacked.append(pts.with_level(p));
      stacked_y.conservativeResize(stacked_y.size() + y.size());
      stacked_y.tail(y.size()) = y;
    }
    const auto independent = gp::ConstraintModel::independent(std::move(scalar_models));
    const auto coupled = gp::ConstraintModel::coupled(
        gp::fit(gp::KernelSpec::multi_output(box.dim(), l), box, stacked, stacked_y, options.train,
                derive_seed(rep_seed, {tag(Stream::kTraining), static_cast<std::uint64_t>(l)})));

    Rng rng(derive_seed(rep_seed, {tag(Stream::kReporting)}));
    const Eigen::MatrixXd xs = robust::uniform_sampler(problem.x_lower, problem.x_upper)(options.n_test, rng);
    const Eigen::MatrixXd us = problem.u_sampler(options.n_mc, rng);

    PofStudyRepetition summary;
    for (Eigen::Index i = 0; i < xs.rows(); ++i) {
      const Eigen::VectorXd x = xs.row(i).transpose();
      PofStudyPoint pt;
      pt.repetition = rep;
      pt.x = x;
      pt.true_pof = true_pof(problem, x, us);
      pt.error_independent = std::abs(model_pof(independent, x, us) - pt.true_pof);
      pt.error_multioutput = std::abs(model_pof(coupled, x, us) - pt.true_pof);
      summary.mean_error_independent += pt.error_independent;
      summary.mean_error_multioutput += pt.error_multioutput;
      result.points.push_back(std::move(pt));
    }
    summary.mean_error_independent /= static_cast<double>(xs.rows());
    summary.mean_error_multioutput /= static_cast<double>(xs.rows());
    result.repetitions.push_back(summary);
  }
  return result;
}

void write_pof_study_csv(std::ostream& os, const PofStudyResult& result) {
  os << "# ccbo pof-study schema " << kCsvSchema << '\n';
  const Eigen::Index d = result.points.empty() ? 0 : result.points.front().x.size();
  os << "kind,repetition";
  for (Eigen::Index k = 0; k < d; ++k) os << ",x" << k;
  os << ",true_pof,error_independent,error_multioutput\n";
  os << std::setprecision(10);
  for (const auto& p : result.points) {
    os << "point," << p.repetition;
    for (Eigen::Index k = 0; k < d; ++k) os << ',' << p.x[k];
    os << ',' << p.true_pof << ',' << p.error_independent << ',' << p.error_multioutput << '\n';
  }
  for (std::size_t r = 0; r < result.repetitions.size(); ++r) {
    os << "summary," << r;
    for (Eigen::Index k = 0; k < d; ++k) os << ',';
    os << ",," << result.repetitions[r].mean_error_independent << ',' << result.repetitions[r].mean_error_multioutput
       << '\n';
  }
}

}  // namespace ccbo::robust
