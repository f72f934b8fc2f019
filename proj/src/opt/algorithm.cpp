#include "ccbo/opt/algorithm.hpp"

#include "ccbo/errors.hpp"
#include "ccbo/opt/doe.hpp"
#include "ccbo/robust/feasibility.hpp"
#include "ccbo/robust/z_process.hpp"
#include "ccbo/seed.hpp"

#include <chrono>
#include <cmath>

namespace ccbo::opt {

namespace {

// Reporting uses one u-sample for every run so that true metrics compare
// across repetitions and variants.
constexpr std::uint64_t kReportingSeed = 0x7265706f7274;

struct Dataset {
  gp::PointSet inputs;
  Eigen::VectorXd values = Eigen::VectorXd(0);

  bool contains(const Eigen::VectorXd& row) const {
    for (Eigen::Index i = 0; i < inputs.size(); ++i)
      if (inputs.coords().row(i) == row.transpose()) return true;
    return false;
  }
  void add(const Eigen::VectorXd& row, double value) {
    if (contains(row)) return;  // deterministic functions: the value is already known
    inputs.append(row);
    values.conservativeResize(values.size() + 1);
    values[values.size() - 1] = value;
  }
};

double evaluate(const problems::Function& f, const Eigen::VectorXd& x, const Eigen::VectorXd& u, const char* what) {
  const double v = f(x, u);
  if (!std::isfinite(v)) throw DataError(std::string("non-finite value from ") + what);
  return v;
}

Eigen::VectorXd joint(const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
  Eigen::VectorXd r(x.size() + u.size());
  r << x, u;
  return r;
}

struct Models {
  std::optional<gp::GpModel> objective;
  std::optional<gp::ConstraintModel> constraints;
};

class Trainer {
 public:
  Trainer(const problems::ProblemDefinition& problem, const AlgorithmConfig& config)
      : problem_(problem), config_(config), box_(problem.joint_box()) {}

  Models train(const Dataset& f, const std::vector<Dataset>& g, int iteration, std::uint64_t seed) {
    try {
      return attempt(f, g, iteration == 0 ? config_.restarts : config_.retrain_restarts, seed, true);
    } catch (const Error&) {
      return attempt(f, g, config_.restarts, derive_seed(seed, {0x7265747279}), false);
    }
  }

 private:
  gp::TrainOptions options(int restarts) const {
    gp::TrainOptions o;
    o.restarts = restarts;
    o.local = config_.local;
    return o;
  }

  Models attempt(const Dataset& f, const std::vector<Dataset>& g, int restarts, std::uint64_t seed, bool warm) {
    const Eigen::Index dim = box_.dim();
    const int l = problem_.l();
    auto warm_of = [&](const std::optional<gp::KernelSpec>& s) { return warm ? s : std::nullopt; };
    Models out;
    out.objective = gp::fit(gp::KernelSpec::scalar(dim), box_, f.inputs, f.values, options(restarts),
                            derive_seed(seed, {tag(Stream::kTraining), 0}), warm_of(warm_f_));
    warm_f_ = out.objective->kernel();
    if (coupled_constraints(config_.variant)) {
      gp::PointSet stacked;
      Eigen::VectorXd y(0);
      for (int p = 0; p < l; ++p) {
        const auto& ds = g[static_cast<std::size_t>(p)];
        stacked.append(ds.inputs.with_level(p));
        y.conservativeResize(y.size() + ds.values.size());
        y.tail(ds.values.size()) = ds.values;
      }
      if (stacked.size() > config_.max_rows)
        throw ConfigError("coupled constraint model would exceed " + std::to_string(config_.max_rows) + " rows");
      // Same stream as the first independent constraint, so that l = 1 runs coincide.
      auto model = gp::fit(gp::KernelSpec::multi_output(dim, l), box_, stacked, y, options(restarts),
                           derive_seed(seed, {tag(Stream::kTraining), 2}), warm_of(warm_coupled_));
      warm_coupled_ = model.kernel();
      out.constraints = gp::ConstraintModel::coupled(std::move(model));
    } else {
      warm_g_.resize(static_cast<std::size_t>(l));
      std::vector<gp::GpModel> models;
      for (int p = 0; p < l; ++p) {
        const auto& ds = g[static_cast<std::size_t>(p)];
        models.push_back(gp::fit(gp::KernelSpec::scalar(dim), box_, ds.inputs, ds.values, options(restarts),
                                 derive_seed(seed, {tag(Stream::kTraining), 2 + static_cast<std::uint64_t>(p)}),
                                 warm_of(warm_g_[static_cast<std::size_t>(p)])));
        warm_g_[static_cast<std::size_t>(p)] = models.back().kernel();
      }
      out.constraints = gp::ConstraintModel::independent(std::move(models));
    }
    return out;
  }

  const problems::ProblemDefinition& problem_;
  const AlgorithmConfig& config_;
  gp::InputBox box_;
  std::optional<gp::KernelSpec> warm_f_;
  std::optional<gp::KernelSpec> warm_coupled_;
  std::vector<std::optional<gp::KernelSpec>> warm_g_;
};

}  // namespace

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::kRef: return "REF";
    case Variant::kSmcs: return "SMCS";
    case Variant::kMmcu: return "MMCU";
    case Variant::kMmcs: return "MMCS";
  }
  return "?";
}

Variant parse_variant(const std::string& name) {
  for (Variant v : {Variant::kRef, Variant::kSmcs, Variant::kMmcu, Variant::kMmcs})
    if (variant_name(v) == name) return v;
  throw ConfigError("unknown variant '" + name + "' (expected REF, SMCS, MMCU or MMCS)");
}

bool coupled_constraints(Variant v) { return v == Variant::kMmcu || v == Variant::kMmcs; }
bool selects_constraint(Variant v) { return v == Variant::kSmcs || v == Variant::kMmcs; }

void AlgorithmConfig::validate() const {
  if (t_init < 2) throw ConfigError("t_init must be at least 2");
  if (budget < 0) throw ConfigError("budget must be non-negative");
  if (alpha >= 1.0 || alpha == 0.0) throw ConfigError("alpha must lie in (0, 1)");
  if (n_u < 1 || n_traj < 1 || n_improvement < 1) throw ConfigError("Monte-Carlo sizes must be positive");
  if (cand_factor < 1) throw ConfigError("cand_factor must be positive");
  if (restarts < 1 || retrain_restarts < 1) throw ConfigError("restarts must be positive");
  if (reporting_mc < 1) throw ConfigError("reporting_mc must be positive");
}

CandidateSets make_candidates(const problems::ProblemDefinition& problem, int cand_factor, std::uint64_t seed) {
  Rng rx(derive_seed(seed, {tag(Stream::kCandidatesX)}));
  Rng ru(derive_seed(seed, {tag(Stream::kCandidatesU)}));
  CandidateSets c;
  c.x = scale_to_box(latin_hypercube(cand_factor * problem.d(), problem.d(), rx), problem.x_lower, problem.x_upper);
  c.u = scale_to_box(latin_hypercube(cand_factor * problem.m(), problem.m(), ru), problem.u_lower, problem.u_upper);
  return c;
}

robust::Incumbent final_solution(const gp::GpModel& objective, const gp::ConstraintModel& constraints,
                                 const Eigen::MatrixXd& candidate_x, const robust::UncertaintyQuadrature& quad,
                                 double alpha) {
  const robust::ZProcess z(objective, quad);
  return robust::incumbent_feasible_min(z, constraints, candidate_x, quad, alpha);
}

RunRecord run(const problems::ProblemDefinition& problem, const AlgorithmConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  problem.validate();
  config.validate();
  const double alpha = config.alpha < 0.0 ? problem.alpha : config.alpha;
  const int l = problem.l();
  const bool select = selects_constraint(config.variant);
  const bool split = config.split_u.value_or(select);
  const acq::USelectionMode mode = !split ? acq::USelectionMode::kCommon
                                   : select ? acq::USelectionMode::kSplitSelect
                                            : acq::USelectionMode::kSplit;
  const int cost = mode == acq::USelectionMode::kSplitSelect ? 1 : l;

  RunRecord rec;
  rec.problem = problem.name;
  rec.variant = variant_name(config.variant);
  rec.repetition = config.repetition;
  rec.d = problem.d();
  rec.m = problem.m();
  rec.l = l;
  rec.alpha = alpha;
  auto finish = [&] {
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
  };

  const problems::TrueMetrics truth(problem, config.reporting_mc, kReportingSeed);
  Dataset fdata;
  std::vector<Dataset> gdata(static_cast<std::size_t>(l));
  IterationRow row;
  row.constraint_calls.assign(static_cast<std::size_t>(l), 0);

  try {
    const InitialDesign doe = init_doe(problem, config.t_init, config.seed);
    for (Eigen::Index i = 0; i < config.t_init; ++i) {
      const Eigen::VectorXd x = doe.x.row(i).transpose(), u = doe.u.row(i).transpose();
      fdata.add(joint(x, u), evaluate(problem.objective, x, u, "objective"));
      for (int p = 0; p < l; ++p)
        gdata[static_cast<std::size_t>(p)].add(
            joint(x, u), evaluate(problem.constraints[static_cast<std::size_t>(p)], x, u, "constraint"));
    }
  } catch (const std::exception& e) {
    rec.error = std::string("initial design: ") + e.what();
    return finish();
  }

  const CandidateSets cands = make_candidates(problem, config.cand_factor, config.seed);
  Trainer trainer(problem, config);
  acq::AcquisitionSettings settings;
  settings.alpha = alpha;
  settings.n_traj = config.n_traj;
  settings.n_improvement = config.n_improvement;

  for (int k = 0;; ++k) {
    const std::uint64_t it_seed = derive_seed(config.seed, {tag(Stream::kIteration), static_cast<std::uint64_t>(k)});
    try {
      const Models models = trainer.train(fdata, gdata, k, it_seed);
      const auto quad = robust::monte_carlo_quadrature(problem.u_sampler, config.n_u,
                                                       derive_seed(it_seed, {tag(Stream::kQuadrature)}));
      const robust::ZProcess z(*models.objective, quad);
      const robust::Incumbent inc = robust::incumbent_feasible_min(z, *models.constraints, cands.x, quad, alpha);

      row.iteration = k;
      row.incumbent_x = inc.x;
      row.incumbent_value = inc.value;
      row.incumbent_fallback = inc.fallback;
      row.true_mean_objective = truth.mean_objective(inc.x);
      row.true_pof = truth.pof(inc.x);
      row.true_feasible = row.true_pof >= 1.0 - alpha;
      rec.rows.push_back(row);

      if (row.constraint_evals + cost > config.budget) break;

      const acq::AcquisitionContext ctx(*models.objective, *models.constraints, quad, z, inc.value, cands.x, cands.u,
                                        settings, it_seed);
      const acq::XTarget xt = acq::select_x_targ(ctx);
      const acq::UTargets ut = acq::select_u(ctx, xt.x, mode);

      row.x_targ = xt.x;
      row.x_fallback = xt.fallback;
      row.u_f = ut.u_f;
      row.u_g = ut.u_g;
      row.p = ut.p;
      fdata.add(joint(xt.x, ut.u_f), evaluate(problem.objective, xt.x, ut.u_f, "objective"));
      ++row.objective_evals;
      for (int p = 0; p < l; ++p) {
        if (ut.p && *ut.p != p) continue;
        gdata[static_cast<std::size_t>(p)].add(
            joint(xt.x, ut.u_g), evaluate(problem.constraints[static_cast<std::size_t>(p)], xt.x, ut.u_g, "constraint"));
        ++row.constraint_evals;
        ++row.constraint_calls[static_cast<std::size_t>(p)];
      }
    } catch (const std::exception& e) {
      rec.error = "iteration " + std::to_string(k) + ": " + e.what();
      break;
    }
  }
  return finish();
}

}  // namespace ccbo::opt
