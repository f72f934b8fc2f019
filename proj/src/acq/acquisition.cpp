#include "ccbo/acq/acquisition.hpp"

#include "ccbo/acq/criteria.hpp"
#include "ccbo/errors.hpp"
#include "ccbo/gp/linalg.hpp"
#include "ccbo/seed.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

namespace ccbo::acq {

namespace {

constexpr double kNoInformation = 1e-8;

gp::PointSet joint_rows(const Eigen::VectorXd& x, const Eigen::MatrixXd& us) {
  Eigen::MatrixXd c(us.rows(), x.size() + us.cols());
  c.leftCols(x.size()) = x.transpose().replicate(us.rows(), 1);
  c.rightCols(us.cols()) = us;
  return gp::PointSet(std::move(c));
}

/// Data rows (of one constraint level when given) whose design part is x.
std::vector<Eigen::VectorXd> observed_u(const gp::PointSet& data, const Eigen::VectorXd& x, std::optional<int> level) {
  std::vector<Eigen::VectorXd> out;
  const Eigen::Index d = x.size();
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (level && data.has_levels() && data.level(i) != *level) continue;
    if (data.coords().row(i).head(d) == x.transpose()) out.push_back(data.coords().row(i).tail(data.dim() - d).transpose());
  }
  return out;
}

bool contains(const std::vector<Eigen::VectorXd>& rows, const Eigen::VectorXd& u) {
  return std::any_of(rows.begin(), rows.end(), [&](const Eigen::VectorXd& r) { return r == u; });
}

const gp::PointSet& constraint_data(const gp::ConstraintModel& cm, int p) {
  return cm.model(p).inputs();
}

/// Posterior state of the constraints at (x_targ, u_j, p) for all nodes and
/// levels, with the whitened cross-covariances needed for fast one-step
/// updates against arbitrary pending points.
class ConstraintState {
 public:
  ConstraintState(const gp::ConstraintModel& cm, const Eigen::VectorXd& x, const robust::UncertaintyQuadrature& quad)
      : cm_(&cm), l_(cm.n_outputs()), q_(gp::PointSet::expand(x, quad.nodes, cm.n_outputs())) {
    mu_ = cm.mean(q_);
    blocks_ = cm.block_covariances(q_, l_);
    const int groups = cm.is_coupled() ? 1 : l_;
    for (int g = 0; g < groups; ++g) {
      Group grp;
      for (Eigen::Index i = 0; i < q_.size(); ++i)
        if (cm.is_coupled() || q_.level(i) == g) grp.rows.push_back(i);
      const gp::GpModel& model = cm.model(g);
      gp::PointSet sub = q_.subset(grp.rows);
      if (!cm.is_coupled()) sub = sub.without_levels();
      grp.qm = model.to_model_units(sub);
      grp.w = model.whiten(grp.qm);
      grp.row_scale.resize(static_cast<Eigen::Index>(grp.rows.size()));
      for (std::size_t k = 0; k < grp.rows.size(); ++k)
        grp.row_scale[static_cast<Eigen::Index>(k)] =
            model.scaling().scale[static_cast<std::size_t>(cm.is_coupled() ? q_.level(grp.rows[k]) : 0)];
      groups_.push_back(std::move(grp));
    }
  }

  int l() const { return l_; }
  const Eigen::VectorXd& mean() const { return mu_; }
  const std::vector<Eigen::MatrixXd>& blocks() const { return blocks_; }

  /// Posterior Cov(G(Q), G(pending)) with pending rows carrying levels.
  Eigen::MatrixXd cross(const gp::PointSet& pending) const {
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(q_.size(), pending.size());
    for (Eigen::Index k = 0; k < pending.size(); ++k) {
      const int lp = pending.level(k);
      const int g = cm_->is_coupled() ? 0 : lp;
      const gp::GpModel& model = cm_->model(g);
      const Eigen::Index idx[1] = {k};
      gp::PointSet pk = pending.subset(idx);
      if (!cm_->is_coupled()) pk = pk.without_levels();
      const gp::PointSet pm = model.to_model_units(pk);
      const Group& grp = groups_[static_cast<std::size_t>(g)];
      Eigen::VectorXd c = gp::kernel_matrix(model.kernel(), grp.qm, pm).col(0);
      if (model.size() > 0) c.noalias() -= grp.w.transpose() * model.whiten(pm).col(0);
      const double col_scale = model.scaling().scale[static_cast<std::size_t>(cm_->is_coupled() ? lp : 0)];
      for (std::size_t r = 0; r < grp.rows.size(); ++r)
        C(grp.rows[r], k) = c[static_cast<Eigen::Index>(r)] * grp.row_scale[static_cast<Eigen::Index>(r)] * col_scale;
    }
    return C;
  }

  /// Integrated Bernoulli variance after the Kriging Believer update with
  /// `pending` (none when empty).
  double bernoulli_variance(const gp::PointSet& pending, const Eigen::VectorXd& weights,
                            const robust::MvnOptions& mvn) const {
    const Eigen::Index M = weights.size();
    Eigen::MatrixXd A;  // C L^{-T}, so that C K^{-1} C^T = A A^T
    if (!pending.empty()) {
      Eigen::MatrixXd Kpp = cm_->covariance(pending, pending);
      for (Eigen::Index k = 0; k < pending.size(); ++k) Kpp(k, k) += cm_->jitter_variance(pending.level(k));
      const double ref = std::max(Kpp.diagonal().mean(), 1e-300);
      const auto jc = gp::jittered_cholesky(Kpp, ref, {1e-12, 10.0, 1e-4});
      A = cross(pending).transpose();
      jc.llt.matrixL().solveInPlace(A);
      A.transposeInPlace();
    }
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(l_);
    double s = 0.0;
    for (Eigen::Index j = 0; j < M; ++j) {
      Eigen::MatrixXd B = blocks_[static_cast<std::size_t>(j)];
      if (A.size() > 0) B.noalias() -= A.middleRows(j * l_, l_) * A.middleRows(j * l_, l_).transpose();
      const double p = robust::mvn_cdf(mu_.segment(j * l_, l_), B, zero, mvn).value;
      s += weights[j] * p * (1.0 - p);
    }
    return s;
  }

 private:
  struct Group {
    std::vector<Eigen::Index> rows;
    gp::PointSet qm;
    Eigen::MatrixXd w;
    Eigen::VectorXd row_scale;
  };
  const gp::ConstraintModel* cm_;
  int l_;
  gp::PointSet q_;
  Eigen::VectorXd mu_;
  std::vector<Eigen::MatrixXd> blocks_;
  std::vector<Group> groups_;
};

gp::PointSet pending_set(const Eigen::VectorXd& x, const Eigen::VectorXd& u, int l, std::optional<int> p) {
  Eigen::VectorXd row(x.size() + u.size());
  row << x, u;
  gp::PointSet ps;
  if (p) {
    ps.append(row, *p);
  } else {
    for (int k = 0; k < l; ++k) ps.append(row, k);
  }
  return ps;
}

}  // namespace

AcquisitionContext::AcquisitionContext(const gp::GpModel& objective, const gp::ConstraintModel& constraints,
                                       const robust::UncertaintyQuadrature& quad, const robust::ZProcess& z,
                                       double z_min_feas, Eigen::MatrixXd candidate_x, Eigen::MatrixXd candidate_u,
                                       const AcquisitionSettings& settings, std::uint64_t seed)
    : objective_(&objective),
      constraints_(&constraints),
      quad_(&quad),
      z_(&z),
      z_min_feas_(z_min_feas),
      candidate_x_(std::move(candidate_x)),
      candidate_u_(std::move(candidate_u)),
      settings_(settings) {
  if (!std::isfinite(z_min_feas_)) throw DomainError("AcquisitionContext: z_min_feas must be finite");
  if (candidate_x_.rows() == 0 || candidate_u_.rows() == 0) throw ShapeError("AcquisitionContext: empty candidate set");
  if (settings_.n_traj < 1 || settings_.n_improvement < 1) throw DomainError("AcquisitionContext: sample counts must be positive");
  quad.validate();
  traj_normals_ = robust::trajectory_normals(quad.size() * constraints.n_outputs(), settings_.n_traj,
                                             derive_seed(seed, {tag(Stream::kTrajectories)}));
  Rng rng(derive_seed(seed, {tag(Stream::kImprovement)}));
  std::normal_distribution<double> normal;
  improvement_normals_.resize(settings_.n_improvement);
  for (Eigen::Index k = 0; k < improvement_normals_.size(); ++k) improvement_normals_[k] = normal(rng);
}

double pof(const AcquisitionContext& ctx, const Eigen::VectorXd& x) {
  return robust::pof_trajectories(ctx.constraints(), x, ctx.quad(), ctx.settings().alpha, ctx.trajectory_normals());
}

double efi(const AcquisitionContext& ctx, const Eigen::VectorXd& x) {
  const Eigen::MatrixXd xs = x.transpose();
  const double m = ctx.z().mean(xs)[0];
  const double s = std::sqrt(ctx.z().variance(xs)[0]);
  const double ei = expected_improvement(m, s, ctx.z_min_feas());
  return ei > 0.0 ? ei * pof(ctx, x) : 0.0;
}

XTarget select_x_targ(const AcquisitionContext& ctx) {
  const Eigen::MatrixXd& X = ctx.candidate_x();
  const Eigen::Index n = X.rows();
  const Eigen::VectorXd mz = ctx.z().mean(X);
  const Eigen::VectorXd sz = ctx.z().variance(X).cwiseSqrt();
  Eigen::VectorXd ei(n);
  for (Eigen::Index i = 0; i < n; ++i) ei[i] = expected_improvement(mz[i], sz[i], ctx.z_min_feas());

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return ei[a] > ei[b]; });

  XTarget out;
  std::vector<double> pofs(static_cast<std::size_t>(n), -1.0);
  double best = -1.0;
  Eigen::Index best_i = -1;
  for (Eigen::Index i : order) {
    if (ei[i] < best) break;
    double v = 0.0;
    if (ei[i] > 0.0) {
      pofs[static_cast<std::size_t>(i)] = pof(ctx, X.row(i).transpose());
      ++out.pof_evaluations;
      v = ei[i] * pofs[static_cast<std::size_t>(i)];
    }
    if (v > best || (v == best && i < best_i)) {
      best = v;
      best_i = i;
    }
  }

  if (best > 0.0) {
    out.index = best_i;
    out.efi = best;
    out.pof = pofs[static_cast<std::size_t>(best_i)];
  } else {
    // No candidate promises feasible improvement: explore feasibility instead.
    out.fallback = true;
    double best_pof = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& p = pofs[static_cast<std::size_t>(i)];
      if (p < 0.0) {
        p = pof(ctx, X.row(i).transpose());
        ++out.pof_evaluations;
      }
      best_pof = std::max(best_pof, p);
    }
    double best_ec = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (pofs[static_cast<std::size_t>(i)] != best_pof) continue;
      const double ec = robust::expected_c(ctx.constraints(), X.row(i).transpose(), ctx.quad(), ctx.settings().alpha,
                                           ctx.settings().mvn);
      if (ec < best_ec) {
        best_ec = ec;
        out.index = i;
      }
    }
    out.efi = 0.0;
    out.pof = best_pof;
  }
  out.x = X.row(out.index).transpose();
  return out;
}

double current_improvement_variance(const AcquisitionContext& ctx, const Eigen::VectorXd& x) {
  const Eigen::MatrixXd xs = x.transpose();
  return improvement_variance(ctx.z().mean(xs)[0], std::sqrt(ctx.z().variance(xs)[0]), ctx.z_min_feas());
}

double current_feasibility_variance(const AcquisitionContext& ctx, const Eigen::VectorXd& x) {
  const ConstraintState st(ctx.constraints(), x, ctx.quad());
  return st.bernoulli_variance(gp::PointSet(), ctx.quad().weights, ctx.settings().mvn);
}

Eigen::VectorXd sf(const AcquisitionContext& ctx, const Eigen::VectorXd& x_targ, const Eigen::MatrixXd& us) {
  const Eigen::MatrixXd xs = x_targ.transpose();
  const double m = ctx.z().mean(xs)[0];
  const double var_z = ctx.z().variance(xs)[0];
  const double s_z = std::sqrt(var_z);
  const double zmin = ctx.z_min_feas();
  const double current = improvement_variance(m, s_z, zmin);

  const gp::GpModel& f = ctx.objective();
  const gp::PointSet pts = joint_rows(x_targ, us);
  const Eigen::VectorXd c = ctx.z().cross_covariance(x_targ, pts);
  const Eigen::VectorXd v = f.variance(pts).array() + f.jitter_variance(0);
  const double prior = f.kernel().variance * f.scaling().scale.front() * f.scaling().scale.front();
  const Eigen::VectorXd& xi = ctx.improvement_normals();

  Eigen::VectorXd out(us.rows());
  for (Eigen::Index i = 0; i < us.rows(); ++i) {
    if (v[i] < kNoInformation * prior) {
      out[i] = current;
      continue;
    }
    // Future mean of Z at x_targ is Gaussian around the current mean with the
    // explained variance; the future variance is what remains.
    const double explained = std::min(c[i] * c[i] / v[i], var_z);
    const double s = std::sqrt(explained);
    const double s_next = std::sqrt(std::max(var_z - explained, 0.0));
    double acc = 0.0;
    for (Eigen::Index k = 0; k < xi.size(); ++k) acc += improvement_variance(m + s * xi[k], s_next, zmin);
    out[i] = acc / static_cast<double>(xi.size());
  }
  return out;
}

Eigen::VectorXd sg(const AcquisitionContext& ctx, const Eigen::VectorXd& x_targ, const Eigen::MatrixXd& us,
                   std::optional<int> p) {
  const int l = ctx.constraints().n_outputs();
  if (p && (*p < 0 || *p >= l)) throw ShapeError("sg: constraint index out of range");
  const ConstraintState st(ctx.constraints(), x_targ, ctx.quad());
  Eigen::VectorXd out(us.rows());
  for (Eigen::Index i = 0; i < us.rows(); ++i)
    out[i] = st.bernoulli_variance(pending_set(x_targ, us.row(i).transpose(), l, p), ctx.quad().weights,
                                   ctx.settings().mvn);
  return out;
}

Eigen::VectorXd proxy_s(const AcquisitionContext& ctx, const Eigen::VectorXd& x_targ, const Eigen::MatrixXd& us) {
  return sf(ctx, x_targ, us).cwiseProduct(sg(ctx, x_targ, us, std::nullopt));
}

UTargets select_u(const AcquisitionContext& ctx, const Eigen::VectorXd& x_targ, USelectionMode mode) {
  const Eigen::MatrixXd& U = ctx.candidate_u();
  const Eigen::Index n = U.rows();
  const int l = ctx.constraints().n_outputs();
  const auto f_seen = observed_u(ctx.objective().inputs(), x_targ, std::nullopt);
  std::vector<std::vector<Eigen::VectorXd>> g_seen;
  for (int p = 0; p < l; ++p) g_seen.push_back(observed_u(constraint_data(ctx.constraints(), p), x_targ, p));

  // Lowest value among admissible entries, else among all; lowest index on ties.
  auto argmin = [](const Eigen::VectorXd& vals, const std::vector<bool>& admissible) {
    const bool any = std::find(admissible.begin(), admissible.end(), true) != admissible.end();
    Eigen::Index best = -1;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
      if (any && !admissible[static_cast<std::size_t>(i)]) continue;
      if (best < 0 || vals[i] < vals[best]) best = i;
    }
    return best;
  };

  UTargets out;
  if (mode == USelectionMode::kCommon) {
    const Eigen::VectorXd s = proxy_s(ctx, x_targ, U);
    std::vector<bool> ok(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd u = U.row(i).transpose();
      bool fresh = !contains(f_seen, u);
      for (int p = 0; p < l; ++p) fresh = fresh && !contains(g_seen[static_cast<std::size_t>(p)], u);
      ok[static_cast<std::size_t>(i)] = fresh;
    }
    const Eigen::Index i = argmin(s, ok);
    out.index_f = out.index_g = i;
    out.u_f = out.u_g = U.row(i).transpose();
    out.criterion_f = out.criterion_g = s[i];
    return out;
  }

  const Eigen::VectorXd s_f = sf(ctx, x_targ, U);
  std::vector<bool> ok_f(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ok_f[static_cast<std::size_t>(i)] = !contains(f_seen, U.row(i).transpose());
  out.index_f = argmin(s_f, ok_f);
  out.u_f = U.row(out.index_f).transpose();
  out.criterion_f = s_f[out.index_f];

  if (mode == USelectionMode::kSplit) {
    const Eigen::VectorXd s_g = sg(ctx, x_targ, U, std::nullopt);
    std::vector<bool> ok_g(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      bool fresh = true;
      for (int p = 0; p < l; ++p) fresh = fresh && !contains(g_seen[static_cast<std::size_t>(p)], U.row(i).transpose());
      ok_g[static_cast<std::size_t>(i)] = fresh;
    }
    out.index_g = argmin(s_g, ok_g);
    out.u_g = U.row(out.index_g).transpose();
    out.criterion_g = s_g[out.index_g];
    return out;
  }

  Eigen::VectorXd s_g(n * l);
  std::vector<bool> ok_g(static_cast<std::size_t>(n * l));
  for (int p = 0; p < l; ++p) {
    const Eigen::VectorXd v = sg(ctx, x_targ, U, p);
    for (Eigen::Index i = 0; i < n; ++i) {
      s_g[i * l + p] = v[i];
      ok_g[static_cast<std::size_t>(i * l + p)] = !contains(g_seen[static_cast<std::size_t>(p)], U.row(i).transpose());
    }
  }
  const Eigen::Index k = argmin(s_g, ok_g);
  out.index_g = k / l;
  out.p = static_cast<int>(k % l);
  out.u_g = U.row(out.index_g).transpose();
  out.criterion_g = s_g[k];
  return out;
}

void write_surface_csv(std::ostream& os, const Eigen::MatrixXd& candidates, const Eigen::VectorXd& values,
                       const std::string& criterion) {
  if (candidates.rows() != values.size()) throw ShapeError("write_surface_csv: size mismatch");
  os << "# ccbo acquisition-surface schema 1\n";
  for (Eigen::Index k = 0; k < candidates.cols(); ++k) os << 'c' << k << ',';
  os << criterion << '\n' << std::setprecision(12);
  for (Eigen::Index i = 0; i < candidates.rows(); ++i) {
    for (Eigen::Index k = 0; k < candidates.cols(); ++k) os << candidates(i, k) << ',';
    os << values[i] << '\n';
  }
}

}  // namespace ccbo::acq
