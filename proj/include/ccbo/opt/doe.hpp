#pragma once

#include "ccbo/problems/problem.hpp"
#include "ccbo/seed.hpp"

#include <Eigen/Dense>

#include <cstdint>

namespace ccbo::opt {

/// Random Latin hypercube of n points in [0,1]^dim (cell-centred jitter).
Eigen::MatrixXd latin_hypercube(Eigen::Index n, Eigen::Index dim, Rng& rng);

/// Smallest pairwise Euclidean distance between rows.
double min_distance(const Eigen::MatrixXd& pts);

/// Latin hypercube improved for the maximin criterion: best of several random
/// designs, then greedy within-column swaps that raise the minimum distance.
Eigen::MatrixXd maximin_lhs(Eigen::Index n, Eigen::Index dim, std::uint64_t seed, int swaps = 2000);

/// Maps rows of the unit cube onto [lower, upper].
Eigen::MatrixXd scale_to_box(const Eigen::MatrixXd& unit, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);

struct InitialDesign {
  Eigen::MatrixXd x;  // t_init x d
  Eigen::MatrixXd u;  // t_init x m
};

/// Maximin LHS over the joint box; the design part is kept and the uncertain
/// part is redrawn from the problem's u distribution.
InitialDesign init_doe(const problems::ProblemDefinition& problem, Eigen::Index t_init, std::uint64_t seed);

}  // namespace ccbo::opt
