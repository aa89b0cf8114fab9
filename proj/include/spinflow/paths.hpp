#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spinflow/graph.hpp"
#include "spinflow/ising.hpp"

namespace spinflow {

/// A strict monotone flip sequence from the all-zeros attractor: consecutive
/// states differ by one 0->1 flip, so popcount equals the step index.
struct Trajectory {
    std::vector<int> flip_order;              // nodes flipped, in order
    std::vector<SpinConfiguration> states;    // S^0 .. S^horizon
    double log_prob = 0.0;                    // natural log of the path probability
};

/// All ordered sequences of `horizon` distinct 0->1 flips reaching the
/// tipping partition <S> = 0.5, scored by transfer-operator log-probability
/// (node choice 1/n times Glauber acceptance per step). Requires even n and
/// horizon = n/2; count is the falling factorial n!/(n-horizon)!.
/// Output is in lexicographic flip-order.
std::vector<Trajectory> enumerate_tipping_trajectories(const Graph& g, const ModelParams& params,
                                                       int horizon);

/// Trajectories attaining the maximum log_prob within relative tolerance.
std::vector<Trajectory> max_likelihood_trajectories(const std::vector<Trajectory>& trajectories,
                                                    double rel_tol = 1e-9);

/// E[s_i = 1] per node (rows) and popcount level (columns 0..horizon).
/// Weights are exp(log_prob) normalized over trajectories, or uniform.
Eigen::MatrixXd flip_expectations(const std::vector<Trajectory>& trajectories, int n,
                                  bool probability_weighted = true);

}  // namespace spinflow
