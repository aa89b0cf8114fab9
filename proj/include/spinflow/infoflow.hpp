#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spinflow/graph.hpp"
#include "spinflow/ising.hpp"

namespace spinflow {

/// Shannon entropy in bits, 0 log 0 = 0.
double entropy(const Eigen::VectorXd& dist);

/// The macrostate partition S_gamma: all configurations with popcount
/// gamma * n.
struct Partition {
    double gamma = 0.0;
    int popcount = 0;
    std::vector<SpinConfiguration> members;
};

/// Throws std::invalid_argument unless gamma*n is an integer in 0..n.
Partition partition_at(int n, double gamma);

/// One lagged-MI curve: I(s_i^tau : S^{tau+t} | <S^tau> = gamma) for
/// t = 0..t_max, in bits.
struct InfoCurve {
    int node = 0;
    double gamma = 0.0;
    Eigen::VectorXd values;

    int t_max() const { return static_cast<int>(values.size()) - 1; }
};

/// Exact conditional time-lagged mutual information at a single lag.
/// Initial distributions are the Boltzmann distribution restricted to the
/// partition (and node state), renormalized, then propagated t steps.
/// If the node state is determined by the partition, I = 0 by convention.
double lagged_mi(const Graph& g, const ModelParams& params, int node, double gamma, int lag);

/// Full curve for one (node, gamma), propagating each conditional
/// distribution one step per lag.
InfoCurve info_curve(const Graph& g, const ModelParams& params, int node, double gamma,
                     int t_max = 300);

/// Curves for all (node, gamma = k/n, k = 0..n) pairs in one pass; the
/// partition-restricted propagation is shared across nodes of a partition.
/// Results are ordered by (k, node) regardless of worker count.
std::vector<InfoCurve> info_curves(const Graph& g, const ModelParams& params, int t_max = 300,
                                   int workers = 0);

}  // namespace spinflow
