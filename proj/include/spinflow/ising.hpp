#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>

#include "spinflow/graph.hpp"

namespace spinflow {

/// Spin configurations are n-bit words: bit i = display state s_i in {0,1},
/// internal spin sigma_i = 2 s_i - 1 in {-1,+1}.
using SpinConfiguration = std::uint32_t;

/// States beyond this node count are rejected by the exact machinery
/// (2^n-sized vectors).
constexpr int exactness_cap = 20;

struct ModelParams {
    double beta = 1.0;       // inverse temperature, >= 0
    double coupling = 1.0;   // uniform J
    Eigen::VectorXd field;   // per-node h_i; empty means all zero
};

/// H = -J sum_{edges (i,j)} sigma_i sigma_j - sum_i h_i sigma_i,
/// each edge counted once.
double hamiltonian(SpinConfiguration cfg, const Graph& g, const ModelParams& params);

/// Energies of all 2^n configurations, indexed by the configuration word.
Eigen::VectorXd all_energies(const Graph& g, const ModelParams& params);

/// Glauber acceptance 1 / (1 + exp(beta * delta_e)).
double glauber_accept(double delta_e, double beta);

/// Macrostate <S> = popcount / n.
double macrostate(SpinConfiguration cfg, int n);

/// Row-stochastic one-step operator of single-flip Glauber dynamics:
/// off-diagonal p_{S->S'} = glauber_accept(H(S')-H(S), beta) / n for the n
/// single-flip neighbors, diagonal 1 - sum of the row.
struct TransferOperator {
    int n_nodes = 0;
    Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;

    Eigen::Index state_count() const { return matrix.rows(); }
};

TransferOperator transfer_operator(const Graph& g, const ModelParams& params);

/// Boltzmann-Gibbs distribution exp(-beta H)/Z over all 2^n configurations
/// (max-shifted before exponentiation).
Eigen::VectorXd boltzmann_distribution(const Graph& g, const ModelParams& params);

/// One step of distribution propagation: out = P^T in. Deterministic
/// (rows scattered in index order).
void propagate_step(const TransferOperator& op, const Eigen::VectorXd& in, Eigen::VectorXd& out);

Eigen::VectorXd propagate(const TransferOperator& op, Eigen::VectorXd dist, int steps);

/// Marginal of the macrostate: entry k = total probability of popcount k.
Eigen::VectorXd macrostate_marginal(const Eigen::VectorXd& dist, int n);

/// CSV export, one row per configuration: (state_as_binary_string, probability).
/// Bit i of the state is the i-th character from the right.
std::string distribution_csv(const Eigen::VectorXd& dist, int n);

}  // namespace spinflow
