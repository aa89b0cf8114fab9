#include "spinflow/ising.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinflow {

namespace {

void check_field(const Graph& g, const ModelParams& params) {
    if (params.field.size() != 0 && params.field.size() != g.node_count())
        throw std::invalid_argument("ModelParams: field must be empty or length n");
    if (params.beta < 0) throw std::invalid_argument("ModelParams: beta must be >= 0");
}

inline double spin(SpinConfiguration cfg, int i) {
    return ((cfg >> i) & 1u) ? 1.0 : -1.0;
}

}  // namespace

double hamiltonian(SpinConfiguration cfg, const Graph& g, const ModelParams& params) {
    check_field(g, params);
    if (g.node_count() < Graph::max_nodes && cfg >= (1u << g.node_count()))
        throw std::invalid_argument("hamiltonian: configuration out of range");
    double h = 0.0;
    for (const auto& [i, j] : g.edges()) h -= params.coupling * spin(cfg, i) * spin(cfg, j);
    if (params.field.size() != 0)
        for (int i = 0; i < g.node_count(); ++i) h -= params.field[i] * spin(cfg, i);
    return h;
}

Eigen::VectorXd all_energies(const Graph& g, const ModelParams& params) {
    check_field(g, params);
    const int n = g.node_count();
    if (n > exactness_cap)
        throw std::invalid_argument("all_energies: node count exceeds the exactness cap (" +
                                    std::to_string(exactness_cap) + ")");
    const Eigen::Index m = Eigen::Index{1} << n;
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    for (const auto& [i, j] : g.edges()) {
        for (Eigen::Index s = 0; s < m; ++s) {
            const auto cfg = static_cast<SpinConfiguration>(s);
            e[s] -= params.coupling * spin(cfg, i) * spin(cfg, j);
        }
    }
    if (params.field.size() != 0) {
        for (int i = 0; i < n; ++i)
            for (Eigen::Index s = 0; s < m; ++s)
                e[s] -= params.field[i] * spin(static_cast<SpinConfiguration>(s), i);
    }
    return e;
}

double glauber_accept(double delta_e, double beta) {
    if (beta < 0) throw std::invalid_argument("glauber_accept: beta must be >= 0");
    return 1.0 / (1.0 + std::exp(beta * delta_e));
}

double macrostate(SpinConfiguration cfg, int n) {
    return static_cast<double>(std::popcount(cfg)) / n;
}

TransferOperator transfer_operator(const Graph& g, const ModelParams& params) {
    const int n = g.node_count();
    if (n > exactness_cap)
        throw std::invalid_argument("transfer_operator: node count exceeds the exactness cap (" +
                                    std::to_string(exactness_cap) + ")");
    const Eigen::VectorXd energy = all_energies(g, params);
    const Eigen::Index m = Eigen::Index{1} << n;

    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(m) * (static_cast<std::size_t>(n) + 1));
    for (Eigen::Index s = 0; s < m; ++s) {
        double diag = 1.0;
        for (int i = 0; i < n; ++i) {
            const Eigen::Index t = s ^ (Eigen::Index{1} << i);
            const double p = glauber_accept(energy[t] - energy[s], params.beta) / n;
            entries.emplace_back(s, t, p);
            diag -= p;
        }
        entries.emplace_back(s, s, diag);
    }
    TransferOperator op;
    op.n_nodes = n;
    op.matrix.resize(m, m);
    op.matrix.setFromTriplets(entries.begin(), entries.end());
    return op;
}

Eigen::VectorXd boltzmann_distribution(const Graph& g, const ModelParams& params) {
    Eigen::VectorXd w = -params.beta * all_energies(g, params);
    w.array() -= w.maxCoeff();
    Eigen::VectorXd p = w.array().exp();
    p /= p.sum();
    return p;
}

void propagate_step(const TransferOperator& op, const Eigen::VectorXd& in, Eigen::VectorXd& out) {
    if (in.size() != op.state_count())
        throw std::invalid_argument("propagate_step: dimension mismatch");
    out.setZero(in.size());
    const auto& mat = op.matrix;
    for (Eigen::Index row = 0; row < mat.outerSize(); ++row) {
        const double mass = in[row];
        if (mass == 0.0) continue;
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(mat, row); it; ++it)
            out[it.col()] += mass * it.value();
    }
}

Eigen::VectorXd propagate(const TransferOperator& op, Eigen::VectorXd dist, int steps) {
    if (steps < 0) throw std::invalid_argument("propagate: steps must be >= 0");
    Eigen::VectorXd scratch(dist.size());
    for (int t = 0; t < steps; ++t) {
        propagate_step(op, dist, scratch);
        dist.swap(scratch);
    }
    return dist;
}

Eigen::VectorXd macrostate_marginal(const Eigen::VectorXd& dist, int n) {
    if (dist.size() != (Eigen::Index{1} << n))
        throw std::invalid_argument("macrostate_marginal: dimension mismatch");
    Eigen::VectorXd marg = Eigen::VectorXd::Zero(n + 1);
    for (Eigen::Index s = 0; s < dist.size(); ++s)
        marg[std::popcount(static_cast<SpinConfiguration>(s))] += dist[s];
    return marg;
}

std::string distribution_csv(const Eigen::VectorXd& dist, int n) {
    if (dist.size() != (Eigen::Index{1} << n))
        throw std::invalid_argument("distribution_csv: dimension mismatch");
    std::string out = "state,probability\n";
    out.reserve(static_cast<std::size_t>(dist.size()) * (static_cast<std::size_t>(n) + 24));
    char buf[40];
    for (Eigen::Index s = 0; s < dist.size(); ++s) {
        std::string bits(static_cast<std::size_t>(n), '0');
        for (int i = 0; i < n; ++i)
            if ((s >> i) & 1) bits[static_cast<std::size_t>(n - 1 - i)] = '1';
        std::snprintf(buf, sizeof(buf), ",%.17g\n", dist[s]);
        out += bits;
        out += buf;
    }
    return out;
}

}  // namespace spinflow
