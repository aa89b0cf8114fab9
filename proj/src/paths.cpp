#include "spinflow/paths.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace spinflow {

namespace {

struct Enumerator {
    const Graph& g;
    const ModelParams& params;
    int horizon;
    double log_choice;  // log(1/n)
    std::vector<Trajectory>* out;

    std::vector<int> order;
    std::vector<SpinConfiguration> states;
    std::vector<double> log_probs;

    // Flipping node v (0 -> 1, spin -1 -> +1) in `state` changes the energy by
    // dE = -2 J sum_{j in N(v)} sigma_j - 2 h_v; neighbors enter via a popcount.
    double flip_delta(SpinConfiguration state, int v) const {
        const std::uint32_t nb = g.neighbors(v);
        const int up = std::popcount(nb & state);
        const int k = std::popcount(nb);
        double d = -2.0 * params.coupling * (2 * up - k);
        if (params.field.size() != 0) d -= 2.0 * params.field[v];
        return d;
    }

    void dfs(int depth) {
        if (depth == horizon) {
            Trajectory traj;
            traj.flip_order = order;
            traj.states = states;
            traj.log_prob = 0.0;
            for (double lp : log_probs) traj.log_prob += lp;
            out->push_back(std::move(traj));
            return;
        }
        const SpinConfiguration state = states.back();
        for (int v = 0; v < g.node_count(); ++v) {
            if ((state >> v) & 1u) continue;
            const double p = glauber_accept(flip_delta(state, v), params.beta);
            order.push_back(v);
            states.push_back(state | (1u << v));
            log_probs.push_back(log_choice + std::log(p));
            dfs(depth + 1);
            order.pop_back();
            states.pop_back();
            log_probs.pop_back();
        }
    }
};

}  // namespace

std::vector<Trajectory> enumerate_tipping_trajectories(const Graph& g, const ModelParams& params,
                                                       int horizon) {
    const int n = g.node_count();
    if (n % 2 != 0)
        throw std::invalid_argument(
            "enumerate_tipping_trajectories: odd node count, the tipping partition <S> = 0.5 is "
            "not representable");
    if (horizon != n / 2)
        throw std::invalid_argument("enumerate_tipping_trajectories: horizon must equal n/2");

    std::vector<Trajectory> trajectories;
    std::size_t count = 1;
    for (int i = 0; i < horizon; ++i) count *= static_cast<std::size_t>(n - i);
    trajectories.reserve(count);

    Enumerator e{g, params, horizon, -std::log(static_cast<double>(n)), &trajectories, {}, {}, {}};
    e.states.push_back(0u);
    e.dfs(0);
    return trajectories;
}

std::vector<Trajectory> max_likelihood_trajectories(const std::vector<Trajectory>& trajectories,
                                                    double rel_tol) {
    if (trajectories.empty())
        throw std::invalid_argument("max_likelihood_trajectories: empty input");
    double best = trajectories.front().log_prob;
    for (const auto& t : trajectories) best = std::max(best, t.log_prob);
    std::vector<Trajectory> argmax;
    const double slack = rel_tol * std::abs(best);
    for (const auto& t : trajectories)
        if (best - t.log_prob <= slack) argmax.push_back(t);
    return argmax;
}

Eigen::MatrixXd flip_expectations(const std::vector<Trajectory>& trajectories, int n,
                                  bool probability_weighted) {
    if (trajectories.empty()) throw std::invalid_argument("flip_expectations: empty input");
    const int levels = static_cast<int>(trajectories.front().states.size());

    Eigen::VectorXd weights(static_cast<Eigen::Index>(trajectories.size()));
    if (probability_weighted) {
        double max_lp = trajectories.front().log_prob;
        for (const auto& t : trajectories) max_lp = std::max(max_lp, t.log_prob);
        for (std::size_t i = 0; i < trajectories.size(); ++i)
            weights[static_cast<Eigen::Index>(i)] = std::exp(trajectories[i].log_prob - max_lp);
    } else {
        weights.setOnes();
    }
    weights /= weights.sum();

    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(n, levels);
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
        const double w = weights[static_cast<Eigen::Index>(i)];
        const auto& states = trajectories[i].states;
        for (int level = 0; level < levels; ++level)
            for (std::uint32_t m = states[static_cast<std::size_t>(level)]; m != 0; m &= m - 1)
                expect(std::countr_zero(m), level) += w;
    }
    return expect;
}

}  // namespace spinflow
