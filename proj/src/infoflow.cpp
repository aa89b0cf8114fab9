#include "spinflow/infoflow.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "spinflow/parallel.hpp"

namespace spinflow {

double entropy(const Eigen::VectorXd& dist) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < dist.size(); ++i) {
        const double p = dist[i];
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

Partition partition_at(int n, double gamma) {
    if (n < 1 || n > exactness_cap)
        throw std::invalid_argument("partition_at: node count exceeds the exactness cap");
    const double k_real = gamma * n;
    const int k = static_cast<int>(std::lround(k_real));
    if (k < 0 || k > n || std::abs(k_real - k) > 1e-9)
        throw std::invalid_argument("partition_at: no configuration has popcount gamma*n");
    Partition part;
    part.gamma = static_cast<double>(k) / n;
    part.popcount = k;
    const SpinConfiguration m = static_cast<SpinConfiguration>((std::uint64_t{1} << n) - 1);
    for (SpinConfiguration s = 0;; ++s) {
        if (std::popcount(s) == k) part.members.push_back(s);
        if (s == m) break;
    }
    return part;
}

namespace {

struct ConditionalPair {
    double w0 = 0.0, w1 = 0.0;        // p(s_i = a | partition)
    Eigen::VectorXd d0, d1;           // restricted, renormalized distributions
    bool degenerate = false;          // node state determined by the partition
};

ConditionalPair make_conditionals(const Eigen::VectorXd& pi, const Partition& part, int node) {
    ConditionalPair c;
    const Eigen::Index m = pi.size();
    c.d0 = Eigen::VectorXd::Zero(m);
    c.d1 = Eigen::VectorXd::Zero(m);
    for (SpinConfiguration s : part.members) {
        const double w = pi[s];
        if ((s >> node) & 1u)
            c.d1[s] = w, c.w1 += w;
        else
            c.d0[s] = w, c.w0 += w;
    }
    const double tot = c.w0 + c.w1;
    if (tot <= 0.0 || c.w0 <= 0.0 || c.w1 <= 0.0) {
        c.degenerate = true;
        return c;
    }
    c.d0 /= c.w0;
    c.d1 /= c.w1;
    c.w0 /= tot;
    c.w1 /= tot;
    return c;
}

// I = H(w0 d0 + w1 d1) - w0 H(d0) - w1 H(d1), clamped at 0.
double mutual_information(const ConditionalPair& c) {
    const Eigen::VectorXd mix = c.w0 * c.d0 + c.w1 * c.d1;
    const double value = entropy(mix) - c.w0 * entropy(c.d0) - c.w1 * entropy(c.d1);
    return value > 0.0 ? value : 0.0;
}

void validate(const Graph& g, const ModelParams& params, int node) {
    if (g.node_count() > exactness_cap)
        throw std::invalid_argument("infoflow: node count exceeds the exactness cap");
    if (node < 0 || node >= g.node_count()) throw std::invalid_argument("infoflow: bad node id");
    (void)params;
}

}  // namespace

double lagged_mi(const Graph& g, const ModelParams& params, int node, double gamma, int lag) {
    validate(g, params, node);
    if (lag < 0) throw std::invalid_argument("lagged_mi: lag must be >= 0");
    const auto part = partition_at(g.node_count(), gamma);
    const auto pi = boltzmann_distribution(g, params);
    auto c = make_conditionals(pi, part, node);
    if (c.degenerate) return 0.0;
    const auto op = transfer_operator(g, params);
    c.d0 = propagate(op, std::move(c.d0), lag);
    c.d1 = propagate(op, std::move(c.d1), lag);
    return mutual_information(c);
}

InfoCurve info_curve(const Graph& g, const ModelParams& params, int node, double gamma,
                     int t_max) {
    validate(g, params, node);
    if (t_max < 0) throw std::invalid_argument("info_curve: t_max must be >= 0");
    const auto part = partition_at(g.node_count(), gamma);
    const auto pi = boltzmann_distribution(g, params);
    const auto op = transfer_operator(g, params);

    InfoCurve curve;
    curve.node = node;
    curve.gamma = part.gamma;
    curve.values = Eigen::VectorXd::Zero(t_max + 1);
    auto c = make_conditionals(pi, part, node);
    if (c.degenerate) return curve;
    Eigen::VectorXd scratch(pi.size());
    for (int t = 0;; ++t) {
        curve.values[t] = mutual_information(c);
        if (t == t_max) break;
        propagate_step(op, c.d0, scratch);
        c.d0.swap(scratch);
        propagate_step(op, c.d1, scratch);
        c.d1.swap(scratch);
    }
    return curve;
}

std::vector<InfoCurve> info_curves(const Graph& g, const ModelParams& params, int t_max,
                                   int workers) {
    const int n = g.node_count();
    validate(g, params, 0);
    if (t_max < 0) throw std::invalid_argument("info_curves: t_max must be >= 0");
    const auto pi = boltzmann_distribution(g, params);
    const auto op = transfer_operator(g, params);

    std::vector<InfoCurve> curves(static_cast<std::size_t>(n) * (static_cast<std::size_t>(n) + 1));
    // one task per partition; conditionals of every node advance in lock-step
    parallel_for_index(static_cast<std::size_t>(n) + 1, workers, [&](std::size_t ki) {
        const int k = static_cast<int>(ki);
        const auto part = partition_at(n, static_cast<double>(k) / n);
        std::vector<ConditionalPair> cond;
        cond.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) cond.push_back(make_conditionals(pi, part, i));
        Eigen::VectorXd scratch(pi.size());
        for (int t = 0;; ++t) {
            for (int i = 0; i < n; ++i) {
                auto& curve = curves[ki * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
                if (t == 0) {
                    curve.node = i;
                    curve.gamma = part.gamma;
                    curve.values = Eigen::VectorXd::Zero(t_max + 1);
                }
                if (!cond[static_cast<std::size_t>(i)].degenerate)
                    curve.values[t] = mutual_information(cond[static_cast<std::size_t>(i)]);
            }
            if (t == t_max) break;
            for (auto& c : cond) {
                if (c.degenerate) continue;
                propagate_step(op, c.d0, scratch);
                c.d0.swap(scratch);
                propagate_step(op, c.d1, scratch);
                c.d1.swap(scratch);
            }
        }
    });
    return curves;
}

}  // namespace spinflow
