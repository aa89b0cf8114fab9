#include "spinflow/sim.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "spinflow/parallel.hpp"
#include "spinflow/rng.hpp"

namespace spinflow {

namespace {

void validate(const SimConfig& cfg) {
    const int n = cfg.graph.node_count();
    if (n < 1) throw std::invalid_argument("simulate: empty graph");
    if (cfg.steps < 1) throw std::invalid_argument("simulate: steps must be >= 1");
    if (cfg.record_stride < 1) throw std::invalid_argument("simulate: record_stride must be >= 1");
    if (cfg.pinned_node && (*cfg.pinned_node < 0 || *cfg.pinned_node >= n))
        throw std::invalid_argument("simulate: pinned node out of range");
    if (cfg.pinned_state != 0 && cfg.pinned_state != 1)
        throw std::invalid_argument("simulate: pinned state must be 0 or 1");
    if (cfg.params.beta < 0) throw std::invalid_argument("simulate: beta must be >= 0");
    if (cfg.params.field.size() != 0 && cfg.params.field.size() != n)
        throw std::invalid_argument("simulate: field must be empty or length n");
}

}  // namespace

SimResult simulate(const SimConfig& cfg) {
    validate(cfg);
    const int n = cfg.graph.node_count();
    const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1u);
    SplitMix64 rng(cfg.seed);

    std::uint32_t state = 0;
    switch (cfg.start) {
        case SimConfig::Start::AllZeros: state = 0; break;
        case SimConfig::Start::AllOnes: state = full; break;
        case SimConfig::Start::Uniform: state = static_cast<std::uint32_t>(rng.next()) & full; break;
    }
    const int pinned = cfg.pinned_node.value_or(-1);
    if (pinned >= 0) {
        if (cfg.pinned_state == 0)
            state &= ~(1u << pinned);
        else
            state |= 1u << pinned;
    }

    std::vector<std::uint32_t> neighbor(static_cast<std::size_t>(n));
    std::vector<int> degree(static_cast<std::size_t>(n));
    std::vector<double> field(static_cast<std::size_t>(n), 0.0);
    for (int v = 0; v < n; ++v) {
        neighbor[static_cast<std::size_t>(v)] = cfg.graph.neighbors(v);
        degree[static_cast<std::size_t>(v)] = cfg.graph.degree(v);
        if (cfg.params.field.size() != 0) field[static_cast<std::size_t>(v)] = cfg.params.field[v];
    }
    const double beta = cfg.params.beta;
    const double coupling = cfg.params.coupling;

    SimResult result;
    result.popcounts.reserve(static_cast<std::size_t>(cfg.steps / cfg.record_stride));
    int pc = std::popcount(state);
    for (std::uint64_t t = 0; t < cfg.steps; ++t) {
        const int node = static_cast<int>(rng.below(static_cast<std::uint32_t>(n)));
        const double u = rng.uniform();
        if (node != pinned) {
            const auto sv = static_cast<std::size_t>(node);
            const int up = std::popcount(neighbor[sv] & state);
            const double sigma = (state >> node) & 1u ? 1.0 : -1.0;
            const double local = coupling * (2 * up - degree[sv]) + field[sv];
            const double delta_e = 2.0 * sigma * local;
            if (u < 1.0 / (1.0 + std::exp(beta * delta_e))) {
                state ^= 1u << node;
                pc += sigma > 0 ? -1 : 1;
            }
        }
        if ((t + 1) % cfg.record_stride == 0)
            result.popcounts.push_back(static_cast<std::uint8_t>(pc));
    }

    result.stats.eta = noise_metric(result.popcounts, n, pinned >= 0 && cfg.pinned_state == 0);
    long below = 0;
    for (auto p : result.popcounts)
        if (2 * static_cast<int>(p) < n) ++below;
    result.stats.frac_time_below =
        result.popcounts.empty() ? 0.0 : static_cast<double>(below) / result.popcounts.size();
    result.stats.transitions = count_transitions(result.popcounts, n);
    result.stats.final_state = state;
    return result;
}

NoiseMetric noise_metric(const std::vector<std::uint8_t>& popcounts, int n, bool pinned_to_zero) {
    if (popcounts.empty()) throw std::invalid_argument("noise_metric: empty trajectory");
    const double alpha_below = 0.5;
    const double alpha_above = pinned_to_zero ? (static_cast<double>(n - 1) / n - 0.5) : 0.5;
    double sum_below = 0.0, sum_above = 0.0;
    std::size_t n_below = 0, n_above = 0;
    for (auto p : popcounts) {
        const int twice = 2 * static_cast<int>(p);
        if (twice == n) continue;  // exactly at the tipping point: neither side
        const double f = static_cast<double>(p) / n;
        if (twice < n) {
            sum_below += f * f;
            ++n_below;
        } else {
            const double dev = 1.0 - f;
            sum_above += dev * dev;
            ++n_above;
        }
    }
    NoiseMetric eta;
    if (n_below > 0) eta.below = sum_below / (static_cast<double>(n_below) * alpha_below * alpha_below);
    if (n_above > 0) eta.above = sum_above / (static_cast<double>(n_above) * alpha_above * alpha_above);
    return eta;
}

long count_transitions(const std::vector<std::uint8_t>& popcounts, int n, double settle_lo,
                       double settle_hi) {
    if (!(settle_lo < 0.5 && 0.5 < settle_hi))
        throw std::invalid_argument("count_transitions: need settle_lo < 0.5 < settle_hi");
    long count = 0;
    int side = 0;  // 0 unsettled, -1 below, +1 above
    for (auto p : popcounts) {
        const double f = static_cast<double>(p) / n;
        if (f <= settle_lo) {
            if (side == 1) ++count;
            side = -1;
        } else if (f >= settle_hi) {
            if (side == -1) ++count;
            side = 1;
        }
    }
    return count;
}

const std::vector<std::uint64_t>& default_intervention_seeds() {
    static const std::vector<std::uint64_t> seeds = {0, 12, 123, 1234, 123456, 1234567};
    return seeds;
}

std::vector<SweepCell> intervention_sweep(const std::vector<Graph>& graphs,
                                          const ModelParams& params,
                                          std::vector<std::uint64_t> seeds, std::uint64_t steps,
                                          int workers) {
    if (seeds.empty()) seeds = default_intervention_seeds();
    if (graphs.empty()) throw std::invalid_argument("intervention_sweep: no graphs");

    // task = (graph, seed): one control run plus one pinned run per node
    struct Task {
        int graph_index;
        std::size_t seed_index;
    };
    std::vector<Task> tasks;
    for (int gi = 0; gi < static_cast<int>(graphs.size()); ++gi)
        for (std::size_t si = 0; si < seeds.size(); ++si) tasks.push_back({gi, si});

    // results[graph][node][seed]
    const std::size_t n_seeds = seeds.size();
    std::vector<std::vector<SweepCell>> per_task(tasks.size());

    parallel_for_index(tasks.size(), workers, [&](std::size_t ti) {
        const auto [gi, si] = tasks[ti];
        const Graph& graph = graphs[static_cast<std::size_t>(gi)];
        const std::uint64_t seed = seeds[si];
        const int n = graph.node_count();

        auto cell_seed = [&](int node) {
            // private stream per (seed, graph, node); node -1 is the control
            return mix_seed(mix_seed(seed, static_cast<std::uint64_t>(gi) + 1),
                            static_cast<std::uint64_t>(node + 2));
        };
        SimConfig base;
        base.graph = graph;
        base.params = params;
        base.steps = steps;

        SimConfig control_cfg = base;
        control_cfg.seed = cell_seed(-1);
        std::optional<TrajectoryStats> control;
        std::string control_error;
        try {
            control = simulate(control_cfg).stats;
        } catch (const std::exception& e) {
            control_error = e.what();
        }

        auto& rows = per_task[ti];
        rows.reserve(static_cast<std::size_t>(n));
        for (int node = 0; node < n; ++node) {
            SweepCell cell;
            cell.graph_index = gi;
            cell.pinned_node = node;
            cell.seed = seed;
            if (!control) {
                cell.error = "control run failed: " + control_error;
                rows.push_back(cell);
                continue;
            }
            SimConfig cfg = base;
            cfg.seed = cell_seed(node);
            cfg.pinned_node = node;
            cfg.pinned_state = 0;
            try {
                const auto stats = simulate(cfg).stats;
                if (stats.eta.below && control->eta.below && *control->eta.below > 0.0)
                    cell.eta_below_rel = *stats.eta.below / *control->eta.below;
                if (stats.eta.above && control->eta.above && *control->eta.above > 0.0)
                    cell.eta_above_rel = *stats.eta.above / *control->eta.above;
                cell.frac_time_below_rel = stats.frac_time_below - control->frac_time_below;
                cell.transitions = stats.transitions;
                cell.transitions_control = control->transitions;
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            rows.push_back(cell);
        }
    });

    // merge ordered by (graph, node, seed)
    std::vector<SweepCell> cells;
    cells.reserve(tasks.size() * static_cast<std::size_t>(graphs.front().node_count()));
    for (int gi = 0; gi < static_cast<int>(graphs.size()); ++gi) {
        const int n = graphs[static_cast<std::size_t>(gi)].node_count();
        for (int node = 0; node < n; ++node)
            for (std::size_t si = 0; si < n_seeds; ++si) {
                const std::size_t ti = static_cast<std::size_t>(gi) * n_seeds + si;
                cells.push_back(per_task[ti][static_cast<std::size_t>(node)]);
            }
    }
    return cells;
}

}  // namespace spinflow
