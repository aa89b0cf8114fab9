#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinflow/graph.hpp"
#include "spinflow/ising.hpp"

namespace spinflow {

struct SimConfig {
    Graph graph;
    ModelParams params;
    std::uint64_t steps = 1'000'000;  // attempted flips
    std::uint64_t seed = 0;
    std::optional<int> pinned_node;   // proposals on this node are discarded
    int pinned_state = 0;             // display state the pin holds
    std::uint64_t record_stride = 1;  // macrostate subsampling interval

    enum class Start { AllZeros, AllOnes, Uniform };
    Start start = Start::AllZeros;
};

struct NoiseMetric {
    std::optional<double> below;  // absent when a side has no samples
    std::optional<double> above;
};

struct TrajectoryStats {
    NoiseMetric eta;
    double frac_time_below = 0.0;  // fraction of recorded steps with <S> < 0.5
    long transitions = 0;
    SpinConfiguration final_state = 0;
};

struct SimResult {
    std::vector<std::uint8_t> popcounts;  // recorded macrostate * n
    TrajectoryStats stats;
};

/// Seeded single-flip Glauber Monte Carlo; one time step = one attempted
/// flip of a uniformly chosen node. Bit-reproducible for a fixed config.
SimResult simulate(const SimConfig& cfg);

/// Range-normalized second moment per side of the tipping point. The
/// deviation is <S> below and 1 - <S> above; alpha is the side's maximum
/// attainable |<S> - 0.5| under the active intervention (0.5 per side for
/// control, (n-1)/n - 0.5 above when a node is pinned to 0). Samples at
/// exactly 0.5 belong to neither side.
NoiseMetric noise_metric(const std::vector<std::uint8_t>& popcounts, int n, bool pinned_to_zero);

/// Counts settled basin changes: a transition is scored each time the
/// trajectory, having last settled at <S> <= settle_lo or >= settle_hi,
/// next settles in the opposite basin.
long count_transitions(const std::vector<std::uint8_t>& popcounts, int n, double settle_lo = 0.25,
                       double settle_hi = 0.75);

/// One pinned run relative to the control run of the same (graph, seed):
/// eta as ratios, time-below as a difference, transition counts raw.
struct SweepCell {
    int graph_index = 0;
    int pinned_node = 0;
    std::uint64_t seed = 0;
    std::optional<double> eta_below_rel;
    std::optional<double> eta_above_rel;
    double frac_time_below_rel = 0.0;
    long transitions = 0;
    long transitions_control = 0;
    std::optional<std::string> error;  // per-cell failure, sweep continues
};

/// The six seeds used for intervention experiments.
const std::vector<std::uint64_t>& default_intervention_seeds();

/// For every graph and seed: one control run plus one run per pinned node
/// (pinned to 0). Cells run concurrently; each owns a private RNG stream
/// derived from (seed, graph index, node index), so results are independent
/// of scheduling. Output is ordered by (graph, node, seed).
std::vector<SweepCell> intervention_sweep(const std::vector<Graph>& graphs,
                                          const ModelParams& params,
                                          std::vector<std::uint64_t> seeds, std::uint64_t steps,
                                          int workers = 0);

}  // namespace spinflow
