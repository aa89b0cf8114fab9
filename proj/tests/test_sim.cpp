#include <doctest.h>

#include <algorithm>

#include "spinflow/graph.hpp"
#include "spinflow/sim.hpp"

using namespace spinflow;

namespace {
SimConfig kite_config(double beta, std::uint64_t steps, std::uint64_t seed) {
    SimConfig cfg;
    cfg.graph = krackhardt_kite();
    cfg.params.beta = beta;
    cfg.steps = steps;
    cfg.seed = seed;
    return cfg;
}

std::vector<std::uint8_t> pops(std::initializer_list<double> fractions, int n) {
    std::vector<std::uint8_t> out;
    for (double f : fractions) out.push_back(static_cast<std::uint8_t>(f * n + 0.5));
    return out;
}
}  // namespace

TEST_CASE("simulation is bit-reproducible") {
    const auto a = simulate(kite_config(0.534, 50000, 987));
    const auto b = simulate(kite_config(0.534, 50000, 987));
    CHECK(a.popcounts == b.popcounts);
    CHECK(a.stats.final_state == b.stats.final_state);
    CHECK(a.stats.transitions == b.stats.transitions);

    const auto c = simulate(kite_config(0.534, 50000, 988));
    CHECK(a.popcounts != c.popcounts);
}

TEST_CASE("frozen dynamics stay near the start attractor") {
    const auto result = simulate(kite_config(50.0, 200000, 3));
    for (auto p : result.popcounts) CHECK(p < 1);  // not a single uphill flip sticks
    CHECK(result.stats.frac_time_below == doctest::Approx(1.0));
    CHECK(result.stats.transitions == 0);
}

TEST_CASE("pinning holds the pinned node at its state") {
    auto cfg = kite_config(0.3, 100000, 5);
    cfg.pinned_node = 4;
    cfg.pinned_state = 0;
    cfg.start = SimConfig::Start::AllOnes;  // the pin must override the start
    const auto result = simulate(cfg);
    CHECK(((result.stats.final_state >> 4) & 1u) == 0u);
    for (auto p : result.popcounts) CHECK(p <= 9);  // macrostate never exceeds (n-1)/n
}

TEST_CASE("record stride subsamples the trajectory") {
    auto cfg = kite_config(0.534, 1000, 7);
    cfg.record_stride = 10;
    const auto result = simulate(cfg);
    CHECK(result.popcounts.size() == 100);
}

TEST_CASE("noise metric formula and conventions") {
    // constant at the lower attractor
    const auto zero = noise_metric(pops({0.0, 0.0, 0.0}, 10), 10, false);
    CHECK(zero.below.has_value());
    CHECK(*zero.below == doctest::Approx(0.0));
    CHECK_FALSE(zero.above.has_value());

    // constant at 0.3 under control: (0.3/0.5)^2
    const auto third = noise_metric(pops({0.3, 0.3}, 10), 10, false);
    CHECK(*third.below == doctest::Approx(0.36));

    // samples exactly at the tipping point belong to neither side
    const auto mixed = noise_metric(pops({0.5, 0.5, 0.3}, 10), 10, false);
    CHECK(*mixed.below == doctest::Approx(0.36));
    CHECK_FALSE(mixed.above.has_value());

    // pinned-to-zero shrinks the above-side range to (n-1)/n - 0.5
    const auto above = noise_metric(pops({0.7}, 10), 10, false);
    CHECK(*above.above == doctest::Approx((0.3 * 0.3) / 0.25));
    const auto pinned = noise_metric(pops({0.7}, 10), 10, true);
    CHECK(*pinned.above == doctest::Approx((0.3 * 0.3) / (0.4 * 0.4)));
}

TEST_CASE("noise metric is side-symmetric on long control runs") {
    auto cfg = kite_config(0.534, 2'000'000, 2024);
    const auto result = simulate(cfg);
    REQUIRE(result.stats.eta.below.has_value());
    REQUIRE(result.stats.eta.above.has_value());
    const double lo = *result.stats.eta.below;
    const double hi = *result.stats.eta.above;
    CHECK(std::abs(lo - hi) / std::max(lo, hi) < 0.10);
}

TEST_CASE("transition counting uses settle thresholds") {
    CHECK(count_transitions(pops({0.1, 0.5, 0.9}, 10), 10) == 1);
    CHECK(count_transitions(pops({0.1, 0.45, 0.1}, 10), 10) == 0);
    CHECK(count_transitions(pops({0.1, 0.9, 0.1, 0.9}, 10), 10) == 3);
    CHECK(count_transitions(pops({0.4, 0.6, 0.4}, 10), 10) == 0);  // never settles
    CHECK_THROWS_AS(count_transitions(pops({0.1}, 10), 10, 0.6, 0.8), std::invalid_argument);
}

TEST_CASE("simulate validates its configuration") {
    auto cfg = kite_config(0.5, 10, 1);
    cfg.pinned_node = 99;
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
    cfg = kite_config(0.5, 0, 1);
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
    cfg = kite_config(-1.0, 10, 1);
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
}

TEST_CASE("intervention sweep layout, determinism, and pins") {
    const std::vector<Graph> graphs{path_graph(4)};
    ModelParams params;
    params.beta = 0.6;
    const std::vector<std::uint64_t> seeds{1, 2};
    const auto cells = intervention_sweep(graphs, params, seeds, 20000, 2);
    REQUIRE(cells.size() == 4 * 2);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& cell = cells[i];
        CHECK(cell.graph_index == 0);
        CHECK(cell.pinned_node == static_cast<int>(i / 2));
        CHECK(cell.seed == seeds[i % 2]);
        CHECK_FALSE(cell.error.has_value());
        CHECK(cell.transitions >= 0);
        CHECK(cell.transitions_control >= 0);
    }
    // schedule independence: same cells with a different worker count
    const auto serial = intervention_sweep(graphs, params, seeds, 20000, 1);
    REQUIRE(serial.size() == cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(serial[i].transitions == cells[i].transitions);
        CHECK(serial[i].frac_time_below_rel == doctest::Approx(cells[i].frac_time_below_rel));
    }
}

TEST_CASE("default intervention seeds") {
    CHECK(default_intervention_seeds() ==
          std::vector<std::uint64_t>{0, 12, 123, 1234, 123456, 1234567});
}
