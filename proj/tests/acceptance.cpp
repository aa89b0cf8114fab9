// Acceptance suite: runs the project's top-level numeric criteria and prints
// one PASS/FAIL line per criterion. Usage:
//   spinflow_acceptance        run all criteria
//   spinflow_acceptance <k>    run criterion k only (exit 1 on failure)

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "spinflow/calibration.hpp"
#include "spinflow/features.hpp"
#include "spinflow/graph.hpp"
#include "spinflow/infoflow.hpp"
#include "spinflow/ising.hpp"
#include "spinflow/paths.hpp"
#include "spinflow/sim.hpp"
#include "spinflow/susceptibility.hpp"

using namespace spinflow;

namespace {

// The suite's operating point for the kite experiments. Criteria 1 and 3
// state this value explicitly; criterion 2 checks whether the calibration
// routine reproduces it (it does not; the measured optimum is printed).
constexpr double anchor_beta = 0.534;

struct Outcome {
    bool pass = false;
    std::string detail;
};

ModelParams at_beta(double beta) {
    ModelParams p;
    p.beta = beta;
    return p;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

// Cached kite analysis shared by criteria 6, 7 and 8.
const RoleAnalysis& kite_roles() {
    static const RoleAnalysis analysis = analyze_roles(krackhardt_kite(), at_beta(anchor_beta), 300);
    return analysis;
}

std::vector<double> ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
        const double mean_rank = 0.5 * (i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = mean_rank;
        i = j + 1;
    }
    return rank;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += rx[i], my += ry[i];
    mx /= n, my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------- criteria

Outcome criterion_1() {
    const Graph kite = krackhardt_kite();
    const auto params = at_beta(anchor_beta);
    const auto op = transfer_operator(kite, params);
    const auto pi = boltzmann_distribution(kite, params);

    const Eigen::VectorXd advanced = propagate(op, pi, 1);
    const double fixed_point_err = (advanced - pi).cwiseAbs().maxCoeff();

    double balance_err = 0.0;
    for (Eigen::Index s = 0; s < op.state_count(); ++s) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(op.matrix, s); it;
             ++it) {
            if (it.col() == s) continue;
            // reverse entry: probability of the single flip back
            double reverse = 0.0;
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator rt(op.matrix,
                                                                                it.col());
                 rt; ++rt)
                if (rt.col() == s) reverse = rt.value();
            balance_err = std::max(balance_err, std::abs(pi[s] * it.value() - pi[it.col()] * reverse));
        }
    }
    Outcome out;
    out.pass = fixed_point_err < 1e-10 && balance_err < 1e-12;
    out.detail = "max|pi P - pi| = " + fmt(fixed_point_err) + " (< 1e-10), max detailed-balance error = " +
                 fmt(balance_err) + " (< 1e-12) at beta " + fmt(anchor_beta);
    return out;
}

Outcome criterion_2() {
    const auto result = match_noise(krackhardt_kite(), 0.1, 10.0);
    Outcome out;
    out.pass = result.beta_star >= 0.514 && result.beta_star <= 0.554;
    out.detail = "match_noise(kite) beta* = " + fmt(result.beta_star) + " (T* = " +
                 fmt(result.temperature) + "), required window [0.514, 0.554]";
    return out;
}

Outcome criterion_3() {
    const Graph kite = krackhardt_kite();
    const auto marg = macrostate_marginal(boltzmann_distribution(kite, at_beta(anchor_beta)), 10);
    bool symmetric = true;
    for (int k = 0; k <= 10; ++k)
        symmetric = symmetric && std::abs(marg[k] - marg[10 - k]) < 1e-12;
    // bimodal: strictly decreasing from the mode at 0 down to the valley at 5
    bool valley = true;
    for (int k = 0; k < 5; ++k) valley = valley && marg[k] > marg[k + 1];
    Outcome out;
    out.pass = symmetric && valley && marg[0] > marg[5];
    out.detail = "modes p(0) = p(1.0) = " + fmt(marg[0]) + ", valley p(0.5) = " + fmt(marg[5]) +
                 ", symmetric about 0.5: " + (symmetric ? "yes" : "no");
    return out;
}

Outcome criterion_4() {
    const auto trajectories =
        enumerate_tipping_trajectories(krackhardt_kite(), at_beta(anchor_beta), 5);
    const auto argmax = max_likelihood_trajectories(trajectories);
    Outcome out;
    out.pass = trajectories.size() == 30240 && argmax.size() == 10;
    out.detail = "trajectory count = " + std::to_string(trajectories.size()) +
                 " (expected 30240), co-maximal count = " + std::to_string(argmax.size()) +
                 " (expected exactly 10; the exact tie set of the transfer-operator log-likelihood "
                 "has 12 members)";
    return out;
}

Outcome criterion_5() {
    const double beta = 0.8;
    double worst = 0.0;
    long comparisons = 0;

    auto check_graph = [&](const oracle::Edges& edges, int n) {
        const Graph g(n, edges);
        const auto params = at_beta(beta);
        const auto pi = oracle::boltzmann(edges, n, beta);
        const std::size_t m = std::size_t{1} << n;
        for (int t = 0; t <= 5; ++t) {
            // oracle: evolve every state once per lag, then assemble each MI
            std::vector<std::vector<double>> evolved(m);
            for (std::size_t s = 0; s < m; ++s)
                evolved[s] = oracle::evolve_pathsum(static_cast<std::uint32_t>(s), n, edges, beta, t);
            for (int k = 0; k <= n; ++k) {
                for (int node = 0; node < n; ++node) {
                    double w0 = 0.0, w1 = 0.0;
                    std::vector<double> d0(m, 0.0), d1(m, 0.0);
                    for (std::size_t s = 0; s < m; ++s) {
                        if (std::popcount(static_cast<std::uint32_t>(s)) != k) continue;
                        if ((s >> node) & 1u)
                            w1 += pi[s];
                        else
                            w0 += pi[s];
                    }
                    double expected = 0.0;
                    if (w0 > 0.0 && w1 > 0.0) {
                        for (std::size_t s = 0; s < m; ++s) {
                            if (std::popcount(static_cast<std::uint32_t>(s)) != k) continue;
                            const bool one = (s >> node) & 1u;
                            const double w = pi[s] / (one ? w1 : w0);
                            auto& dst = one ? d1 : d0;
                            for (std::size_t x = 0; x < m; ++x) dst[x] += w * evolved[s][x];
                        }
                        const double tot = w0 + w1;
                        std::vector<double> mix(m);
                        for (std::size_t x = 0; x < m; ++x)
                            mix[x] = (w0 / tot) * d0[x] + (w1 / tot) * d1[x];
                        expected = oracle::entropy(mix) - (w0 / tot) * oracle::entropy(d0) -
                                   (w1 / tot) * oracle::entropy(d1);
                        if (expected < 0.0) expected = 0.0;
                    }
                    const double ours = lagged_mi(g, params, node, static_cast<double>(k) / n, t);
                    worst = std::max(worst, std::abs(ours - expected));
                    ++comparisons;
                }
            }
        }
    };

    for (int n = 1; n <= 4; ++n)
        for (const auto& edges : oracle::all_connected_graphs(n)) check_graph(edges, n);
    check_graph(path_graph(5).edges(), 5);

    Outcome out;
    out.pass = worst < 1e-12;
    out.detail = std::to_string(comparisons) + " (graph, node, gamma, lag) comparisons, max |diff| = " +
                 fmt(worst) + " (< 1e-12)";
    return out;
}

Outcome criterion_6() {
    const auto& analysis = kite_roles();
    double worst_slack = 0.0;
    double max_value = 0.0;
    bool in_range = true;
    for (const auto& curve : analysis.curves) {
        for (int t = 0; t <= curve.t_max(); ++t) {
            const double v = curve.values[t];
            in_range = in_range && v >= 0.0 && v <= 1.0 + 1e-12;
            max_value = std::max(max_value, v);
            if (t > 0) worst_slack = std::max(worst_slack, v - curve.values[t - 1]);
        }
    }
    Outcome out;
    out.pass = in_range && worst_slack <= 1e-10;
    out.detail = "110 curves, t <= 300: worst DPI violation = " + fmt(worst_slack) +
                 " (<= 1e-10), values in [0, " + fmt(max_value) + "] bits";
    return out;
}

Outcome criterion_7() {
    const auto& table = kite_roles().table;
    const int n = 10;

    // (a) at the farthest nondegenerate partition below the tipping point the
    // degree-1 tail node carries the most integrated information
    Eigen::Index mu_best = 0;
    table.mu.col(1).maxCoeff(&mu_best);
    const bool tail_leads = mu_best == 9;

    // (b) per node, omega peaks at or adjacent to gamma = 0.5
    bool omega_at_tipping = true;
    for (int i = 0; i < n; ++i) {
        Eigen::Index k_best = 0;
        table.omega.row(i).maxCoeff(&k_best);
        omega_at_tipping = omega_at_tipping && std::abs(static_cast<int>(k_best) - 5) <= 1;
    }

    // (c) nodes 3 and 8 are among the top-3 by omega at gamma = 0.5
    std::vector<std::pair<double, int>> by_omega;
    for (int i = 0; i < n; ++i) by_omega.emplace_back(table.omega(i, 5), i);
    std::sort(by_omega.rbegin(), by_omega.rend());
    const bool top3 = (by_omega[0].second == 3 || by_omega[1].second == 3 || by_omega[2].second == 3) &&
                      (by_omega[0].second == 8 || by_omega[1].second == 8 || by_omega[2].second == 8);

    Outcome out;
    out.pass = tail_leads && omega_at_tipping && top3;
    out.detail = "(a) argmax mu at gamma 0.1 = node " + std::to_string(mu_best) +
                 " (want 9); (b) omega argmax within one step of 0.5 for all nodes: " +
                 (omega_at_tipping ? "yes" : "no") + "; (c) omega top-3 at gamma 0.5 = {" +
                 std::to_string(by_omega[0].second) + "," + std::to_string(by_omega[1].second) +
                 "," + std::to_string(by_omega[2].second) + "} (want 3 and 8 present)";
    return out;
}

double intervention_spearman(double beta, const std::vector<double>& role, std::uint64_t steps,
                              std::string& info) {
    const std::vector<Graph> graphs{krackhardt_kite()};
    const auto cells = intervention_sweep(graphs, at_beta(beta), default_intervention_seeds(),
                                          steps);
    std::vector<double> rel(10, 0.0);
    long control_total = 0;
    {
        std::vector<long> pinned_total(10, 0);
        std::vector<bool> counted_control(default_intervention_seeds().size(), false);
        for (const auto& cell : cells) {
            pinned_total[static_cast<std::size_t>(cell.pinned_node)] += cell.transitions;
            if (cell.pinned_node == 0) control_total += cell.transitions_control;
        }
        for (int i = 0; i < 10; ++i)
            rel[static_cast<std::size_t>(i)] =
                static_cast<double>(pinned_total[static_cast<std::size_t>(i)]) /
                std::max<long>(control_total, 1);
    }
    info = "control transitions (6 seeds) = " + std::to_string(control_total);
    return spearman(role, rel);
}

Outcome criterion_8() {
    const auto& table = kite_roles().table;
    std::string info;
    const double rho = intervention_spearman(anchor_beta, table.role, 1'000'000, info);
    Outcome out;
    out.pass = rho > 0.0;
    out.detail = "Spearman(role, relative transitions) = " + fmt(rho) + " at beta " +
                 fmt(anchor_beta) + " (" + info + "); required > 0";

    // Supplementary, non-gating replication in the rare-transition regime
    // (2x the anchor beta, paper-scale 1e7 steps).
    const auto deep = analyze_roles(krackhardt_kite(), at_beta(2 * anchor_beta), 300);
    std::string deep_info;
    const double deep_rho =
        intervention_spearman(2 * anchor_beta, deep.table.role, 10'000'000, deep_info);
    out.detail += "; supplementary replication at beta " + fmt(2 * anchor_beta) +
                  ", 1e7 steps: Spearman = " + fmt(deep_rho) + " (" + deep_info + ")";
    return out;
}

Outcome criterion_9() {
    bool strict = true;
    double worst_gap = 1.0;
    for (double f : {0.6, 0.7, 0.8, 0.9}) {
        for (int k = 1; k < 8; ++k) {
            const double gap =
                flip_susceptibility(k, f, 0.5) - flip_susceptibility(k + 1, f, 0.5);
            strict = strict && gap > 0.0;
            worst_gap = std::min(worst_gap, gap);
        }
    }
    Outcome out;
    out.pass = strict;
    out.detail = "strictly decreasing in k = 1..8 for f in {0.6, 0.7, 0.8, 0.9} at beta 0.5 "
                 "(smallest decrement " +
                 fmt(worst_gap) + ")";
    return out;
}

Outcome criterion_10() {
    const Graph kite = krackhardt_kite();
    Eigen::VectorXd pooled = Eigen::VectorXd::Zero(11);
    for (std::uint64_t seed : default_intervention_seeds()) {
        SimConfig cfg;
        cfg.graph = kite;
        cfg.params = at_beta(anchor_beta);
        cfg.steps = 1'000'000;
        cfg.seed = seed;
        const auto result = simulate(cfg);
        for (auto p : result.popcounts) pooled[p] += 1.0;
    }
    pooled /= pooled.sum();
    const auto exact = macrostate_marginal(boltzmann_distribution(kite, at_beta(anchor_beta)), 10);
    const double tv = 0.5 * (pooled - exact).cwiseAbs().sum();
    Outcome out;
    out.pass = tv < 0.05;
    out.detail = "pooled 6-seed histogram vs exact macrostate marginal: TV = " + fmt(tv) +
                 " (< 0.05) at beta " + fmt(anchor_beta);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
        {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4},
        {5, criterion_5}, {6, criterion_6}, {7, criterion_7}, {8, criterion_8},
        {9, criterion_9}, {10, criterion_10},
    };

    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > 10) {
            std::fprintf(stderr, "usage: %s [criterion 1..10]\n", argv[0]);
            return 2;
        }
    }

    int failures = 0;
    for (const auto& [id, fn] : criteria) {
        if (only != 0 && id != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = fn();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %2d: %s (%.2f s)\n", outcome.pass ? "PASS" : "FAIL", id,
                    outcome.detail.c_str(), secs);
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    }
    if (only == 0)
        std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                    criteria.size());
    return failures == 0 ? 0 : 1;
}
