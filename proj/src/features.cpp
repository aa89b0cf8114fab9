#include "spinflow/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "spinflow/parallel.hpp"

namespace spinflow {

namespace {

constexpr double rate_floor = 1e-4;  // slower decay is indistinguishable from the offset
constexpr double rate_ceil = 10.0;

// Nonnegative least squares for y ~ a e^{-b t} + c e^{-d t} + omega at fixed
// rates: with only three unknowns, trying every active set is exact.
struct AmplitudeFit {
    double a = 0.0, c = 0.0, omega = 0.0;
    double ssr = std::numeric_limits<double>::infinity();
};

AmplitudeFit solve_amplitudes(const Eigen::VectorXd& y, const Eigen::VectorXd& eb,
                              const Eigen::VectorXd& ed) {
    const Eigen::Index m = y.size();
    Eigen::MatrixXd design(m, 3);
    design.col(0) = eb;
    design.col(1) = ed;
    design.col(2) = Eigen::VectorXd::Ones(m);

    AmplitudeFit best;
    for (int mask = 0; mask < 8; ++mask) {
        std::vector<int> free_cols;
        for (int c = 0; c < 3; ++c)
            if (mask & (1 << c)) free_cols.push_back(c);
        Eigen::Vector3d coef = Eigen::Vector3d::Zero();
        if (!free_cols.empty()) {
            Eigen::MatrixXd sub(m, static_cast<Eigen::Index>(free_cols.size()));
            for (std::size_t i = 0; i < free_cols.size(); ++i)
                sub.col(static_cast<Eigen::Index>(i)) = design.col(free_cols[i]);
            Eigen::VectorXd sol =
                (sub.transpose() * sub)
                    .ldlt()
                    .solve(sub.transpose() * y);
            bool feasible = true;
            for (Eigen::Index i = 0; i < sol.size(); ++i)
                if (!(sol[i] >= 0.0) || !std::isfinite(sol[i])) feasible = false;
            if (!feasible) continue;
            for (std::size_t i = 0; i < free_cols.size(); ++i) coef[free_cols[i]] = sol[static_cast<Eigen::Index>(i)];
        }
        const double ssr = (design * coef - y).squaredNorm();
        if (ssr < best.ssr) {
            best.a = coef[0];
            best.c = coef[1];
            best.omega = coef[2];
            best.ssr = ssr;
        }
    }
    return best;
}

Eigen::VectorXd exp_column(Eigen::Index m, double rate) {
    Eigen::VectorXd col(m);
    for (Eigen::Index t = 0; t < m; ++t) col[t] = std::exp(-rate * static_cast<double>(t));
    return col;
}

double ssr_at(const Eigen::VectorXd& y, double b, double d, AmplitudeFit* out = nullptr) {
    auto fit = solve_amplitudes(y, exp_column(y.size(), b), exp_column(y.size(), d));
    if (out) *out = fit;
    return fit.ssr;
}

// Golden-section minimization of f over [lo, hi].
template <typename F>
double golden_min(F&& f, double lo, double hi, double rel_tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while ((hi - lo) > rel_tol * hi) {
        if (f1 > f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        }
    }
    return 0.5 * (lo + hi);
}

struct RatePair {
    double b, d, ssr;
};

DecayFit fit_single(const Eigen::VectorXd& y) {
    // single exponential plus offset over the same rate grid
    double best_rate = rate_floor;
    double best_ssr = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 48; ++i) {
        const double r = rate_floor * std::pow(rate_ceil / rate_floor, i / 47.0);
        const double s = ssr_at(y, r, r);
        if (s < best_ssr) {
            best_ssr = s;
            best_rate = r;
        }
    }
    const double lo = std::max(rate_floor, best_rate / 4.0);
    const double hi = std::min(rate_ceil, best_rate * 4.0);
    const double rate = golden_min([&](double r) { return ssr_at(y, r, r); }, lo, hi, 1e-6);
    AmplitudeFit amp;
    ssr_at(y, rate, rate, &amp);
    DecayFit fit;
    fit.a = amp.a + amp.c;  // both columns coincide
    fit.b = rate;
    fit.omega = amp.omega;
    fit.single_exponential = true;
    fit.residual_rms = std::sqrt(amp.ssr / static_cast<double>(y.size()));
    return fit;
}

}  // namespace

DecayFit fit_decay(const Eigen::VectorXd& y) {
    const Eigen::Index m = y.size();
    if (m < 10) throw std::invalid_argument("fit_decay: need at least 10 points");
    DecayFit fit;
    if (y.cwiseAbs().maxCoeff() == 0.0) return fit;  // all-zero curve

    // seed stage: constrained amplitudes on a log-spaced rate-pair grid
    constexpr int grid = 24;
    std::vector<double> rates(grid);
    for (int i = 0; i < grid; ++i)
        rates[static_cast<std::size_t>(i)] = rate_floor * std::pow(rate_ceil / rate_floor, i / (grid - 1.0));
    std::vector<RatePair> seeds;
    for (int i = 0; i < grid; ++i)
        for (int j = i; j < grid; ++j)
            seeds.push_back({rates[static_cast<std::size_t>(i)], rates[static_cast<std::size_t>(j)],
                             ssr_at(y, rates[static_cast<std::size_t>(i)], rates[static_cast<std::size_t>(j)])});
    std::sort(seeds.begin(), seeds.end(), [](const RatePair& l, const RatePair& r) { return l.ssr < r.ssr; });

    // multi-start refinement: alternating golden section on each rate until
    // the residual stops improving
    RatePair best = seeds.front();
    const std::size_t starts = std::min<std::size_t>(6, seeds.size());
    for (std::size_t s = 0; s < starts; ++s) {
        double b = seeds[s].b, d = seeds[s].d;
        double ssr = seeds[s].ssr;
        for (int round = 0; round < 16; ++round) {
            b = golden_min([&](double r) { return ssr_at(y, r, d); }, std::max(rate_floor, b / 4.0),
                           std::min(rate_ceil, b * 4.0), 1e-7);
            d = golden_min([&](double r) { return ssr_at(y, b, r); }, std::max(rate_floor, d / 4.0),
                           std::min(rate_ceil, d * 4.0), 1e-7);
            const double improved = ssr_at(y, b, d);
            if (improved >= ssr * (1.0 - 1e-10)) {
                ssr = improved;
                break;
            }
            ssr = improved;
        }
        if (ssr < best.ssr) best = {b, d, ssr};
    }

    AmplitudeFit amp;
    ssr_at(y, best.b, best.d, &amp);
    fit.a = amp.a;
    fit.b = best.b;
    fit.c = amp.c;
    fit.d = best.d;
    fit.omega = amp.omega;
    fit.residual_rms = std::sqrt(amp.ssr / static_cast<double>(m));
    if (fit.b < fit.d) {
        std::swap(fit.a, fit.c);
        std::swap(fit.b, fit.d);
    }

    // prefer the single form unless the second exponential buys a real
    // residual improvement; this also covers the rank-deficient b ~ d case
    DecayFit single = fit_single(y);
    const double single_ssr = single.residual_rms * single.residual_rms * static_cast<double>(m);
    const bool collapsed = std::abs(fit.b - fit.d) <= 1e-3 * std::max(fit.b, fit.d);
    if (collapsed || amp.ssr >= single_ssr * (1.0 - 1e-3)) return single;

    if (fit.c <= 1e-12) {
        fit.c = 0.0;
        fit.d = 0.0;
        fit.single_exponential = true;
    }
    if (fit.a <= 1e-12 && fit.c > 0.0) {
        fit.a = fit.c;
        fit.b = fit.d;
        fit.c = 0.0;
        fit.d = 0.0;
        fit.single_exponential = true;
    }
    return fit;
}

DecayFit fit_decay(const InfoCurve& curve) { return fit_decay(curve.values); }

double integrated_mi(const Eigen::VectorXd& values, const DecayFit& fit) {
    double mu = 0.0;
    for (Eigen::Index t = 0; t < values.size(); ++t) {
        const double inc = values[t] - fit.omega;
        if (inc > 0.0) mu += inc;
    }
    const double t_max = static_cast<double>(values.size() - 1);
    if (fit.a > 0.0 && fit.b > 1e-12) mu += fit.a * std::exp(-fit.b * t_max) / fit.b;
    if (fit.c > 0.0 && fit.d > 1e-12) mu += fit.c * std::exp(-fit.d * t_max) / fit.d;
    return mu;
}

double integrated_mi(const InfoCurve& curve, const DecayFit& fit) {
    return integrated_mi(curve.values, fit);
}

RoleTable role_scores(const Eigen::MatrixXd& mu, const Eigen::MatrixXd& omega,
                      const std::vector<double>& gammas) {
    if (mu.rows() != omega.rows() || mu.cols() != omega.cols())
        throw std::invalid_argument("role_scores: matrices must have the same shape");
    if (static_cast<Eigen::Index>(gammas.size()) != mu.cols())
        throw std::invalid_argument("role_scores: gamma labels must match the columns");
    const Eigen::Index n = mu.rows();

    RoleTable table;
    table.gammas = gammas;
    table.mu = mu;
    table.omega = omega;
    table.mu_star.resize(static_cast<std::size_t>(n), 0.0);
    table.omega_star.resize(static_cast<std::size_t>(n), 0.0);
    table.role.resize(static_cast<std::size_t>(n), 0.0);
    table.mu_argmax_gamma.resize(static_cast<std::size_t>(n), 0.0);
    table.omega_argmax_gamma.resize(static_cast<std::size_t>(n), 0.0);

    const double mu_max = mu.maxCoeff();
    const double omega_max = omega.maxCoeff();
    auto row_max = [&gammas](const Eigen::MatrixXd& mat, Eigen::Index i, double global_max,
                             double& argmax_gamma) {
        double best = 0.0;
        Eigen::Index best_j = 0;
        for (Eigen::Index j = 0; j < mat.cols(); ++j) {
            const double v = mat(i, j);
            const bool better =
                v > best ||
                (v == best && std::abs(gammas[static_cast<std::size_t>(j)]) <
                                  std::abs(gammas[static_cast<std::size_t>(best_j)]));
            if (better) {
                best = v;
                best_j = j;
            }
        }
        argmax_gamma = gammas[static_cast<std::size_t>(best_j)];
        return global_max > 0.0 ? best / global_max : 0.0;
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto si = static_cast<std::size_t>(i);
        table.mu_star[si] = row_max(mu, i, mu_max, table.mu_argmax_gamma[si]);
        table.omega_star[si] = row_max(omega, i, omega_max, table.omega_argmax_gamma[si]);
        table.role[si] = table.mu_star[si] - table.omega_star[si];
    }
    return table;
}

RoleAnalysis analyze_roles(const Graph& g, const ModelParams& params, int t_max, int workers) {
    const int n = g.node_count();
    RoleAnalysis analysis;
    analysis.curves = info_curves(g, params, t_max, workers);
    analysis.fits.resize(analysis.curves.size());
    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(n, n + 1);
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n + 1);
    parallel_for_index(analysis.curves.size(), workers, [&](std::size_t idx) {
        analysis.fits[idx] = fit_decay(analysis.curves[idx]);
    });
    for (std::size_t idx = 0; idx < analysis.curves.size(); ++idx) {
        const auto& curve = analysis.curves[idx];
        const auto& fit = analysis.fits[idx];
        const int k = static_cast<int>(std::lround(curve.gamma * n));
        mu(curve.node, k) = integrated_mi(curve, fit);
        omega(curve.node, k) = fit.omega;
        if (curve.values[0] > 0.0 && fit.residual_rms > 0.05 * curve.values[0])
            analysis.fit_warnings.push_back(
                "fit residual " + std::to_string(fit.residual_rms) + " exceeds 5% of I(0) = " +
                std::to_string(curve.values[0]) + " for node " + std::to_string(curve.node) +
                ", gamma " + std::to_string(curve.gamma));
    }
    std::vector<double> gammas(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) gammas[static_cast<std::size_t>(k)] = static_cast<double>(k) / n;
    analysis.table = role_scores(mu, omega, gammas);
    return analysis;
}

}  // namespace spinflow
