#include "spinflow/calibration.hpp"

#include <cmath>
#include <stdexcept>

#include "spinflow/ising.hpp"

namespace spinflow {

ComplexityReport statistical_complexity(const Eigen::VectorXd& dist) {
    const Eigen::Index m = dist.size();
    if (m < 2) throw std::invalid_argument("statistical_complexity: need >= 2 states");
    double h = 0.0;
    double d = 0.0;
    const double uniform = 1.0 / static_cast<double>(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double p = dist[i];
        if (p > 0.0) h -= p * std::log2(p);
        const double dev = p - uniform;
        d += dev * dev;
    }
    ComplexityReport rep;
    rep.entropy_normalized = h / std::log2(static_cast<double>(m));
    rep.disequilibrium = d;
    rep.complexity = rep.entropy_normalized * rep.disequilibrium;
    return rep;
}

namespace {

ComplexityReport complexity_at(const Graph& g, double temperature) {
    ModelParams params;
    params.beta = 1.0 / temperature;
    auto rep = statistical_complexity(boltzmann_distribution(g, params));
    rep.temperature = temperature;
    rep.beta = params.beta;
    return rep;
}

}  // namespace

CalibrationResult match_noise(const Graph& g, double t_min, double t_max, double t_tol,
                              int grid_points) {
    if (!(t_min > 0.0 && t_min < t_max))
        throw std::invalid_argument("match_noise: need 0 < t_min < t_max");
    if (grid_points < 3) throw std::invalid_argument("match_noise: need >= 3 grid points");

    CalibrationResult result;
    result.curve.reserve(static_cast<std::size_t>(grid_points));
    int best = 0;
    for (int i = 0; i < grid_points; ++i) {
        const double t = t_min + (t_max - t_min) * i / (grid_points - 1);
        result.curve.push_back(complexity_at(g, t));
        if (result.curve[static_cast<std::size_t>(i)].complexity >
            result.curve[static_cast<std::size_t>(best)].complexity)
            best = i;
    }
    const double c_lo = result.curve.front().complexity;
    const double c_hi = result.curve.back().complexity;
    const double c_best = result.curve[static_cast<std::size_t>(best)].complexity;
    if (std::abs(c_best - c_lo) < 1e-15 && std::abs(c_best - c_hi) < 1e-15)
        throw std::runtime_error("match_noise: complexity is numerically flat across the bracket");

    // golden-section refinement inside the grid bracket around the best point
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = result.curve[static_cast<std::size_t>(std::max(0, best - 1))].temperature;
    double hi = result.curve[static_cast<std::size_t>(std::min(grid_points - 1, best + 1))].temperature;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = complexity_at(g, x1).complexity;
    double f2 = complexity_at(g, x2).complexity;
    while (hi - lo > t_tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = complexity_at(g, x2).complexity;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = complexity_at(g, x1).complexity;
        }
    }
    const double t_star = 0.5 * (lo + hi);
    result.at_optimum = complexity_at(g, t_star);
    result.temperature = t_star;
    result.beta_star = 1.0 / t_star;
    return result;
}

}  // namespace spinflow
