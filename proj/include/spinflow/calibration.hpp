#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spinflow/graph.hpp"

namespace spinflow {

struct ComplexityReport {
    double temperature = 0.0;
    double beta = 0.0;
    double entropy_normalized = 0.0;  // H / log2(m), in [0,1]
    double disequilibrium = 0.0;      // sum_i (p_i - 1/m)^2
    double complexity = 0.0;          // product of the two
};

/// LMC statistical complexity of a distribution over m >= 2 states.
/// temperature/beta fields are left at zero; callers doing a temperature
/// sweep fill them in.
ComplexityReport statistical_complexity(const Eigen::VectorXd& dist);

struct CalibrationResult {
    double beta_star = 0.0;
    double temperature = 0.0;
    ComplexityReport at_optimum;
    std::vector<ComplexityReport> curve;  // coarse-grid complexity sweep
};

/// Finds beta = 1/T maximizing statistical_complexity(boltzmann(g, beta))
/// over T in [t_min, t_max]: coarse grid scan (grid_points, guards against
/// multimodality) then golden-section refinement to t_tol absolute
/// temperature tolerance. Throws std::runtime_error when the complexity is
/// numerically flat across the bracket.
CalibrationResult match_noise(const Graph& g, double t_min = 0.1, double t_max = 10.0,
                              double t_tol = 1e-4, int grid_points = 64);

}  // namespace spinflow
