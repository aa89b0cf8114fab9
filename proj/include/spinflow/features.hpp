#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spinflow/infoflow.hpp"

namespace spinflow {

/// Nonnegative double-exponential fit I(t) ~ a e^{-b t} + c e^{-d t} + omega.
struct DecayFit {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    double omega = 0.0;
    double residual_rms = 0.0;
    bool single_exponential = false;  // fallback / degenerate second term
};

/// Least-squares fit with nonnegativity constraints. Rate pairs are seeded
/// from a log-spaced grid (amplitudes solved by constrained linear least
/// squares) and the best seeds are refined by golden-section on each rate;
/// this plays the role of a multi-start. Falls back to a single exponential
/// plus offset when the two rates collapse. Requires >= 10 points.
DecayFit fit_decay(const Eigen::VectorXd& values);
DecayFit fit_decay(const InfoCurve& curve);

/// mu = sum_t max(I(t) - omega, 0) plus the analytic tail of the fitted
/// exponentials beyond t_max: a e^{-b t_max}/b + c e^{-d t_max}/d.
double integrated_mi(const Eigen::VectorXd& values, const DecayFit& fit);
double integrated_mi(const InfoCurve& curve, const DecayFit& fit);

struct RoleTable {
    std::vector<double> gammas;
    Eigen::MatrixXd mu;       // node x gamma
    Eigen::MatrixXd omega;    // node x gamma
    std::vector<double> mu_star;            // per node: max_gamma normalized mu
    std::vector<double> omega_star;         // per node: max_gamma normalized omega
    std::vector<double> role;               // r_i = mu_star - omega_star, in [-1,1]
    std::vector<double> mu_argmax_gamma;    // maximizing gamma (nearest 0 on ties)
    std::vector<double> omega_argmax_gamma;
};

/// Normalizes mu and omega by their global maxima and scores each node as
/// r_i = max_gamma mu*(i,gamma) - max_gamma omega*(i,gamma). An all-zero
/// matrix yields all-zero normalized scores.
RoleTable role_scores(const Eigen::MatrixXd& mu, const Eigen::MatrixXd& omega,
                      const std::vector<double>& gammas);

struct RoleAnalysis {
    std::vector<InfoCurve> curves;
    std::vector<DecayFit> fits;  // aligned with curves
    RoleTable table;
    /// Curves whose fit residual exceeds 5% of the curve's initial value;
    /// a data-quality warning, not an error.
    std::vector<std::string> fit_warnings;
};

/// End-to-end: exact curves for all (node, gamma), per-curve decay fits,
/// integrated/asymptotic features, role table.
RoleAnalysis analyze_roles(const Graph& g, const ModelParams& params, int t_max = 300,
                           int workers = 0);

}  // namespace spinflow
