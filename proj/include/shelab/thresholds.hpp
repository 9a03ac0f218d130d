#pragma once

#include <vector>

#include "shelab/util.hpp"

namespace shelab {

/// Branch constant of the uniqueness condition:
///   1/4 + (1 + sqrt(8 g^2 + 1))/(16 g^2)          for g >= (1+sqrt 2)/2
///   (2g+1)/(8 g^2) + sqrt(8g+3)/(16 g^2)          for 1/2 < g < (1+sqrt 2)/2
/// Continuous across the branch point.
double alpha_gamma(double gamma);

/// Admissible noise level: (4 g^2 - 1) / (8 alpha_g g (1 + 4g)); a scenario
/// passes when |G|_inf^2 stays strictly below it.
double noise_bound(double gamma);

/// sup over t in [0,1] of |t(1-t) + (4 mu (1-2t) - 1)/(16 mu^2)|:
///   1/4 for mu >= (1+sqrt 2)/2, else (4 mu + 1)/(16 mu^2).
double m_mu(double mu);

/// Independent check of m_mu by maximizing over a dense t grid.
double m_mu_bruteforce(double mu, int grid_points = 100000);

/// Larger root of 4 mu^2 (alpha - m_mu)^2 = alpha/2:
///   alpha = (1 + 16 mu^2 m + sqrt(1 + 32 mu^2 m)) / (16 mu^2), alpha > m.
double alpha_root(double mu);

/// Noise smallness at the transformed level. direct evaluates
///   M0t^2 <= 64 mu^3 (a-m)^2 / (8 mu^2 (a-m)^2 + a);
/// sufficient is the simpler M0t^2 < 4 mu, which implies it.
struct GConditionReport {
    double rhs_direct = 0.0;
    bool direct_pass = false;
    bool sufficient_pass = false;
};
GConditionReport g_condition_check(double mu, double alpha, double m, double M0t_sq);

/// Closed-form constants for one gamma (and a list of mu values).
struct ThresholdRow {
    double mu = 0.0;
    double m_mu = 0.0;
    double alpha = 0.0;
    double quadratic_residual = 0.0; // |4 mu^2 (a-m)^2 - a/2|
};
struct ThresholdTable {
    double gamma = 0.0;
    double delta = 0.0; // gamma = 1/(2 delta)
    double alpha_gamma = 0.0;
    double noise_bound = 0.0;
    double hardy_delta_threshold = 2.0;
    std::vector<ThresholdRow> rows;
};
ThresholdTable make_threshold_table(double gamma, std::span<const double> mus);

/// Gaussian closed-form check of the classical heat-Hardy threshold: for
/// f = e^{-|x|^2/beta^2}, the delta-weighted norm of the unit-time heat
/// evolution is finite iff delta^2 > beta^2 + 4. Also reports truncated-grid
/// norms at L and 2L so divergence is observable numerically.
struct HardyOracleReport {
    double beta = 0.0, delta = 0.0;
    bool finite = false; // analytic rule
    double norm_sq_L = 0.0;
    double norm_sq_2L = 0.0;
    double growth = 0.0; // norm_sq_2L / norm_sq_L
};
HardyOracleReport hardy_heat_oracle(double beta, double delta, double L, int points_per_axis);

/// Exponent of the local-mass bound at radius-scale R:
///   E(R) = alpha R^2 M0t^2 / 4 - R^2 (4 (1-eps)^2 mu^2 - 1)/(32 mu).
double sweep_exponent(double alpha, double mu, double eps, double M0t_sq, double R);
/// d E / d(R^2) (constant in R).
double sweep_slope(double alpha, double mu, double eps, double M0t_sq);
/// M0t^2 at which the exponent changes sign.
double balance_point(double alpha, double mu, double eps);

} // namespace shelab
