#include "shelab/thresholds.hpp"

#include <cmath>

#include "shelab/grid.hpp"

namespace shelab {

namespace {
const double kBranchPoint = 0.5 * (1.0 + std::sqrt(2.0));

void need_above_half(double v, const char* who) {
    if (!(v > 0.5)) throw ConfigError(std::string(who) + " requires the argument > 1/2");
}
} // namespace

double alpha_gamma(double gamma) {
    need_above_half(gamma, "alpha_gamma");
    if (gamma >= kBranchPoint)
        return 0.25 + (1.0 + std::sqrt(8.0 * gamma * gamma + 1.0)) / (16.0 * gamma * gamma);
    return (2.0 * gamma + 1.0) / (8.0 * gamma * gamma) +
           std::sqrt(8.0 * gamma + 3.0) / (16.0 * gamma * gamma);
}

double noise_bound(double gamma) {
    need_above_half(gamma, "noise_bound");
    return (4.0 * gamma * gamma - 1.0) /
           (8.0 * alpha_gamma(gamma) * gamma * (1.0 + 4.0 * gamma));
}

double m_mu(double mu) {
    need_above_half(mu, "m_mu");
    if (mu >= kBranchPoint) return 0.25;
    return (4.0 * mu + 1.0) / (16.0 * mu * mu);
}

double m_mu_bruteforce(double mu, int grid_points) {
    need_above_half(mu, "m_mu_bruteforce");
    double best = 0.0;
    for (int i = 0; i <= grid_points; ++i) {
        const double t = static_cast<double>(i) / grid_points;
        const double v =
            t * (1.0 - t) + (4.0 * mu * (1.0 - 2.0 * t) - 1.0) / (16.0 * mu * mu);
        best = std::max(best, std::fabs(v));
    }
    return best;
}

double alpha_root(double mu) {
    need_above_half(mu, "alpha_root");
    const double m = m_mu(mu);
    return (1.0 + 16.0 * mu * mu * m + std::sqrt(1.0 + 32.0 * mu * mu * m)) / (16.0 * mu * mu);
}

GConditionReport g_condition_check(double mu, double alpha, double m, double M0t_sq) {
    GConditionReport rep;
    const double d = alpha - m;
    rep.rhs_direct = 64.0 * mu * mu * mu * d * d / (8.0 * mu * mu * d * d + alpha);
    rep.direct_pass = M0t_sq <= rep.rhs_direct;
    rep.sufficient_pass = M0t_sq < 4.0 * mu;
    return rep;
}

ThresholdTable make_threshold_table(double gamma, std::span<const double> mus) {
    ThresholdTable t;
    t.gamma = gamma;
    t.delta = 1.0 / (2.0 * gamma);
    t.alpha_gamma = alpha_gamma(gamma);
    t.noise_bound = noise_bound(gamma);
    for (double mu : mus) {
        ThresholdRow r;
        r.mu = mu;
        r.m_mu = m_mu(mu);
        r.alpha = alpha_root(mu);
        const double d = r.alpha - r.m_mu;
        r.quadratic_residual = std::fabs(4.0 * mu * mu * d * d - r.alpha / 2.0);
        t.rows.push_back(r);
    }
    return t;
}

HardyOracleReport hardy_heat_oracle(double beta, double delta, double L, int points_per_axis) {
    if (!(beta > 0.0) || !(delta > 0.0)) throw ConfigError("hardy oracle needs beta, delta > 0");
    HardyOracleReport rep;
    rep.beta = beta;
    rep.delta = delta;
    rep.finite = delta * delta > beta * beta + 4.0;

    // e^Delta applied to the Gaussian: amplitude (b^2/(b^2+4))^(1/2) in 1-D,
    // decay rate 1/(b^2+4); the weighted squared norm integrand is
    // amp^2 exp(2 (1/delta^2 - 1/(b^2+4)) x^2).
    const double bb4 = beta * beta + 4.0;
    const double amp2 = beta * beta / bb4;
    auto norm_sq = [&](double halfw) {
        auto g = make_grid(1, halfw, points_per_axis);
        Field f(g);
        LogWeightValues w(g->size());
        for (std::size_t i = 0; i < g->size(); ++i) {
            const double x = g->coord(static_cast<int>(i));
            f.v[i] = std::sqrt(amp2) * std::exp(-x * x / bb4);
            w[i] = x * x / (delta * delta);
        }
        return weighted_l2_sq(f, w);
    };
    rep.norm_sq_L = norm_sq(L);
    rep.norm_sq_2L = norm_sq(2.0 * L);
    rep.growth = rep.norm_sq_L > 0.0 ? rep.norm_sq_2L / rep.norm_sq_L : 0.0;
    return rep;
}

double sweep_exponent(double alpha, double mu, double eps, double M0t_sq, double R) {
    return R * R * sweep_slope(alpha, mu, eps, M0t_sq);
}

double sweep_slope(double alpha, double mu, double eps, double M0t_sq) {
    const double om = 1.0 - eps;
    return alpha * M0t_sq / 4.0 - (4.0 * om * om * mu * mu - 1.0) / (32.0 * mu);
}

double balance_point(double alpha, double mu, double eps) {
    const double om = 1.0 - eps;
    return (4.0 * om * om * mu * mu - 1.0) / (8.0 * alpha * mu);
}

} // namespace shelab
