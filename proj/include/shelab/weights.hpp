#pragma once

#include <span>
#include <string>
#include <vector>

#include "shelab/grid.hpp"

namespace shelab {

/// phi_gamma(t) = gamma / (1 + 4 gamma t): the decay rate that exactly
/// compensates heat spreading (4 phi^2 + phi' = 0).
double phi_gamma(double t, double gamma);

/// Gaussian log weight gamma |x|^2, optionally with the time-decaying rate
/// phi_gamma(t) in place of gamma.
struct QuadraticWeight {
    double gamma = 0.0;
    bool time_dependent = false;

    double rate(double t) const { return time_dependent ? phi_gamma(t, gamma) : gamma; }
    double at(double t, std::span<const double> x) const {
        double r2 = 0.0;
        for (double xi : x) r2 += xi * xi;
        return rate(t) * r2;
    }
};

/// Moving Gaussian log weight
///   mu |x + R t(1-t) e1|^2 + R^2 t(1-t)(1-2t)/6 - R^2 t(1-t)/(16 mu).
struct TranslatedWeight {
    double mu = 1.0;
    double R = 0.0;

    double at(double t, std::span<const double> x) const;
};

double translated_weight(double mu, double R, double t, std::span<const double> x);

/// Exponent of the squared weight at t = 1/2:
///   2 mu |x + (R/4) e1|^2 - R^2/(32 mu).
double weight_at_half(double mu, double R, std::span<const double> x);

/// Blend data for the mollified radial weight. zeta_a vanishes below
/// r_lo = max(gamma,2) - 1, equals 2 r^-a above r_hi = max(gamma,2), and is
/// joined by a quintic smoothstep in between (C^1, nonnegative).
struct MollifierParams {
    double a = 0.1;
    double gamma = 0.0;
    double r_lo = 1.0;
    double r_hi = 2.0;

    double zeta(double r) const;
};

/// Radial weight phi_a solving phi'' - phi'/r = -a zeta_a(r), phi'(0) = 0,
/// phi'' -> 0 at the far end, normalized so that
/// phi_a(r) = (2 r^(2-a) - a)/(2-a) for r >= r_hi. Tabulated on a uniform
/// radial mesh with Hermite interpolation; built from the integral form
/// phi'(r) = a r Int_r^inf zeta(s)/s ds rather than a boundary-value solve.
class MollifiedWeight {
public:
    MollifiedWeight(double a, double gamma, double r_max, int mesh_points);

    const MollifierParams& params() const { return params_; }
    double r_max() const { return r_max_; }

    double phi(double r) const;
    double dphi(double r) const;
    /// |phi'' - phi'/r + a zeta(r)| with phi'' from mesh finite differences.
    double ode_residual(double r) const;

    /// Log weight gamma * phi_a(|x|).
    double at(std::span<const double> x) const;

    /// Rows (r, phi_a, dphi_a, residual) for CSV export.
    std::vector<std::array<double, 4>> table() const;

private:
    MollifierParams params_;
    double r_max_;
    double dr_;
    std::vector<double> phi_, dphi_;
};

/// Throws NumericError("mesh") if the tabulated solution fails the ODE
/// residual check, which indicates the mesh is too coarse.
MollifiedWeight build_mollified(double a, double gamma, double r_max, int mesh_points);

/// Tagged union used by the functionals layer; every family exposes a
/// log-weight evaluator, and the quadratic/translated families also carry
/// the analytic data the Dirichlet forms need.
struct WeightSpec {
    enum class Kind { none, quadratic, quadratic_decaying, translated, mollified };
    Kind kind = Kind::none;
    double gamma = 0.0; // quadratic families
    double mu = 0.0;    // translated family
    double R = 0.0;
    std::shared_ptr<const MollifiedWeight> mollified;

    static WeightSpec none() { return {}; }
    static WeightSpec quadratic(double gamma, bool time_dependent = false);
    static WeightSpec translated(double mu, double R);
    static WeightSpec mollified_weight(std::shared_ptr<const MollifiedWeight> w);

    double log_weight(double t, std::span<const double> x) const;
    std::string describe() const;
};

/// Log weights at every node of a grid for a fixed time.
LogWeightValues tabulate_log_weight(const WeightSpec& w, const Grid& g, double t);

} // namespace shelab
