#pragma once

#include <memory>

#include "shelab/coefficients.hpp"
#include "shelab/ensemble.hpp"
#include "shelab/solver.hpp"

namespace shelab {

/// Parameter algebra of the conformal time change:
///   kappa = sqrt(a/b) - sqrt(b/a)
///   a(t)  = sqrt(ab) / (a(1-t) + b t)
///   b(t)  = sqrt(b/a) a(t) t
/// with a' = kappa a^2, b' = a^2, b(0) = 0, b(1) = 1 and the reciprocal-time
/// identity a(t) a(1 - b(t)) = 1 that the norm identity rests on.
struct AppellParams {
    double alpha = 1.0;
    double beta = 1.0;
    double kappa = 0.0;

    double a(double t) const { return std::sqrt(alpha * beta) / (alpha * (1.0 - t) + beta * t); }
    double b(double t) const { return std::sqrt(beta / alpha) * a(t) * t; }
    bool identity() const { return alpha == beta; }
};

/// Validates positivity and the construction identities numerically
/// (finite-difference a' and b' at random interior times to 1e-8, the
/// reciprocal-time identity to 1e-10).
AppellParams make_params(double alpha, double beta);

/// y(t,x) = a(t)^{n/2} u(b(t), a(t) x) e^{a(t) kappa |x|^2 / 4}, with the
/// source field read off the trajectory checkpoint at b(t) and resampled at
/// a(t) x by cubic (4-point Lagrange) interpolation. Points that leave the
/// source grid contribute 0.
struct TransformStats {
    double extrap_weighted_fraction = 0.0; // share of weighted mass at extrapolated nodes
    bool degraded = false;                 // fraction above 1%
};
Field transform_field(const Trajectory& u_traj, const AppellParams& p, double t,
                      double gamma_mass = 0.0, TransformStats* stats = nullptr);

/// Exponent coefficient on the u-side of the norm identity at s = b(t):
///   gamma a(1-s)^2 + kappa a(1-s)/4.
double norm_identity_exponent(const AppellParams& p, double gamma, double s);

/// Transformed coefficients of the equivalent-in-law problem:
///   V~(t,x) = a(t)^2 V(b(t), a(t) x),  G~(t,x) = G(b(t), a(t) x) sqrt(b'(t))
/// (b' = a^2, so the noise factor is a(t)).
struct TransformedProblem {
    AppellParams params;
    CoefficientSpec spec;
    CoefficientBounds bounds;
};
TransformedProblem transform_coefficients(const CoefficientSpec& spec, const AppellParams& p,
                                          const Grid& grid,
                                          std::span<const double> time_samples);

/// Per-path two-sided evaluation of the norm identity at the given y-side
/// times: columns LHS@j (gamma-weighted norm of the transformed field) and
/// RHS@j (matching exponent weight on u at s = b(t_j)), plus EXF@j with the
/// extrapolated-mass fraction. The u trajectory must carry a checkpoint at
/// b(t_j) for every requested time.
PathEvaluator make_norm_identity_evaluator(const GridPtr& grid, const AppellParams& p,
                                           double gamma, std::vector<double> times);

/// Norms and gamma-weighted moments of the transformed field at the given
/// y-side times: columns NORM@j and HW@j (for the dual-simulation law check).
PathEvaluator make_transformed_moment_evaluator(const GridPtr& grid, const AppellParams& p,
                                                double gamma, std::vector<double> times);

/// Same columns computed directly on an identity-clock trajectory.
PathEvaluator make_direct_moment_evaluator(const GridPtr& grid, double gamma,
                                           std::vector<double> times);

} // namespace shelab
