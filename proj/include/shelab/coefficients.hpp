#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "shelab/grid.hpp"

namespace shelab {

using ScalarCoeff = std::function<double(double t, std::span<const double> x)>;
using GradCoeff = std::function<void(double t, std::span<const double> x, std::span<double> out)>;

/// The potential V and noise coefficient G of the evolution
/// du = (Lap u + V u) dt + G u dW, together with a descriptor that fully
/// identifies them in run manifests.
struct CoefficientSpec {
    ScalarCoeff V;
    ScalarCoeff G;
    GradCoeff gradG;          // analytic if supplied
    bool gradG_analytic = false;
    std::string descriptor = "zero";
    std::map<std::string, double> params;

    double eval_V(double t, std::span<const double> x) const { return V ? V(t, x) : 0.0; }
    double eval_G(double t, std::span<const double> x) const { return G ? G(t, x) : 0.0; }
    /// Gradient of G: analytic when available, otherwise fourth-order
    /// centered finite differences of G with step fd_step.
    void eval_gradG(double t, std::span<const double> x, std::span<double> out) const;

    double fd_step = 1.0 / 64.0;
};

/// Estimated sup norms over a space-time sample lattice, inflated by a
/// declared safety factor of 1 + 1e-6. MGV = M0^2 + 2M.
struct CoefficientBounds {
    double M = 0.0;   // sup |V|
    double M0 = 0.0;  // sup |G|
    double M1 = 0.0;  // sup |grad G|
    double MGV = 0.0;
};

CoefficientBounds estimate_bounds(const CoefficientSpec& spec, const Grid& grid,
                                  std::span<const double> time_samples);

/// Outcome of checking one of the two decay hypotheses on the lattice.
/// worst_violation <= 0 means pass; the witness is where the margin is worst.
struct AssumptionReport {
    std::string assumption_id; // "A1" or "A2"
    double gamma = 0.0;
    double epsilon = 0.0;
    double worst_violation = 0.0;
    double witness_t = 0.0;
    std::vector<double> witness_x;
    bool pass = false;
    // Tail behavior of |V| and |grad G| on the shells |x| >= L/2, 3L/4, L.
    std::vector<double> shell_radii;
    std::vector<double> shell_sup_V;
    std::vector<double> shell_sup_gradG;
};

/// Decay hypothesis with the (1+4 gamma)-scaled radius and bound:
/// |G(t,x)| <= sqrt(gamma) (1+4 gamma)^((eps-1)/2) |x|^-eps
/// for |x| >= max(gamma,2)/sqrt(1+4 gamma).
AssumptionReport check_assumption_A1(const CoefficientSpec& spec, double gamma, double epsilon,
                                     const Grid& grid, std::span<const double> time_samples);

/// Plain decay hypothesis: |G(t,x)| <= sqrt(gamma) |x|^-eps for |x| >= max(gamma,2).
AssumptionReport check_assumption_A2(const CoefficientSpec& spec, double gamma, double epsilon,
                                     const Grid& grid, std::span<const double> time_samples);

// Shipped coefficient library -------------------------------------------------

CoefficientSpec coeff_zero();
/// V(t,x) = amp * cos(x1)
CoefficientSpec potential_cos(double amp);
/// V(t,x) = amp * (1 - |x/width|^2)^2 on |x| < width, 0 outside (compact bump)
CoefficientSpec potential_bump(double amp, double width);
/// G(t,x) = amp * (1 + |x|^2)^(-eps/2) * fade(|x|), fade a quintic cutoff
/// equal to 1 below fade_lo and 0 above fade_hi.
CoefficientSpec noise_decay(double amp, double eps, double fade_lo, double fade_hi);
/// Space-independent noise G(t) = amp * (1 + t).
CoefficientSpec noise_time_linear(double amp);

/// Combine a potential-only and a noise-only spec into one.
CoefficientSpec combine(const CoefficientSpec& potential, const CoefficientSpec& noise);

/// Per-step tabulated coefficient values shared read-only across paths.
struct CoefficientTable {
    std::vector<double> times;            // evaluation times (step starts)
    std::vector<std::vector<double>> V;   // [step][node]
    std::vector<std::vector<double>> G;   // [step][node]
};

CoefficientTable tabulate_coefficients(const CoefficientSpec& spec, const Grid& grid,
                                       std::span<const double> times);

} // namespace shelab
