#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shelab/coefficients.hpp"
#include "shelab/ensemble.hpp"
#include "shelab/weights.hpp"

namespace shelab {

enum class Verdict { Pass, Fail, Inconclusive };
const char* verdict_name(Verdict v);

/// Checkpoint time series of the weighted moments driving the convexity
/// machinery, with Monte Carlo error bars. With f = e^w u for the series
/// weight w:
///   H  = E |f|^2            EV = E (V f, f)      HG = E |G f|^2
///   D  = E (S f, f)         DG = E (S (G f), G f)
///   NGF = E |grad f|^2      X2F = E | |x| f |^2
/// F solves dF/dt = -2 EV/H - HG/H, F(0) = 0 (trapezoidal in t);
/// Q = F + t(1-t) M^2.
struct FunctionalSeries {
    std::vector<double> t;
    std::vector<Summary> H, EV, HG, D, DG, NGF, X2F;
    std::vector<double> F, Q;
    WeightSpec weight;
    CoefficientBounds bounds;
    int paths = 0;
};

/// Column layout used by the series evaluator ("H@3" is H at checkpoint 3).
std::string series_column(const char* base, int j);

/// Per-path evaluator computing the series integrands at every checkpoint.
/// The trajectory's checkpoint times must equal the weight times (identity
/// clock ensembles).
PathEvaluator make_series_evaluator(const GridPtr& grid, const WeightSpec& weight,
                                    const CoefficientSpec& spec,
                                    std::span<const double> checkpoints);

/// Assemble the series (means, error bars, F, Q) from a finished run.
FunctionalSeries assemble_series(const RunResult& run, const WeightSpec& weight,
                                 const CoefficientBounds& bounds,
                                 std::span<const double> checkpoints,
                                 const std::string& column_prefix = "");

/// Trapezoidal integration of dF/dt = -2 EV/H - HG/H from F(0) = 0.
/// Throws NumericError("dead-ensemble") if some H <= 0.
std::vector<double> f_correction(std::span<const double> t, std::span<const double> H,
                                 std::span<const double> EV, std::span<const double> HG);

/// Second-difference convexity verdict for log H + Q.
struct ConvexityPoint {
    double t = 0.0;
    double second_diff = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};
struct ConvexityReport {
    std::vector<ConvexityPoint> points;
    std::vector<double> g; // log H + Q at the checkpoints
    double defect_floor = 0.0;
    double allowance = 0.0;      // discretization allowance (shared)
    double calibrated_N = 0.0;   // minimal N in the interpolation bound
    double interpolation_excess = 0.0; // max log-gap over the chord (offset removed)
    Verdict verdict = Verdict::Fail;
};

/// Verdict per interior checkpoint: s_j >= defect_floor - tolerance_j with
/// tolerance_j = 3 * delta-method stderr of the second difference plus
/// 10 * dt * max |third difference of g| / dt^3. If any H estimate is below
/// 10x its standard error the verdict is Inconclusive. calibrated_N is the
/// smallest N >= 0 with
///   H(t) <= exp(N (M + M^2 + M0^2 + M1^2) + interpolation_offset)
///           * H(0)^(1-t) H(1)^t  at every checkpoint.
ConvexityReport convexity_check(const FunctionalSeries& s, double defect_floor,
                                double tolerance_scale = 1.0,
                                double interpolation_offset = 0.0);

/// Weighted-moment summary at one checkpoint (sample mean and stderr of
/// the w-weighted squared norm over paths).
struct MomentEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
};
MomentEstimate weighted_moment(const RunResult& run, std::span<const double> checkpoints,
                               double t_query);
MomentEstimate dirichlet_form(const RunResult& run, std::span<const double> checkpoints,
                              double t_query);
MomentEstimate dg_form(const RunResult& run, std::span<const double> checkpoints,
                       double t_query);

/// Energy estimate data: LHS = E sup over checkpoints of the
/// phi_gamma(t)-weighted squared norm, RHS0 = the gamma-weighted squared
/// norm of the data.
struct EnergyReport {
    double lhs = 0.0, lhs_stderr = 0.0;
    double rhs0 = 0.0, rhs0_stderr = 0.0;
    double mgv = 0.0;
    double min_C = 0.0;  // log(lhs/rhs0)/mgv when mgv > 0
    double tolerance = 1e-3;
    Verdict verdict = Verdict::Fail;
    std::string semantics = "checkpoint-sup";
};

PathEvaluator make_energy_evaluator(const GridPtr& grid, double gamma,
                                    std::span<const double> checkpoints);
EnergyReport energy_check(const RunResult& run, double mgv, double tolerance,
                          double tolerance_scale = 1.0);

/// Integrated estimate: time integrals of the gamma-weighted moments against
/// the data terms. min_N is LHS/(RHS data sum).
struct IntegratedReport {
    double int_H = 0.0;       // Int E|e^w u|^2 dt
    double int_x2 = 0.0;      // Int t(1-t) E|e^w |x| u|^2 dt
    double int_grad = 0.0;    // Int t(1-t) E|e^w grad u|^2 dt
    double data_H0 = 0.0, data_H1 = 0.0, sup_plain = 0.0;
    double min_N = 0.0;
    Verdict verdict = Verdict::Fail;
};
PathEvaluator make_integrated_evaluator(const GridPtr& grid, double gamma,
                                        std::span<const double> checkpoints);
IntegratedReport integrated_estimate_check(const RunResult& run,
                                           std::span<const double> checkpoints);

/// Interior-regularity finiteness proxy under the mollified weight.
struct InteriorReport {
    double eps = 0.0;
    double sup_grad = 0.0; // sup over checkpoints >= eps of E|e^{g phi_a} grad u|^2
    double int_d2 = 0.0;   // Int_eps^1 E|e^{g phi_a} D^2 u|^2 dt
};
PathEvaluator make_interior_evaluator(const GridPtr& grid,
                                      std::shared_ptr<const MollifiedWeight> w,
                                      std::span<const double> checkpoints);
InteriorReport interior_finiteness_check(const RunResult& run,
                                         std::span<const double> checkpoints, double eps);

} // namespace shelab
