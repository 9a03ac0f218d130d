#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "shelab/coefficients.hpp"
#include "shelab/grid.hpp"
#include "shelab/stochastic.hpp"

namespace shelab {

/// Time discretization of du = (Lap u + V u) dt + G u dW:
/// theta-implicit in the Laplacian, explicit Euler (Ito) in V and the noise:
///   (I - theta ds Lap_h) u+ = u + (1-theta) ds Lap_h u + (ds V + dW G) u.
/// Homogeneous Dirichlet on the box; boundary nodes stay 0.
struct SolverConfig {
    double theta = 0.5;
    std::vector<double> checkpoints = default_checkpoints(); // in clock-input units
    double cg_tol = 1e-10;
    int cg_max_iter = 20000;

    static std::vector<double> default_checkpoints(int count = 21);
};

struct Trajectory {
    std::vector<double> times;  // physical times b(t) of the checkpoints
    std::vector<Field> fields;
    std::uint64_t path_seed = 0;
    double theta = 0.5;
    int steps = 0;

    const Field& at(double time, double tol = 1e-9) const;
    bool has(double time, double tol = 1e-9) const;
};

/// Factorizations and scratch shared read-only by all paths of an ensemble
/// (the step-size sequence is path independent).
class StepOperator {
public:
    StepOperator(GridPtr grid, double theta, std::vector<double> step_sizes,
                 double cg_tol, int cg_max_iter);

    /// Advance one step: u_next = (I - theta ds Lap)^-1 rhs with
    /// rhs = u + (1-theta) ds Lap u + s u, s = ds*V + dW*G per node.
    void advance(int step_index, const std::vector<double>& coef_s, std::vector<double>& u,
                 std::vector<double>& scratch_lap, std::vector<double>& scratch_rhs) const;

    const std::vector<double>& step_sizes() const { return ds_; }

private:
    struct Tridiag {
        double diag, off;
        std::vector<double> denom; // forward-elimination pivots
        std::vector<double> cprime;
    };
    void solve_tridiag(const Tridiag& f, std::vector<double>& rhs_interior) const;
    void solve_cg(double ds, const std::vector<double>& rhs, std::vector<double>& x) const;

    GridPtr grid_;
    double theta_;
    std::vector<double> ds_;
    std::vector<Tridiag> facts_; // per step in 1-D (single entry when uniform)
    std::vector<int> fact_index_;
    double cg_tol_;
    int cg_max_iter_;
};

/// Single explicit step (test and probe surface; ensembles drive StepOperator).
Field step(const Field& u, double t, double dt, double dW, const CoefficientSpec& spec,
           const SolverConfig& cfg);

/// Integrate one path. The path's clock defines the physical times; the
/// checkpoint list (clock-input units) must be a subset of the grid knots.
Trajectory solve_path(const Field& u0, const CoefficientSpec& spec, const WienerPath& path,
                      const SolverConfig& cfg, const CoefficientTable* table = nullptr,
                      const StepOperator* op = nullptr);

/// Observed convergence orders under coupled refinement.
struct ConvergenceRow {
    int level;
    double resolution; // dt or h
    double error;
};
struct ConvergenceReportData {
    std::vector<ConvergenceRow> dt_rows;
    double dt_order = 0.0;
    std::vector<ConvergenceRow> h_rows;
    double h_order = 0.0;
};

using InitialProfile = std::function<double(std::span<const double>)>;

/// Strong order in dt over `refinements` halvings (Brownian-bridge coupled
/// paths, `paths` of them), and order in h for the noiseless problem.
ConvergenceReportData convergence_report(const GridPtr& grid, const InitialProfile& u0_fn,
                                         const CoefficientSpec& spec, std::uint64_t master_seed,
                                         int base_steps, int refinements, int paths,
                                         const SolverConfig& cfg);

} // namespace shelab
