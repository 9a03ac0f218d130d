#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "shelab/coefficients.hpp"
#include "shelab/solver.hpp"
#include "shelab/stochastic.hpp"

namespace shelab {

/// Per-path reduction: maps a finished trajectory to a row of named scalars.
struct PathEvaluator {
    std::vector<std::string> columns;
    std::function<void(const Trajectory&, std::span<double>)> eval;
};

/// Concatenate evaluators column-wise.
PathEvaluator chain_evaluators(std::vector<PathEvaluator> parts);

/// Rename an evaluator's columns with a prefix (column namespacing).
PathEvaluator prefix_columns(const std::string& prefix, PathEvaluator inner);

struct RunPlan {
    GridPtr grid;
    TimeGrid time_grid;
    Clock clock = Clock::identity();
    SolverConfig solver;
    Field u0;
    CoefficientSpec coeffs;
    std::uint64_t master_seed = 0;
    int paths = 1;
    int threads = 0;     // 0 = hardware concurrency
    int path_refine = 0; // sample paths at steps >> path_refine, bridge-refine up
    PathEvaluator evaluator;
};

struct RunResult {
    std::vector<std::string> columns;
    std::vector<Summary> stats;            // per column, deterministic reduction
    std::vector<std::vector<double>> rows; // [path][column]
    int paths = 0;

    std::size_t column_index(const std::string& name) const;
    const Summary& stat(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;
};

/// Solve `paths` independent paths (seeds from the ladder), evaluate the
/// row evaluator on each, and reduce columns with pairwise summation in path
/// order. Results do not depend on the worker count.
RunResult run_ensemble(const RunPlan& plan);

} // namespace shelab
