#include "shelab/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace shelab {

PathEvaluator chain_evaluators(std::vector<PathEvaluator> parts) {
    PathEvaluator out;
    std::vector<std::size_t> offsets;
    for (const auto& p : parts) {
        offsets.push_back(out.columns.size());
        out.columns.insert(out.columns.end(), p.columns.begin(), p.columns.end());
    }
    out.eval = [parts = std::move(parts), offsets](const Trajectory& t, std::span<double> row) {
        for (std::size_t i = 0; i < parts.size(); ++i)
            parts[i].eval(t, row.subspan(offsets[i], parts[i].columns.size()));
    };
    return out;
}

PathEvaluator prefix_columns(const std::string& prefix, PathEvaluator inner) {
    PathEvaluator out = std::move(inner);
    for (auto& c : out.columns) c = prefix + c;
    return out;
}

std::size_t RunResult::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw ConfigError("unknown ensemble column: " + name);
}

const Summary& RunResult::stat(const std::string& name) const {
    return stats[column_index(name)];
}

std::vector<double> RunResult::column(const std::string& name) const {
    const std::size_t c = column_index(name);
    std::vector<double> out(rows.size());
    for (std::size_t m = 0; m < rows.size(); ++m) out[m] = rows[m][c];
    return out;
}

RunResult run_ensemble(const RunPlan& plan) {
    if (plan.paths < 1) throw ConfigError("ensemble needs at least one path");
    const std::size_t ncols = plan.evaluator.columns.size();

    // Step sizes are path independent, so factorizations and coefficient
    // tables are built once and shared read-only.
    std::vector<double> knot(plan.time_grid.steps + 1), ds(plan.time_grid.steps),
        starts(plan.time_grid.steps);
    for (int k = 0; k <= plan.time_grid.steps; ++k) knot[k] = plan.clock(plan.time_grid.knot(k));
    for (int k = 0; k < plan.time_grid.steps; ++k) {
        ds[k] = knot[k + 1] - knot[k];
        starts[k] = knot[k];
    }
    const StepOperator op(plan.grid, plan.solver.theta, ds, plan.solver.cg_tol,
                          plan.solver.cg_max_iter);
    const CoefficientTable table = tabulate_coefficients(plan.coeffs, *plan.grid, starts);

    RunResult res;
    res.columns = plan.evaluator.columns;
    res.paths = plan.paths;
    res.rows.assign(plan.paths, std::vector<double>(ncols, 0.0));

    const SeedLadder ladder{plan.master_seed};
    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::uint64_t failing_seed = 0;

    auto worker = [&]() {
        for (;;) {
            const int m = next.fetch_add(1);
            if (m >= plan.paths) return;
            const std::uint64_t seed = derive_seed(ladder, static_cast<std::uint64_t>(m));
            try {
                WienerPath path = sample_path(
                    seed, TimeGrid{plan.time_grid.steps >> plan.path_refine}, plan.clock);
                for (int r = 0; r < plan.path_refine; ++r) path = refine_path(path, plan.clock);
                const Trajectory traj =
                    solve_path(plan.u0, plan.coeffs, path, plan.solver, &table, &op);
                plan.evaluator.eval(traj, std::span<double>(res.rows[m]));
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                    failing_seed = seed;
                }
                next.store(plan.paths);
                return;
            }
        }
    };

    int nthreads = plan.threads > 0 ? plan.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    nthreads = std::min(nthreads, plan.paths);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) {
        try {
            std::rethrow_exception(first_error);
        } catch (const NumericError& e) {
            throw NumericError(e.tag(), std::string(e.what()) + " (path seed " +
                                            std::to_string(failing_seed) + ")");
        }
    }

    // Single-reducer pass in path order; independent of the worker count.
    res.stats.resize(ncols);
    std::vector<double> colbuf(plan.paths);
    for (std::size_t c = 0; c < ncols; ++c) {
        for (int m = 0; m < plan.paths; ++m) colbuf[m] = res.rows[m][c];
        res.stats[c] = summarize(colbuf);
    }
    return res;
}

} // namespace shelab
