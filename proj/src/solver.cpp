#include "shelab/solver.hpp"

#include <algorithm>
#include <cmath>

#include "shelab/kernels.hpp"

namespace shelab {

std::vector<double> SolverConfig::default_checkpoints(int count) {
    std::vector<double> cps(count);
    for (int i = 0; i < count; ++i) cps[i] = static_cast<double>(i) / (count - 1);
    return cps;
}

const Field& Trajectory::at(double time, double tol) const {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::fabs(times[i] - time) <= tol) return fields[i];
    throw ConfigError("trajectory has no checkpoint at t = " + fmt_double(time));
}

bool Trajectory::has(double time, double tol) const {
    for (double s : times)
        if (std::fabs(s - time) <= tol) return true;
    return false;
}

namespace {

void zero_boundary(const Grid& g, std::vector<double>& v) {
    const int n = g.points_per_axis;
    if (g.dim == 1) {
        v[0] = 0.0;
        v[n - 1] = 0.0;
        return;
    }
    for (int ix = 0; ix < n; ++ix) {
        v[ix] = 0.0;
        v[static_cast<std::size_t>(n - 1) * n + ix] = 0.0;
    }
    for (int iy = 0; iy < n; ++iy) {
        v[static_cast<std::size_t>(iy) * n] = 0.0;
        v[static_cast<std::size_t>(iy) * n + n - 1] = 0.0;
    }
}

void apply_laplacian(const Grid& g, const std::vector<double>& in, std::vector<double>& out) {
    const double inv_h2 = 1.0 / (g.spacing * g.spacing);
    if (g.dim == 1)
        kern::second_diff_1d(in.data(), out.data(), g.points_per_axis, inv_h2);
    else
        kern::second_diff_2d(in.data(), out.data(), g.points_per_axis, g.points_per_axis,
                             inv_h2);
}

} // namespace

StepOperator::StepOperator(GridPtr grid, double theta, std::vector<double> step_sizes,
                           double cg_tol, int cg_max_iter)
    : grid_(std::move(grid)), theta_(theta), ds_(std::move(step_sizes)), cg_tol_(cg_tol),
      cg_max_iter_(cg_max_iter) {
    if (theta_ < 0.0 || theta_ > 1.0) throw ConfigError("theta must lie in [0,1]");
    fact_index_.resize(ds_.size(), 0);
    if (grid_->dim != 1) return;
    // One tridiagonal factorization per distinct step size.
    const int ni = grid_->points_per_axis - 2; // interior unknowns
    const double inv_h2 = 1.0 / (grid_->spacing * grid_->spacing);
    std::vector<double> seen;
    for (std::size_t k = 0; k < ds_.size(); ++k) {
        int idx = -1;
        for (std::size_t j = 0; j < seen.size(); ++j)
            if (seen[j] == ds_[k]) { idx = static_cast<int>(j); break; }
        if (idx < 0) {
            seen.push_back(ds_[k]);
            Tridiag f;
            f.diag = 1.0 + 2.0 * theta_ * ds_[k] * inv_h2;
            f.off = -theta_ * ds_[k] * inv_h2;
            f.denom.resize(ni);
            f.cprime.resize(ni);
            f.denom[0] = f.diag;
            f.cprime[0] = f.off / f.diag;
            for (int i = 1; i < ni; ++i) {
                f.denom[i] = f.diag - f.off * f.cprime[i - 1];
                f.cprime[i] = f.off / f.denom[i];
            }
            facts_.push_back(std::move(f));
            idx = static_cast<int>(facts_.size()) - 1;
        }
        fact_index_[k] = idx;
    }
}

void StepOperator::solve_tridiag(const Tridiag& f, std::vector<double>& r) const {
    const int ni = static_cast<int>(r.size());
    r[0] /= f.denom[0];
    for (int i = 1; i < ni; ++i) r[i] = (r[i] - f.off * r[i - 1]) / f.denom[i];
    for (int i = ni - 2; i >= 0; --i) r[i] -= f.cprime[i] * r[i + 1];
}

void StepOperator::solve_cg(double ds, const std::vector<double>& rhs,
                            std::vector<double>& x) const {
    const Grid& g = *grid_;
    const std::size_t n = g.size();
    std::vector<double> r(rhs), p(n), Ap(n), lap(n);
    auto apply_A = [&](const std::vector<double>& in, std::vector<double>& out) {
        apply_laplacian(g, in, out);
        for (std::size_t i = 0; i < n; ++i) out[i] = in[i] - theta_ * ds * out[i];
        zero_boundary(g, out);
    };
    std::fill(x.begin(), x.end(), 0.0);
    zero_boundary(g, r);
    p = r;
    double rs = kern::dot(r.data(), r.data(), static_cast<int>(n));
    const double rhs_norm = std::sqrt(kern::dot(rhs.data(), rhs.data(), static_cast<int>(n)));
    const double tol2 = cg_tol_ * std::max(1.0, rhs_norm);
    for (int it = 0; it < cg_max_iter_; ++it) {
        if (std::sqrt(rs) <= tol2) return;
        apply_A(p, Ap);
        const double alpha = rs / kern::dot(p.data(), Ap.data(), static_cast<int>(n));
        kern::axpy(alpha, p.data(), x.data(), static_cast<int>(n));
        kern::axpy(-alpha, Ap.data(), r.data(), static_cast<int>(n));
        const double rs_new = kern::dot(r.data(), r.data(), static_cast<int>(n));
        const double beta = rs_new / rs;
        rs = rs_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    if (std::sqrt(rs) > tol2)
        throw NumericError("cg", "conjugate gradient failed to reach residual tolerance");
}

void StepOperator::advance(int k, const std::vector<double>& coef_s, std::vector<double>& u,
                           std::vector<double>& lap, std::vector<double>& rhs) const {
    const Grid& g = *grid_;
    const double ds = ds_[k];
    apply_laplacian(g, u, lap);
    kern::fused_rhs(u.data(), lap.data(), coef_s.data(), (1.0 - theta_) * ds, rhs.data(),
                    static_cast<int>(g.size()));
    if (g.dim == 1) {
        const Tridiag& f = facts_[fact_index_[k]];
        const int ni = g.points_per_axis - 2;
        // Reuse lap as the interior solve buffer.
        lap.resize(static_cast<std::size_t>(ni));
        std::copy(rhs.begin() + 1, rhs.begin() + 1 + ni, lap.begin());
        solve_tridiag(f, lap);
        u[0] = 0.0;
        std::copy(lap.begin(), lap.end(), u.begin() + 1);
        u[g.size() - 1] = 0.0;
        lap.resize(g.size());
    } else {
        zero_boundary(g, rhs);
        solve_cg(ds, rhs, u);
    }
}

Field step(const Field& u, double t, double dt, double dW, const CoefficientSpec& spec,
           const SolverConfig& cfg) {
    const GridPtr& g = u.grid;
    StepOperator op(g, cfg.theta, {dt}, cfg.cg_tol, cfg.cg_max_iter);
    std::vector<double> s(g->size());
    for (std::size_t id = 0; id < g->size(); ++id) {
        const auto p = g->node(id);
        const std::span<const double> x(p.data(), g->dim);
        s[id] = dt * spec.eval_V(t, x) + dW * spec.eval_G(t, x);
    }
    Field out = u;
    std::vector<double> lap(g->size()), rhs(g->size());
    op.advance(0, s, out.v, lap, rhs);
    for (double v : out.v)
        if (!std::isfinite(v)) throw NumericError("nonfinite", "step produced non-finite field");
    return out;
}

Trajectory solve_path(const Field& u0, const CoefficientSpec& spec, const WienerPath& path,
                      const SolverConfig& cfg, const CoefficientTable* table,
                      const StepOperator* op) {
    const GridPtr& g = u0.grid;
    const int K = path.time_grid.steps;

    // Map checkpoint knots (clock-input units) onto step indices.
    std::vector<int> cp_index(cfg.checkpoints.size(), -1);
    for (std::size_t j = 0; j < cfg.checkpoints.size(); ++j) {
        const double t = cfg.checkpoints[j];
        const double q = t * K;
        const int k = static_cast<int>(std::lround(q));
        if (std::fabs(q - k) > 1e-9 || k < 0 || k > K)
            throw ConfigError("checkpoint " + fmt_double(t) + " is not a time-grid knot");
        cp_index[j] = k;
    }

    std::vector<double> ds(K);
    for (int k = 0; k < K; ++k) ds[k] = path.knot_times[k + 1] - path.knot_times[k];

    std::unique_ptr<StepOperator> own_op;
    if (!op) {
        own_op = std::make_unique<StepOperator>(g, cfg.theta, ds, cfg.cg_tol, cfg.cg_max_iter);
        op = own_op.get();
    }
    std::unique_ptr<CoefficientTable> own_table;
    if (!table) {
        std::vector<double> step_starts(K);
        for (int k = 0; k < K; ++k) step_starts[k] = path.knot_times[k];
        own_table =
            std::make_unique<CoefficientTable>(tabulate_coefficients(spec, *g, step_starts));
        table = own_table.get();
    }

    Trajectory traj;
    traj.path_seed = path.seed;
    traj.theta = cfg.theta;
    traj.steps = K;

    std::vector<double> u = u0.v;
    zero_boundary(*g, u);
    std::vector<double> s(g->size()), lap(g->size()), rhs(g->size());

    auto record = [&](int k) {
        for (std::size_t j = 0; j < cp_index.size(); ++j) {
            if (cp_index[j] != k) continue;
            for (double v : u)
                if (!std::isfinite(v))
                    throw NumericError("nonfinite", "trajectory field non-finite at step " +
                                                        std::to_string(k));
            traj.times.push_back(path.knot_times[k]);
            traj.fields.emplace_back(g, u);
        }
    };

    record(0);
    for (int k = 0; k < K; ++k) {
        const auto& Vk = table->V[k];
        const auto& Gk = table->G[k];
        const double dsk = ds[k];
        const double dW = path.increments[k];
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = dsk * Vk[i] + dW * Gk[i];
        op->advance(k, s, u, lap, rhs);
        record(k + 1);
    }
    return traj;
}

namespace {

double l2_diff(const Grid& g, const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += g.quad_coeff(i) * d * d;
    }
    return std::sqrt(acc * g.cell());
}

double fit_order(const std::vector<ConvergenceRow>& rows) {
    // Mean slope of log2(error) against refinement level.
    double acc = 0.0;
    int n = 0;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        if (rows[i].error <= 0.0 || rows[i + 1].error <= 0.0) continue;
        acc += std::log2(rows[i].error / rows[i + 1].error);
        ++n;
    }
    return n ? acc / n : 0.0;
}

} // namespace

ConvergenceReportData convergence_report(const GridPtr& grid, const InitialProfile& u0_fn,
                                         const CoefficientSpec& spec, std::uint64_t master_seed,
                                         int base_steps, int refinements, int paths,
                                         const SolverConfig& cfg) {
    ConvergenceReportData rep;
    SolverConfig end_cfg = cfg;
    end_cfg.checkpoints = {0.0, 1.0};
    SeedLadder ladder{master_seed};
    const Field u0 = sample_field(grid, u0_fn);

    // dt refinement: the same driving path at every level via bridge
    // refinement, op/table shared across paths per level.
    std::vector<std::vector<WienerPath>> plevel(refinements + 1);
    for (int m = 0; m < paths; ++m) {
        WienerPath p =
            sample_path(derive_seed(ladder, static_cast<std::uint64_t>(m)), TimeGrid{base_steps},
                        Clock::identity());
        for (int lvl = 0; lvl <= refinements; ++lvl) {
            plevel[lvl].push_back(p);
            if (lvl < refinements) p = refine_path(p, Clock::identity());
        }
    }
    std::vector<std::vector<std::vector<double>>> sols_dt(refinements + 1);
    for (int lvl = 0; lvl <= refinements; ++lvl) {
        const int K = base_steps << lvl;
        std::vector<double> ds(K, 1.0 / K), starts(K);
        for (int k = 0; k < K; ++k) starts[k] = static_cast<double>(k) / K;
        StepOperator op(grid, cfg.theta, ds, cfg.cg_tol, cfg.cg_max_iter);
        const CoefficientTable table = tabulate_coefficients(spec, *grid, starts);
        for (int m = 0; m < paths; ++m) {
            Trajectory t = solve_path(u0, spec, plevel[lvl][m], end_cfg, &table, &op);
            sols_dt[lvl].push_back(t.fields.back().v);
        }
    }
    for (int lvl = 0; lvl < refinements; ++lvl) {
        std::vector<double> err2(paths);
        for (int m = 0; m < paths; ++m) {
            const double e = l2_diff(*grid, sols_dt[lvl][m], sols_dt[lvl + 1][m]);
            err2[m] = e * e;
        }
        rep.dt_rows.push_back(
            {lvl, 1.0 / (base_steps << lvl), std::sqrt(pairwise_sum(err2) / paths)});
    }
    rep.dt_order = fit_order(rep.dt_rows);

    // h refinement for the noiseless problem at a fixed fine time step.
    if (grid->dim == 1) {
        CoefficientSpec det = spec;
        det.G = nullptr;
        det.gradG = nullptr;
        const int K = base_steps << refinements;
        const int n0 = grid->points_per_axis;
        std::vector<std::vector<double>> sols;
        std::vector<GridPtr> grids;
        WienerPath p = sample_path(derive_seed(ladder, 0), TimeGrid{K}, Clock::identity());
        for (int lvl = 0; lvl <= refinements; ++lvl) {
            auto gl = make_grid(1, grid->half_width, ((n0 - 1) << lvl) + 1);
            Trajectory t = solve_path(sample_field(gl, u0_fn), det, p, end_cfg);
            sols.push_back(t.fields.back().v);
            grids.push_back(gl);
        }
        for (int lvl = 0; lvl < refinements; ++lvl) {
            std::vector<double> restr(grids[lvl]->size());
            for (std::size_t i = 0; i < restr.size(); ++i) restr[i] = sols[lvl + 1][2 * i];
            rep.h_rows.push_back({lvl, grids[lvl]->spacing, l2_diff(*grids[lvl], sols[lvl], restr)});
        }
        rep.h_order = fit_order(rep.h_rows);
    }
    return rep;
}

} // namespace shelab
