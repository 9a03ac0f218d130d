#include "shelab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shelab {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "FAIL";
}

std::string series_column(const char* base, int j) {
    return std::string(base) + "@" + std::to_string(j);
}

namespace {

constexpr double kLogMax = 709.0;

const char* const kSeriesBases[] = {"H", "EV", "HG", "D", "DG", "NGF", "X2F"};
constexpr int kSeriesWidth = 7;

struct CheckpointData {
    double t = 0.0;
    LogWeightValues logw;
    std::vector<double> V, G;
    // Translated-weight multipliers for the completed-square form of (Sv,v).
    std::vector<double> shifted_sq; // |x + (c+d) e1|^2
    std::vector<double> x1c;        // x1 + R t(1-t)
    double Sconst = 0.0;            // R^2 (1/12 - (1-2t)/(16 mu) + 1/(64 mu^2))
};

struct SeriesContext {
    GridPtr grid;
    WeightSpec weight;
    std::vector<CheckpointData> cps;
    std::vector<double> x2; // |x|^2 per node
};

// f = e^w u nodewise; throws on summands beyond double range.
void weighted_field(const std::vector<double>& u, const LogWeightValues& w,
                    std::vector<double>& f) {
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0.0) {
            f[i] = 0.0;
            continue;
        }
        const double s = w[i] + std::log(std::fabs(u[i]));
        if (2.0 * s > kLogMax)
            throw NumericError("overflow", "weighted field overflows at node " + std::to_string(i));
        f[i] = std::copysign(std::exp(s), u[i]);
    }
}

double quad_sum_sq(const Grid& g, const std::vector<double>& f) {
    std::vector<double> terms(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) terms[i] = g.quad_coeff(i) * f[i] * f[i];
    return pairwise_sum(terms) * g.cell();
}

double quad_sum_msq(const Grid& g, const std::vector<double>& m, const std::vector<double>& f) {
    std::vector<double> terms(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) terms[i] = g.quad_coeff(i) * m[i] * f[i] * f[i];
    return pairwise_sum(terms) * g.cell();
}

double grad_norm_sq(const GridPtr& gp, const std::vector<double>& f) {
    Field tmp(gp, f);
    const VectorField grad = gradient(tmp);
    double acc = 0.0;
    for (int a = 0; a < gp->dim; ++a) acc += quad_sum_sq(*gp, grad.comp[a]);
    return acc;
}

} // namespace

PathEvaluator make_series_evaluator(const GridPtr& grid, const WeightSpec& weight,
                                    const CoefficientSpec& spec,
                                    std::span<const double> checkpoints) {
    using Kind = WeightSpec::Kind;
    if (weight.kind != Kind::quadratic && weight.kind != Kind::translated)
        throw ConfigError("series evaluator supports the static quadratic and translated "
                          "weight families (analytic grad phi)");

    auto ctx = std::make_shared<SeriesContext>();
    ctx->grid = grid;
    ctx->weight = weight;
    ctx->x2.resize(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) ctx->x2[i] = grid->radius2(i);
    for (double t : checkpoints) {
        CheckpointData cd;
        cd.t = t;
        cd.logw = tabulate_log_weight(weight, *grid, t);
        cd.V.resize(grid->size());
        cd.G.resize(grid->size());
        for (std::size_t i = 0; i < grid->size(); ++i) {
            const auto p = grid->node(i);
            const std::span<const double> x(p.data(), grid->dim);
            cd.V[i] = spec.eval_V(t, x);
            cd.G[i] = spec.eval_G(t, x);
        }
        if (weight.kind == Kind::translated) {
            const double mu = weight.mu, R = weight.R;
            const double c = R * t * (1.0 - t);
            const double d = (4.0 * mu * (1.0 - 2.0 * t) - 1.0) * R / (16.0 * mu * mu);
            cd.shifted_sq.resize(grid->size());
            cd.x1c.resize(grid->size());
            for (std::size_t i = 0; i < grid->size(); ++i) {
                const auto p = grid->node(i);
                const double x1 = p[0] + c + d;
                const double x2r = grid->dim > 1 ? p[1] : 0.0;
                cd.shifted_sq[i] = x1 * x1 + x2r * x2r;
                cd.x1c[i] = p[0] + c;
            }
            cd.Sconst = R * R *
                        (1.0 / 12.0 - (1.0 - 2.0 * t) / (16.0 * mu) + 1.0 / (64.0 * mu * mu));
        }
        ctx->cps.push_back(std::move(cd));
    }

    PathEvaluator ev;
    const int J = static_cast<int>(checkpoints.size());
    for (const char* base : kSeriesBases)
        for (int j = 0; j < J; ++j) ev.columns.push_back(series_column(base, j));

    ev.eval = [ctx, J](const Trajectory& traj, std::span<double> row) {
        const Grid& g = *ctx->grid;
        if (static_cast<int>(traj.fields.size()) != J)
            throw ConfigError("trajectory checkpoint count does not match the series evaluator");
        std::vector<double> f(g.size()), v(g.size());
        auto put = [&](int base, int j, double val) { row[base * J + j] = val; };
        for (int j = 0; j < J; ++j) {
            const CheckpointData& cd = ctx->cps[j];
            if (std::fabs(traj.times[j] - cd.t) > 1e-9)
                throw ConfigError("trajectory time does not match series checkpoint");
            const std::vector<double>& u = traj.fields[j].v;
            weighted_field(u, cd.logw, f);

            const double H = quad_sum_sq(g, f);
            const double EV = quad_sum_msq(g, cd.V, f);
            std::vector<double> g2(cd.G.size());
            for (std::size_t i = 0; i < g2.size(); ++i) g2[i] = cd.G[i] * cd.G[i];
            const double HG = quad_sum_msq(g, g2, f);
            const double ngf = grad_norm_sq(ctx->grid, f);
            const double x2f = quad_sum_msq(g, ctx->x2, f);

            double D, DG;
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = cd.G[i] * f[i];
            const double ngv = grad_norm_sq(ctx->grid, v);
            if (ctx->weight.kind == WeightSpec::Kind::quadratic) {
                const double gamma = ctx->weight.gamma;
                D = -ngf + 4.0 * gamma * gamma * x2f;
                DG = -ngv + 4.0 * gamma * gamma * quad_sum_msq(g, ctx->x2, v);
            } else {
                const double mu = ctx->weight.mu, R = ctx->weight.R;
                auto Sform = [&](const std::vector<double>& w, double nggrad) {
                    return -nggrad + 4.0 * mu * mu * quad_sum_msq(g, cd.shifted_sq, w) +
                           0.5 * R * quad_sum_msq(g, cd.x1c, w) - cd.Sconst * quad_sum_sq(g, w);
                };
                D = Sform(f, ngf);
                DG = Sform(v, ngv);
            }
            put(0, j, H);
            put(1, j, EV);
            put(2, j, HG);
            put(3, j, D);
            put(4, j, DG);
            put(5, j, ngf);
            put(6, j, x2f);
        }
    };
    return ev;
}

std::vector<double> f_correction(std::span<const double> t, std::span<const double> H,
                                 std::span<const double> EV, std::span<const double> HG) {
    std::vector<double> F(t.size(), 0.0), rate(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
        if (!(H[j] > 0.0))
            throw NumericError("dead-ensemble",
                               "H vanished at t = " + fmt_double(t[j]) + "; F is undefined");
        rate[j] = -2.0 * EV[j] / H[j] - HG[j] / H[j];
    }
    for (std::size_t j = 1; j < t.size(); ++j)
        F[j] = F[j - 1] + 0.5 * (rate[j - 1] + rate[j]) * (t[j] - t[j - 1]);
    return F;
}

FunctionalSeries assemble_series(const RunResult& run, const WeightSpec& weight,
                                 const CoefficientBounds& bounds,
                                 std::span<const double> checkpoints,
                                 const std::string& column_prefix) {
    FunctionalSeries s;
    s.t.assign(checkpoints.begin(), checkpoints.end());
    s.weight = weight;
    s.bounds = bounds;
    s.paths = run.paths;
    const int J = static_cast<int>(checkpoints.size());
    auto grab = [&](const char* base) {
        std::vector<Summary> col(J);
        for (int j = 0; j < J; ++j) col[j] = run.stat(column_prefix + series_column(base, j));
        return col;
    };
    s.H = grab("H");
    s.EV = grab("EV");
    s.HG = grab("HG");
    s.D = grab("D");
    s.DG = grab("DG");
    s.NGF = grab("NGF");
    s.X2F = grab("X2F");
    std::vector<double> Hm(J), EVm(J), HGm(J);
    for (int j = 0; j < J; ++j) {
        Hm[j] = s.H[j].mean;
        EVm[j] = s.EV[j].mean;
        HGm[j] = s.HG[j].mean;
    }
    s.F = f_correction(s.t, Hm, EVm, HGm);
    s.Q.resize(J);
    for (int j = 0; j < J; ++j)
        s.Q[j] = s.F[j] + s.t[j] * (1.0 - s.t[j]) * bounds.M * bounds.M;
    return s;
}

ConvexityReport convexity_check(const FunctionalSeries& s, double defect_floor,
                                double tolerance_scale, double interpolation_offset) {
    const int J = static_cast<int>(s.t.size());
    if (J < 3) throw ConfigError("convexity check needs at least 3 checkpoints");
    const double dt = s.t[1] - s.t[0];
    for (int j = 1; j < J; ++j)
        if (std::fabs(s.t[j] - s.t[j - 1] - dt) > 1e-9)
            throw ConfigError("convexity check needs uniform checkpoints");

    ConvexityReport rep;
    rep.defect_floor = defect_floor;

    bool inconclusive = false;
    for (int j = 0; j < J; ++j) {
        if (!(s.H[j].mean > 0.0))
            throw NumericError("dead-ensemble", "H estimate non-positive at checkpoint " +
                                                    std::to_string(j));
        if (s.paths > 1 && s.H[j].mean < 10.0 * s.H[j].stderr_) inconclusive = true;
    }

    rep.g.resize(J);
    for (int j = 0; j < J; ++j) rep.g[j] = std::log(s.H[j].mean) + s.Q[j];

    double max_d3 = 0.0;
    for (int j = 0; j + 3 < J; ++j) {
        const double d3 = rep.g[j + 3] - 3.0 * rep.g[j + 2] + 3.0 * rep.g[j + 1] - rep.g[j];
        max_d3 = std::max(max_d3, std::fabs(d3));
    }
    rep.allowance = 10.0 * max_d3 / (dt * dt);

    bool all_pass = true;
    for (int j = 1; j + 1 < J; ++j) {
        ConvexityPoint pt;
        pt.t = s.t[j];
        pt.second_diff = (rep.g[j - 1] - 2.0 * rep.g[j] + rep.g[j + 1]) / (dt * dt);
        const double se_prev = s.H[j - 1].stderr_ / s.H[j - 1].mean;
        const double se_mid = s.H[j].stderr_ / s.H[j].mean;
        const double se_next = s.H[j + 1].stderr_ / s.H[j + 1].mean;
        const double mc =
            3.0 * std::sqrt(se_prev * se_prev + 4.0 * se_mid * se_mid + se_next * se_next) /
            (dt * dt);
        pt.tolerance = (mc + rep.allowance) * tolerance_scale;
        pt.pass = pt.second_diff >= defect_floor - pt.tolerance;
        all_pass = all_pass && pt.pass;
        rep.points.push_back(pt);
    }

    // Interpolation constant: smallest N with
    // log H(t) <= N*(M+M^2+M0^2+M1^2) + offset + (1-t) log H(0) + t log H(1).
    const double denom = s.bounds.M + s.bounds.M * s.bounds.M + s.bounds.M0 * s.bounds.M0 +
                         s.bounds.M1 * s.bounds.M1;
    const double lh0 = std::log(s.H.front().mean);
    const double lh1 = std::log(s.H.back().mean);
    double excess = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < J; ++j) {
        const double chord = (1.0 - s.t[j]) * lh0 + s.t[j] * lh1;
        excess = std::max(excess, std::log(s.H[j].mean) - chord - interpolation_offset);
    }
    rep.interpolation_excess = excess;
    rep.calibrated_N = (denom > 0.0) ? std::max(0.0, excess / denom) : 0.0;

    rep.verdict = inconclusive ? Verdict::Inconclusive
                               : (all_pass ? Verdict::Pass : Verdict::Fail);
    return rep;
}

namespace {
int checkpoint_index(std::span<const double> cps, double t) {
    for (std::size_t j = 0; j < cps.size(); ++j)
        if (std::fabs(cps[j] - t) <= 1e-9) return static_cast<int>(j);
    throw ConfigError("t = " + fmt_double(t) + " is not a checkpoint");
}
} // namespace

MomentEstimate weighted_moment(const RunResult& run, std::span<const double> cps, double t) {
    const auto& st = run.stat(series_column("H", checkpoint_index(cps, t)));
    return {st.mean, st.stderr_};
}
MomentEstimate dirichlet_form(const RunResult& run, std::span<const double> cps, double t) {
    const auto& st = run.stat(series_column("D", checkpoint_index(cps, t)));
    return {st.mean, st.stderr_};
}
MomentEstimate dg_form(const RunResult& run, std::span<const double> cps, double t) {
    const auto& st = run.stat(series_column("DG", checkpoint_index(cps, t)));
    return {st.mean, st.stderr_};
}

PathEvaluator make_energy_evaluator(const GridPtr& grid, double gamma,
                                    std::span<const double> checkpoints) {
    auto weights = std::make_shared<std::vector<LogWeightValues>>();
    const WeightSpec w = WeightSpec::quadratic(gamma, /*time_dependent=*/true);
    for (double t : checkpoints) weights->push_back(tabulate_log_weight(w, *grid, t));

    PathEvaluator ev;
    ev.columns = {"SUPW", "W0"};
    const int J = static_cast<int>(checkpoints.size());
    ev.eval = [weights, J](const Trajectory& traj, std::span<double> row) {
        if (static_cast<int>(traj.fields.size()) != J)
            throw ConfigError("trajectory checkpoint count does not match the energy evaluator");
        double sup = 0.0, w0 = 0.0;
        for (int j = 0; j < J; ++j) {
            const double val = weighted_l2_sq(traj.fields[j], (*weights)[j]);
            if (j == 0) w0 = val;
            sup = std::max(sup, val);
        }
        row[0] = sup;
        row[1] = w0;
    };
    return ev;
}

EnergyReport energy_check(const RunResult& run, double mgv, double tolerance,
                          double tolerance_scale) {
    EnergyReport rep;
    rep.mgv = mgv;
    rep.tolerance = tolerance * tolerance_scale;
    const Summary& sup = run.stat("SUPW");
    const Summary& w0 = run.stat("W0");
    rep.lhs = sup.mean;
    rep.lhs_stderr = sup.stderr_;
    rep.rhs0 = w0.mean;
    rep.rhs0_stderr = w0.stderr_;
    if (!(rep.rhs0 > 0.0)) {
        // Zero data: the estimate is the trivial 0 <= 0.
        rep.min_C = 0.0;
        rep.verdict = rep.lhs == 0.0 ? Verdict::Pass : Verdict::Fail;
        return rep;
    }
    if (mgv > 0.0) {
        rep.min_C = std::log(rep.lhs / rep.rhs0) / mgv;
        rep.verdict = std::isfinite(rep.min_C) ? Verdict::Pass : Verdict::Fail;
    } else {
        rep.min_C = 0.0;
        rep.verdict = rep.lhs <= rep.rhs0 * (1.0 + rep.tolerance) ? Verdict::Pass : Verdict::Fail;
    }
    return rep;
}

PathEvaluator make_integrated_evaluator(const GridPtr& grid, double gamma,
                                        std::span<const double> checkpoints) {
    auto logw = std::make_shared<LogWeightValues>(
        tabulate_log_weight(WeightSpec::quadratic(gamma), *grid, 0.0));
    auto x2 = std::make_shared<std::vector<double>>(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) (*x2)[i] = grid->radius2(i);

    PathEvaluator ev;
    const int J = static_cast<int>(checkpoints.size());
    for (const char* base : {"IH", "IX2", "IGR", "PL"})
        for (int j = 0; j < J; ++j) ev.columns.push_back(series_column(base, j));
    ev.eval = [logw, x2, J](const Trajectory& traj, std::span<double> row) {
        for (int j = 0; j < J; ++j) {
            const Field& u = traj.fields[j];
            row[0 * J + j] = weighted_l2_sq(u, *logw);
            row[1 * J + j] = weighted_quad_sq(u, *logw, *x2);
            const VectorField gr = gradient(u);
            Field mag(u.grid);
            for (std::size_t i = 0; i < mag.v.size(); ++i) {
                double a2 = 0.0;
                for (int ax = 0; ax < u.grid->dim; ++ax) a2 += gr.comp[ax][i] * gr.comp[ax][i];
                mag.v[i] = std::sqrt(a2);
            }
            row[2 * J + j] = weighted_l2_sq(mag, *logw);
            row[3 * J + j] = inner(u, u);
        }
    };
    return ev;
}

namespace {
double trapz(std::span<const double> t, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t j = 1; j < t.size(); ++j)
        acc += 0.5 * (y[j - 1] + y[j]) * (t[j] - t[j - 1]);
    return acc;
}
} // namespace

IntegratedReport integrated_estimate_check(const RunResult& run,
                                           std::span<const double> cps) {
    const int J = static_cast<int>(cps.size());
    IntegratedReport rep;
    std::vector<double> ih(J), ix2(J), igr(J), pl(J);
    for (int j = 0; j < J; ++j) {
        ih[j] = run.stat(series_column("IH", j)).mean;
        const double tw = cps[j] * (1.0 - cps[j]);
        ix2[j] = tw * run.stat(series_column("IX2", j)).mean;
        igr[j] = tw * run.stat(series_column("IGR", j)).mean;
        pl[j] = run.stat(series_column("PL", j)).mean;
        rep.sup_plain = std::max(rep.sup_plain, pl[j]);
    }
    rep.int_H = trapz(cps, ih);
    rep.int_x2 = trapz(cps, ix2);
    rep.int_grad = trapz(cps, igr);
    rep.data_H0 = ih.front();
    rep.data_H1 = ih.back();
    const double data = rep.data_H0 + rep.data_H1 + rep.sup_plain;
    rep.min_N = data > 0.0 ? (rep.int_H + rep.int_x2 + rep.int_grad) / data : 0.0;
    rep.verdict = std::isfinite(rep.min_N) ? Verdict::Pass : Verdict::Fail;
    return rep;
}

PathEvaluator make_interior_evaluator(const GridPtr& grid,
                                      std::shared_ptr<const MollifiedWeight> w,
                                      std::span<const double> checkpoints) {
    auto logw = std::make_shared<LogWeightValues>(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const auto p = grid->node(i);
        (*logw)[i] = w->at(std::span<const double>(p.data(), grid->dim));
    }
    PathEvaluator ev;
    const int J = static_cast<int>(checkpoints.size());
    for (const char* base : {"GRW", "D2W"})
        for (int j = 0; j < J; ++j) ev.columns.push_back(series_column(base, j));
    ev.eval = [logw, J](const Trajectory& traj, std::span<double> row) {
        for (int j = 0; j < J; ++j) {
            const Field& u = traj.fields[j];
            const Grid& g = *u.grid;
            const VectorField gr = gradient(u);
            Field mag(u.grid);
            for (std::size_t i = 0; i < mag.v.size(); ++i) {
                double a2 = 0.0;
                for (int ax = 0; ax < g.dim; ++ax) a2 += gr.comp[ax][i] * gr.comp[ax][i];
                mag.v[i] = std::sqrt(a2);
            }
            row[0 * J + j] = weighted_l2_sq(mag, *logw);

            // Frobenius norm of the second-difference Hessian.
            Field hess(u.grid);
            const int n = g.points_per_axis;
            const double ih2 = 1.0 / (g.spacing * g.spacing);
            if (g.dim == 1) {
                for (int i = 0; i < n; ++i) {
                    const double l = i > 0 ? u.v[i - 1] : 0.0;
                    const double r = i + 1 < n ? u.v[i + 1] : 0.0;
                    hess.v[i] = std::fabs(((l + r) - 2.0 * u.v[i]) * ih2);
                }
            } else {
                const double i4h2 = 1.0 / (4.0 * g.spacing * g.spacing);
                auto at = [&](int ix, int iy) -> double {
                    if (ix < 0 || iy < 0 || ix >= n || iy >= n) return 0.0;
                    return u.v[static_cast<std::size_t>(iy) * n + ix];
                };
                for (int iy = 0; iy < n; ++iy)
                    for (int ix = 0; ix < n; ++ix) {
                        const double uc = at(ix, iy);
                        const double uxx = (at(ix - 1, iy) + at(ix + 1, iy) - 2.0 * uc) * ih2;
                        const double uyy = (at(ix, iy - 1) + at(ix, iy + 1) - 2.0 * uc) * ih2;
                        const double uxy = (at(ix + 1, iy + 1) - at(ix - 1, iy + 1) -
                                            at(ix + 1, iy - 1) + at(ix - 1, iy - 1)) *
                                           i4h2;
                        hess.v[static_cast<std::size_t>(iy) * n + ix] =
                            std::sqrt(uxx * uxx + uyy * uyy + 2.0 * uxy * uxy);
                    }
            }
            row[1 * J + j] = weighted_l2_sq(hess, *logw);
        }
    };
    return ev;
}

InteriorReport interior_finiteness_check(const RunResult& run, std::span<const double> cps,
                                         double eps) {
    InteriorReport rep;
    rep.eps = eps;
    std::vector<double> ts, d2;
    const int J = static_cast<int>(cps.size());
    for (int j = 0; j < J; ++j) {
        if (cps[j] + 1e-12 < eps) continue;
        rep.sup_grad = std::max(rep.sup_grad, run.stat(series_column("GRW", j)).mean);
        ts.push_back(cps[j]);
        d2.push_back(run.stat(series_column("D2W", j)).mean);
    }
    rep.int_d2 = trapz(ts, d2);
    return rep;
}

} // namespace shelab
