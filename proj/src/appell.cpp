#include "shelab/appell.hpp"

#include <algorithm>
#include <cmath>

#include "shelab/rng.hpp"
#include "shelab/weights.hpp"

namespace shelab {

AppellParams make_params(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw ConfigError("appell params need alpha, beta > 0");
    AppellParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.kappa = std::sqrt(alpha / beta) - std::sqrt(beta / alpha);

    if (std::fabs(p.b(1.0) - 1.0) > 1e-12)
        throw NumericError("appell", "b(1) != 1 for the requested parameters");
    // Construction identities on a pseudo-random interior sample.
    const double fd = 1e-6;
    for (int i = 0; i < 100; ++i) {
        const double t = 0.01 + 0.98 * u64_to_unit(splitmix64(0xA99E11u + i));
        const double at = p.a(t);
        const double da = (p.a(t + fd) - p.a(t - fd)) / (2.0 * fd);
        const double db = (p.b(t + fd) - p.b(t - fd)) / (2.0 * fd);
        const double scale = std::max(1.0, at * at);
        if (std::fabs(da - p.kappa * at * at) > 1e-8 * scale * std::max(1.0, std::fabs(p.kappa)))
            throw NumericError("appell", "a' = kappa a^2 failed numerically");
        if (std::fabs(db - at * at) > 1e-8 * scale)
            throw NumericError("appell", "b' = a^2 failed numerically");
        if (std::fabs(at * p.a(1.0 - p.b(t)) - 1.0) > 1e-10)
            throw NumericError("appell", "a(t) a(1 - b(t)) = 1 failed numerically");
    }
    return p;
}

namespace {

// 4-point Lagrange interpolation on the uniform source grid; zero outside.
double interp1d(const Grid& g, const double* v, double z, bool* outside) {
    const double L = g.half_width, h = g.spacing;
    const int n = g.points_per_axis;
    if (z < -L || z > L) {
        if (outside) *outside = true;
        return 0.0;
    }
    double q = (z + L) / h;
    int i1 = static_cast<int>(std::floor(q));
    // Stencil nodes i1-1 .. i1+2, shifted inside near the edges.
    int lo = std::clamp(i1 - 1, 0, n - 4);
    const double t = q - lo; // position relative to the stencil start, in cells
    const double w0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double w1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double w2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double w3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    return w0 * v[lo] + w1 * v[lo + 1] + w2 * v[lo + 2] + w3 * v[lo + 3];
}

double interp_at(const Grid& g, const std::vector<double>& v, double zx, double zy,
                 bool* outside) {
    if (g.dim == 1) return interp1d(g, v.data(), zx, outside);
    const double L = g.half_width, h = g.spacing;
    const int n = g.points_per_axis;
    if (zx < -L || zx > L || zy < -L || zy > L) {
        if (outside) *outside = true;
        return 0.0;
    }
    const double qy = (zy + L) / h;
    int lo = std::clamp(static_cast<int>(std::floor(qy)) - 1, 0, n - 4);
    const double t = qy - lo;
    const double wy[4] = {-(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0,
                          t * (t - 2.0) * (t - 3.0) / 2.0,
                          -t * (t - 1.0) * (t - 3.0) / 2.0,
                          t * (t - 1.0) * (t - 2.0) / 6.0};
    Grid g1 = g;
    g1.dim = 1;
    double acc = 0.0;
    for (int k = 0; k < 4; ++k)
        acc += wy[k] * interp1d(g1, v.data() + static_cast<std::size_t>(lo + k) * n, zx, outside);
    return acc;
}

} // namespace

Field transform_field(const Trajectory& u_traj, const AppellParams& p, double t,
                      double gamma_mass, TransformStats* stats) {
    const double s = p.b(t);
    const Field& usrc = u_traj.at(s);
    const Grid& g = *usrc.grid;
    const double at = p.a(t);
    const double pref = std::pow(at, 0.5 * g.dim);

    Field y(usrc.grid);
    double mass_total = 0.0, mass_extrap = 0.0;
    for (std::size_t id = 0; id < g.size(); ++id) {
        const auto x = g.node(id);
        bool outside = false;
        double val = interp_at(g, usrc.v, at * x[0], at * x[1], &outside);
        if (outside) {
            // Estimate what the node would carry from the nearest edge sample.
            const double cx = std::clamp(at * x[0], -g.half_width + g.spacing,
                                         g.half_width - g.spacing);
            const double cy = g.dim == 1 ? 0.0
                                         : std::clamp(at * x[1], -g.half_width + g.spacing,
                                                      g.half_width - g.spacing);
            val = interp_at(g, usrc.v, cx, cy, nullptr);
        }
        const double r2 = x[0] * x[0] + x[1] * x[1];
        const double yval = pref * val * std::exp(at * p.kappa * r2 / 4.0);
        const double wmass = g.quad_coeff(id) * std::exp(2.0 * gamma_mass * r2) * yval * yval;
        mass_total += wmass;
        if (outside) {
            mass_extrap += wmass;
            y.v[id] = 0.0;
        } else {
            y.v[id] = yval;
        }
    }
    if (stats) {
        stats->extrap_weighted_fraction = mass_total > 0.0 ? mass_extrap / mass_total : 0.0;
        stats->degraded = stats->extrap_weighted_fraction > 0.01;
    }
    return y;
}

double norm_identity_exponent(const AppellParams& p, double gamma, double s) {
    const double a1s = p.a(1.0 - s);
    return gamma * a1s * a1s + p.kappa * a1s / 4.0;
}

TransformedProblem transform_coefficients(const CoefficientSpec& spec, const AppellParams& p,
                                          const Grid& grid,
                                          std::span<const double> time_samples) {
    TransformedProblem out;
    out.params = p;
    CoefficientSpec& ts = out.spec;
    if (spec.V) {
        ts.V = [p, inner = spec.V](double t, std::span<const double> x) {
            const double at = p.a(t);
            double z[2] = {at * x[0], x.size() > 1 ? at * x[1] : 0.0};
            return at * at * inner(p.b(t), std::span<const double>(z, x.size()));
        };
    }
    if (spec.G) {
        ts.G = [p, inner = spec.G](double t, std::span<const double> x) {
            const double at = p.a(t);
            double z[2] = {at * x[0], x.size() > 1 ? at * x[1] : 0.0};
            // sqrt(b'(t)) = a(t)
            return at * inner(p.b(t), std::span<const double>(z, x.size()));
        };
    }
    if (spec.gradG_analytic && spec.gradG) {
        ts.gradG = [p, inner = spec.gradG](double t, std::span<const double> x,
                                           std::span<double> outg) {
            const double at = p.a(t);
            double z[2] = {at * x[0], x.size() > 1 ? at * x[1] : 0.0};
            inner(p.b(t), std::span<const double>(z, x.size()), outg);
            for (auto& v : outg) v *= at * at; // chain rule on top of the a(t) amplitude
        };
        ts.gradG_analytic = true;
    }
    ts.descriptor = "appell(" + fmt_double(p.alpha) + "," + fmt_double(p.beta) + "):" +
                    spec.descriptor;
    ts.params = spec.params;
    ts.params["appell_alpha"] = p.alpha;
    ts.params["appell_beta"] = p.beta;
    out.bounds = estimate_bounds(ts, grid, time_samples);
    return out;
}

PathEvaluator make_norm_identity_evaluator(const GridPtr& grid, const AppellParams& p,
                                           double gamma, std::vector<double> times) {
    PathEvaluator ev;
    const int J = static_cast<int>(times.size());
    for (const char* base : {"LHS", "RHS", "EXF"})
        for (int j = 0; j < J; ++j) ev.columns.push_back(std::string(base) + "@" + std::to_string(j));
    // Precompute the gamma-weight and the u-side exponent weights.
    auto lw_y = std::make_shared<LogWeightValues>(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) (*lw_y)[i] = gamma * grid->radius2(i);
    auto lw_u = std::make_shared<std::vector<LogWeightValues>>();
    for (double t : times) {
        const double c = norm_identity_exponent(p, gamma, p.b(t));
        LogWeightValues w(grid->size());
        for (std::size_t i = 0; i < grid->size(); ++i) w[i] = c * grid->radius2(i);
        lw_u->push_back(std::move(w));
    }
    ev.eval = [grid, p, gamma, times, lw_y, lw_u, J](const Trajectory& traj,
                                                     std::span<double> row) {
        for (int j = 0; j < J; ++j) {
            TransformStats st;
            const Field y = transform_field(traj, p, times[j], gamma, &st);
            row[0 * J + j] = weighted_l2_sq(y, *lw_y);
            row[1 * J + j] = weighted_l2_sq(traj.at(p.b(times[j])), (*lw_u)[j]);
            row[2 * J + j] = st.extrap_weighted_fraction;
        }
    };
    return ev;
}

PathEvaluator make_transformed_moment_evaluator(const GridPtr& grid, const AppellParams& p,
                                                double gamma, std::vector<double> times) {
    PathEvaluator ev;
    const int J = static_cast<int>(times.size());
    for (const char* base : {"NORM", "HW"})
        for (int j = 0; j < J; ++j) ev.columns.push_back(std::string(base) + "@" + std::to_string(j));
    auto lw = std::make_shared<LogWeightValues>(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) (*lw)[i] = gamma * grid->radius2(i);
    auto zero = std::make_shared<LogWeightValues>(grid->size(), 0.0);
    ev.eval = [p, gamma, times, lw, zero, J](const Trajectory& traj, std::span<double> row) {
        for (int j = 0; j < J; ++j) {
            const Field y = transform_field(traj, p, times[j], gamma, nullptr);
            row[0 * J + j] = weighted_l2_sq(y, *zero);
            row[1 * J + j] = weighted_l2_sq(y, *lw);
        }
    };
    return ev;
}

PathEvaluator make_direct_moment_evaluator(const GridPtr& grid, double gamma,
                                           std::vector<double> times) {
    PathEvaluator ev;
    const int J = static_cast<int>(times.size());
    for (const char* base : {"NORM", "HW"})
        for (int j = 0; j < J; ++j) ev.columns.push_back(std::string(base) + "@" + std::to_string(j));
    auto lw = std::make_shared<LogWeightValues>(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) (*lw)[i] = gamma * grid->radius2(i);
    auto zero = std::make_shared<LogWeightValues>(grid->size(), 0.0);
    ev.eval = [times, lw, zero, J](const Trajectory& traj, std::span<double> row) {
        for (int j = 0; j < J; ++j) {
            const Field& u = traj.at(times[j]);
            row[0 * J + j] = weighted_l2_sq(u, *zero);
            row[1 * J + j] = weighted_l2_sq(u, *lw);
        }
    };
    return ev;
}

} // namespace shelab
