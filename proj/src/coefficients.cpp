#include "shelab/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shelab {

void CoefficientSpec::eval_gradG(double t, std::span<const double> x,
                                 std::span<double> out) const {
    if (gradG_analytic && gradG) {
        gradG(t, x, out);
        return;
    }
    if (!G) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    const double e = fd_step;
    double pt[2] = {x[0], x.size() > 1 ? x[1] : 0.0};
    for (std::size_t axis = 0; axis < out.size(); ++axis) {
        const double x0 = pt[axis];
        auto at = [&](double xv) {
            pt[axis] = xv;
            const double g = G(t, std::span<const double>(pt, x.size()));
            pt[axis] = x0;
            return g;
        };
        out[axis] = (-at(x0 + 2 * e) + 8.0 * at(x0 + e) - 8.0 * at(x0 - e) + at(x0 - 2 * e)) /
                    (12.0 * e);
    }
}

namespace {
constexpr double kSafety = 1.0 + 1e-6;

void check_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw NumericError("nonfinite", std::string("coefficient evaluation produced a non-finite ") + what);
}
} // namespace

CoefficientBounds estimate_bounds(const CoefficientSpec& spec, const Grid& grid,
                                  std::span<const double> time_samples) {
    double mv = 0.0, mg = 0.0, mdg = 0.0;
    double gbuf[2];
    for (double t : time_samples) {
        for (std::size_t id = 0; id < grid.size(); ++id) {
            const auto p = grid.node(id);
            const std::span<const double> x(p.data(), grid.dim);
            const double v = spec.eval_V(t, x);
            const double g = spec.eval_G(t, x);
            check_finite(v, "V");
            check_finite(g, "G");
            mv = std::max(mv, std::fabs(v));
            mg = std::max(mg, std::fabs(g));
            std::span<double> gout(gbuf, static_cast<std::size_t>(grid.dim));
            spec.eval_gradG(t, x, gout);
            double n2 = 0.0;
            for (int a = 0; a < grid.dim; ++a) {
                check_finite(gbuf[a], "grad G");
                n2 += gbuf[a] * gbuf[a];
            }
            mdg = std::max(mdg, std::sqrt(n2));
        }
    }
    CoefficientBounds b;
    b.M = mv * kSafety;
    b.M0 = mg * kSafety;
    b.M1 = mdg * kSafety;
    b.MGV = b.M0 * b.M0 + 2.0 * b.M;
    return b;
}

namespace {

AssumptionReport check_decay(const char* id, const CoefficientSpec& spec, double gamma,
                             double epsilon, const Grid& grid,
                             std::span<const double> time_samples, double region_radius,
                             double bound_scale) {
    if (gamma <= 0.0 || epsilon <= 0.0)
        throw ConfigError("assumption check needs gamma > 0 and epsilon > 0");
    AssumptionReport rep;
    rep.assumption_id = id;
    rep.gamma = gamma;
    rep.epsilon = epsilon;
    rep.worst_violation = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (double t : time_samples) {
        for (std::size_t idn = 0; idn < grid.size(); ++idn) {
            const double r = std::sqrt(grid.radius2(idn));
            if (r < region_radius) continue;
            const auto p = grid.node(idn);
            const std::span<const double> x(p.data(), grid.dim);
            const double g = std::fabs(spec.eval_G(t, x));
            const double bound = bound_scale * std::pow(r, -epsilon);
            const double viol = g - bound;
            if (viol > rep.worst_violation) {
                rep.worst_violation = viol;
                rep.witness_t = t;
                rep.witness_x.assign(p.begin(), p.begin() + grid.dim);
            }
            any = true;
        }
    }
    if (!any) {
        rep.worst_violation = 0.0;
        rep.pass = true;
        return rep;
    }
    rep.pass = rep.worst_violation <= 0.0;

    // Tail trend of |V| and |grad G| over the outer shells; reported only.
    const double L = grid.half_width;
    double gbuf[2];
    for (double Lp : {0.5 * L, 0.75 * L, L}) {
        double sv = 0.0, sg = 0.0;
        for (double t : time_samples) {
            for (std::size_t idn = 0; idn < grid.size(); ++idn) {
                if (std::sqrt(grid.radius2(idn)) < Lp) continue;
                const auto p = grid.node(idn);
                const std::span<const double> x(p.data(), grid.dim);
                sv = std::max(sv, std::fabs(spec.eval_V(t, x)));
                std::span<double> gout(gbuf, static_cast<std::size_t>(grid.dim));
                spec.eval_gradG(t, x, gout);
                double n2 = 0.0;
                for (int a = 0; a < grid.dim; ++a) n2 += gbuf[a] * gbuf[a];
                sg = std::max(sg, std::sqrt(n2));
            }
        }
        rep.shell_radii.push_back(Lp);
        rep.shell_sup_V.push_back(sv);
        rep.shell_sup_gradG.push_back(sg);
    }
    return rep;
}

} // namespace

AssumptionReport check_assumption_A1(const CoefficientSpec& spec, double gamma, double epsilon,
                                     const Grid& grid, std::span<const double> time_samples) {
    const double s = std::sqrt(1.0 + 4.0 * gamma);
    const double region = std::max(gamma, 2.0) / s;
    const double scale = std::sqrt(gamma) * std::pow(s, epsilon - 1.0);
    return check_decay("A1", spec, gamma, epsilon, grid, time_samples, region, scale);
}

AssumptionReport check_assumption_A2(const CoefficientSpec& spec, double gamma, double epsilon,
                                     const Grid& grid, std::span<const double> time_samples) {
    const double region = std::max(gamma, 2.0);
    const double scale = std::sqrt(gamma);
    return check_decay("A2", spec, gamma, epsilon, grid, time_samples, region, scale);
}

CoefficientSpec coeff_zero() {
    CoefficientSpec s;
    s.descriptor = "zero";
    return s;
}

CoefficientSpec potential_cos(double amp) {
    CoefficientSpec s;
    s.V = [amp](double, std::span<const double> x) { return amp * std::cos(x[0]); };
    s.descriptor = "V=cos";
    s.params["potential_amp"] = amp;
    return s;
}

CoefficientSpec potential_bump(double amp, double width) {
    CoefficientSpec s;
    s.V = [amp, width](double, std::span<const double> x) {
        double r2 = 0.0;
        for (double xi : x) r2 += xi * xi;
        const double q = r2 / (width * width);
        if (q >= 1.0) return 0.0;
        const double c = 1.0 - q;
        return amp * c * c;
    };
    s.descriptor = "V=bump";
    s.params["potential_amp"] = amp;
    s.params["potential_width"] = width;
    return s;
}

CoefficientSpec noise_decay(double amp, double eps, double fade_lo, double fade_hi) {
    CoefficientSpec s;
    auto g = [amp, eps, fade_lo, fade_hi](double, std::span<const double> x) {
        double r2 = 0.0;
        for (double xi : x) r2 += xi * xi;
        const double r = std::sqrt(r2);
        const double fade = 1.0 - smoothstep5((r - fade_lo) / (fade_hi - fade_lo));
        return amp * std::pow(1.0 + r2, -eps / 2.0) * fade;
    };
    s.G = g;
    // d/dxi [ (1+r^2)^(-eps/2) fade(r) ] =
    //   xi * [ -eps (1+r^2)^(-eps/2-1) fade + (1+r^2)^(-eps/2) fade'(r)/r ]
    s.gradG = [amp, eps, fade_lo, fade_hi](double, std::span<const double> x,
                                           std::span<double> out) {
        double r2 = 0.0;
        for (double xi : x) r2 += xi * xi;
        const double r = std::sqrt(r2);
        const double base = std::pow(1.0 + r2, -eps / 2.0);
        const double u = (r - fade_lo) / (fade_hi - fade_lo);
        const double fade = 1.0 - smoothstep5(u);
        double dfade_dr = 0.0;
        if (u > 0.0 && u < 1.0)
            dfade_dr = -30.0 * u * u * (u - 1.0) * (u - 1.0) / (fade_hi - fade_lo);
        const double radial = -eps * std::pow(1.0 + r2, -eps / 2.0 - 1.0) * fade +
                              (r > 0.0 ? base * dfade_dr / r : 0.0);
        for (std::size_t a = 0; a < out.size(); ++a) out[a] = amp * x[a] * radial;
    };
    s.gradG_analytic = true;
    s.descriptor = "G=decay";
    s.params["noise_amp"] = amp;
    s.params["noise_eps"] = eps;
    s.params["noise_fade_lo"] = fade_lo;
    s.params["noise_fade_hi"] = fade_hi;
    return s;
}

CoefficientSpec noise_time_linear(double amp) {
    CoefficientSpec s;
    s.G = [amp](double t, std::span<const double>) { return amp * (1.0 + t); };
    s.gradG = [](double, std::span<const double>, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
    };
    s.gradG_analytic = true;
    s.descriptor = "G=time_linear";
    s.params["noise_amp"] = amp;
    return s;
}

CoefficientSpec combine(const CoefficientSpec& potential, const CoefficientSpec& noise) {
    CoefficientSpec s;
    s.V = potential.V;
    s.G = noise.G;
    s.gradG = noise.gradG;
    s.gradG_analytic = noise.gradG_analytic;
    s.descriptor = potential.descriptor + ";" + noise.descriptor;
    s.params = potential.params;
    for (const auto& [k, v] : noise.params) s.params[k] = v;
    return s;
}

CoefficientTable tabulate_coefficients(const CoefficientSpec& spec, const Grid& grid,
                                       std::span<const double> times) {
    CoefficientTable tab;
    tab.times.assign(times.begin(), times.end());
    tab.V.resize(times.size());
    tab.G.resize(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        tab.V[k].resize(grid.size());
        tab.G[k].resize(grid.size());
        for (std::size_t id = 0; id < grid.size(); ++id) {
            const auto p = grid.node(id);
            const std::span<const double> x(p.data(), grid.dim);
            const double v = spec.eval_V(times[k], x);
            const double g = spec.eval_G(times[k], x);
            check_finite(v, "V");
            check_finite(g, "G");
            tab.V[k][id] = v;
            tab.G[k][id] = g;
        }
    }
    return tab;
}

} // namespace shelab
