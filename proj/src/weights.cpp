#include "shelab/weights.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace shelab {

double phi_gamma(double t, double gamma) {
    if (gamma < 0.0) throw ConfigError("phi_gamma needs gamma >= 0");
    return gamma / (1.0 + 4.0 * gamma * t);
}

double translated_weight(double mu, double R, double t, std::span<const double> x) {
    if (mu <= 0.5) throw ConfigError("translated weight needs mu > 1/2");
    const double shift = R * t * (1.0 - t);
    double r2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = (i == 0) ? x[i] + shift : x[i];
        r2 += xi * xi;
    }
    return mu * r2 + R * R * t * (1.0 - t) * (1.0 - 2.0 * t) / 6.0 -
           R * R * t * (1.0 - t) / (16.0 * mu);
}

double TranslatedWeight::at(double t, std::span<const double> x) const {
    return translated_weight(mu, R, t, x);
}

double weight_at_half(double mu, double R, std::span<const double> x) {
    if (mu <= 0.5) throw ConfigError("weight_at_half needs mu > 1/2");
    double r2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = (i == 0) ? x[i] + R / 4.0 : x[i];
        r2 += xi * xi;
    }
    return 2.0 * mu * r2 - R * R / (32.0 * mu);
}

double MollifierParams::zeta(double r) const {
    if (r <= r_lo) return 0.0;
    const double tail = 2.0 * std::pow(r, -a);
    if (r >= r_hi) return tail;
    return smoothstep5((r - r_lo) / (r_hi - r_lo)) * tail;
}

MollifiedWeight::MollifiedWeight(double a, double gamma, double r_max, int mesh_points) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("mollifier needs a in (0,1)");
    if (gamma < 0.0) throw ConfigError("mollifier needs gamma >= 0");
    params_.a = a;
    params_.gamma = gamma;
    params_.r_hi = std::max(gamma, 2.0);
    params_.r_lo = params_.r_hi - 1.0;
    if (r_max < 4.0 * params_.r_hi) throw ConfigError("mollifier needs r_max >= 4*max(gamma,2)");
    if (mesh_points < 64) throw ConfigError("mollifier mesh too small");
    r_max_ = r_max;
    dr_ = r_max / (mesh_points - 1);
    const int n = mesh_points;

    // Tail integral I(r) = Int_r^inf zeta(s)/s ds. Closed form (2/a) r^-a for
    // r >= r_hi; cumulative trapezoid of the blended zeta below.
    std::vector<double> I(n);
    auto tail_I = [&](double r) { return (2.0 / a) * std::pow(r, -a); };
    int hi_idx = static_cast<int>(std::ceil(params_.r_hi / dr_));
    hi_idx = std::min(hi_idx, n - 1);
    for (int i = n - 1; i >= 0; --i) {
        const double r = i * dr_;
        if (r >= params_.r_hi) {
            I[i] = tail_I(r);
        } else {
            const double r1 = (i + 1) * dr_;
            const double g0 = (r > 0.0) ? params_.zeta(r) / r : 0.0;
            const double g1 = (r1 > 0.0) ? params_.zeta(r1) / r1 : 0.0;
            I[i] = I[i + 1] + 0.5 * (g0 + g1) * dr_;
        }
    }

    dphi_.resize(n);
    for (int i = 0; i < n; ++i) {
        const double r = i * dr_;
        dphi_[i] = (r >= params_.r_hi) ? 2.0 * std::pow(r, 1.0 - a) : a * r * I[i];
    }

    // phi anchored at the closed form for r >= r_hi; integrate dphi downwards.
    phi_.resize(n);
    auto closed = [&](double r) { return (2.0 * std::pow(r, 2.0 - a) - a) / (2.0 - a); };
    for (int i = hi_idx; i < n; ++i) phi_[i] = closed(i * dr_);
    for (int i = hi_idx - 1; i >= 0; --i)
        phi_[i] = phi_[i + 1] - 0.5 * (dphi_[i] + dphi_[i + 1]) * dr_;
}

namespace {
struct MeshPos {
    int i;
    double w; // fractional position in [0,1)
};
MeshPos locate(double r, double dr, std::size_t n) {
    if (r < 0.0) throw ConfigError("mollified weight evaluated at negative radius");
    double q = r / dr;
    int i = static_cast<int>(q);
    if (i >= static_cast<int>(n) - 1) {
        i = static_cast<int>(n) - 2;
        q = static_cast<double>(i) + 1.0;
    }
    return {i, q - i};
}
} // namespace

double MollifiedWeight::phi(double r) const {
    if (r > r_max_ + 1e-12) throw ConfigError("mollified weight evaluated beyond r_max");
    const auto p = locate(r, dr_, phi_.size());
    // Cubic Hermite from (phi, dphi) at the bracketing nodes.
    const double t = p.w, t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * phi_[p.i] + h10 * dr_ * dphi_[p.i] + h01 * phi_[p.i + 1] +
           h11 * dr_ * dphi_[p.i + 1];
}

double MollifiedWeight::dphi(double r) const {
    if (r > r_max_ + 1e-12) throw ConfigError("mollified weight evaluated beyond r_max");
    const auto p = locate(r, dr_, dphi_.size());
    return (1.0 - p.w) * dphi_[p.i] + p.w * dphi_[p.i + 1];
}

double MollifiedWeight::ode_residual(double r) const {
    if (!(r > 0.0) || r > r_max_) throw ConfigError("ode_residual needs r in (0, r_max]");
    int i = static_cast<int>(std::lround(r / dr_));
    i = std::clamp(i, 1, static_cast<int>(dphi_.size()) - 2);
    const double rr = i * dr_;
    const double d2 = (dphi_[i + 1] - dphi_[i - 1]) / (2.0 * dr_);
    return std::fabs(d2 - dphi_[i] / rr + params_.a * params_.zeta(rr));
}

double MollifiedWeight::at(std::span<const double> x) const {
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    return params_.gamma * phi(std::sqrt(r2));
}

std::vector<std::array<double, 4>> MollifiedWeight::table() const {
    std::vector<std::array<double, 4>> rows;
    rows.reserve(phi_.size());
    for (std::size_t i = 0; i < phi_.size(); ++i) {
        const double r = i * dr_;
        const double res = (i == 0 || i + 1 == phi_.size()) ? 0.0 : ode_residual(r);
        rows.push_back({r, phi_[i], dphi_[i], res});
    }
    return rows;
}

MollifiedWeight build_mollified(double a, double gamma, double r_max, int mesh_points) {
    MollifiedWeight w(a, gamma, r_max, mesh_points);
    // Residual scale: interior second differences of the tabulated dphi carry
    // O(dr^2) truncation; fail loudly if the mesh cannot meet it.
    const double dr = r_max / (mesh_points - 1);
    const double tol = std::max(1e-6, 50.0 * dr * dr);
    const auto& p = w.params();
    for (double r = dr; r < r_max * 0.999; r += r_max / 257.0) {
        const double near_blend =
            (r > p.r_lo - 2 * dr && r < p.r_hi + 2 * dr) ? 10.0 : 1.0;
        if (w.ode_residual(r) > tol * near_blend)
            throw NumericError("mesh", "mollifier mesh too coarse: ODE residual " +
                                           fmt_double(w.ode_residual(r)) + " at r = " +
                                           fmt_double(r));
    }
    return w;
}

WeightSpec WeightSpec::quadratic(double gamma, bool time_dependent) {
    WeightSpec w;
    w.kind = time_dependent ? Kind::quadratic_decaying : Kind::quadratic;
    w.gamma = gamma;
    return w;
}

WeightSpec WeightSpec::translated(double mu, double R) {
    if (mu <= 0.5) throw ConfigError("translated weight needs mu > 1/2");
    WeightSpec w;
    w.kind = Kind::translated;
    w.mu = mu;
    w.R = R;
    return w;
}

WeightSpec WeightSpec::mollified_weight(std::shared_ptr<const MollifiedWeight> mw) {
    WeightSpec w;
    w.kind = Kind::mollified;
    w.mollified = std::move(mw);
    w.gamma = w.mollified->params().gamma;
    return w;
}

double WeightSpec::log_weight(double t, std::span<const double> x) const {
    switch (kind) {
        case Kind::none:
            return 0.0;
        case Kind::quadratic:
        case Kind::quadratic_decaying: {
            QuadraticWeight q{gamma, kind == Kind::quadratic_decaying};
            return q.at(t, x);
        }
        case Kind::translated:
            return translated_weight(mu, R, t, x);
        case Kind::mollified:
            return mollified->at(x);
    }
    return 0.0;
}

std::string WeightSpec::describe() const {
    switch (kind) {
        case Kind::none:
            return "none";
        case Kind::quadratic:
            return "quadratic(gamma=" + fmt_double(gamma) + ")";
        case Kind::quadratic_decaying:
            return "quadratic_decaying(gamma=" + fmt_double(gamma) + ")";
        case Kind::translated:
            return "translated(mu=" + fmt_double(mu) + ",R=" + fmt_double(R) + ")";
        case Kind::mollified:
            return "mollified(a=" + fmt_double(mollified->params().a) +
                   ",gamma=" + fmt_double(gamma) + ")";
    }
    return "none";
}

LogWeightValues tabulate_log_weight(const WeightSpec& w, const Grid& g, double t) {
    LogWeightValues out(g.size());
    for (std::size_t id = 0; id < g.size(); ++id) {
        const auto p = g.node(id);
        out[id] = w.log_weight(t, std::span<const double>(p.data(), g.dim));
    }
    return out;
}

} // namespace shelab
