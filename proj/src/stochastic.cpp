#include "shelab/stochastic.hpp"

#include <cmath>

namespace shelab {

Clock Clock::appell(double alpha, double beta) {
    if (alpha <= 0.0 || beta <= 0.0) throw ConfigError("appell clock needs alpha, beta > 0");
    Clock c;
    c.name = "appell(alpha=" + fmt_double(alpha) + ",beta=" + fmt_double(beta) + ")";
    c.b = [alpha, beta](double t) {
        const double a = std::sqrt(alpha * beta) / (alpha * (1.0 - t) + beta * t);
        return std::sqrt(beta / alpha) * a * t;
    };
    return c;
}

double WienerPath::cumulative(int k) const {
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += increments[i];
    return s;
}

WienerPath sample_path(std::uint64_t seed, const TimeGrid& tg, const Clock& clock) {
    if (tg.steps < 1) throw ConfigError("time grid needs at least one step");
    WienerPath p;
    p.time_grid = tg;
    p.seed = seed;
    p.clock_name = clock.name;
    p.knot_times.resize(tg.steps + 1);
    for (int k = 0; k <= tg.steps; ++k) p.knot_times[k] = clock(tg.knot(k));
    if (std::fabs(p.knot_times.front()) > 1e-14)
        throw ConfigError("clock must satisfy b(0) = 0");
    for (int k = 0; k < tg.steps; ++k)
        if (!(p.knot_times[k + 1] > p.knot_times[k]))
            throw ConfigError("clock must be strictly increasing on the time grid");
    p.increments.resize(tg.steps);
    for (int k = 0; k < tg.steps; ++k) {
        const double var = p.knot_times[k + 1] - p.knot_times[k];
        p.increments[k] = std::sqrt(var) * gaussian_draw(seed, static_cast<std::uint64_t>(k));
    }
    return p;
}

WienerPath refine_path(const WienerPath& path, const Clock& clock) {
    const int K = path.time_grid.steps;
    WienerPath r;
    r.time_grid = TimeGrid{2 * K};
    r.seed = path.seed;
    r.clock_name = path.clock_name;
    r.refine_level = path.refine_level + 1;
    r.knot_times.resize(2 * K + 1);
    for (int j = 0; j <= 2 * K; ++j) r.knot_times[j] = clock(r.time_grid.knot(j));
    r.increments.resize(2 * K);
    // Fresh bridge draws from a level-tagged substream of the same path seed.
    const std::uint64_t zstream =
        derive_substream(path.seed, 0x42524447u + static_cast<std::uint64_t>(r.refine_level));
    for (int k = 0; k < K; ++k) {
        const double t0 = path.knot_times[k];
        const double tm = r.knot_times[2 * k + 1];
        const double t1 = path.knot_times[k + 1];
        const double v = t1 - t0;
        const double vl = tm - t0;
        const double vr = t1 - tm;
        const double z = gaussian_draw(zstream, static_cast<std::uint64_t>(k));
        const double left = path.increments[k] * (vl / v) + z * std::sqrt(vl * vr / v);
        r.increments[2 * k] = left;
        r.increments[2 * k + 1] = path.increments[k] - left;
    }
    return r;
}

} // namespace shelab
