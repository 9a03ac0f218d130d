#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "shelab/rng.hpp"
#include "shelab/util.hpp"

namespace shelab {

/// Uniform partition of [0,1] into K steps, knots t_k = k/K.
struct TimeGrid {
    int steps = 1;

    double dt() const { return 1.0 / steps; }
    double knot(int k) const { return static_cast<double>(k) / steps; }
};

/// Simulation clock. The driving noise of a path carries increments with
/// variance b(t_{k+1}) - b(t_k); the identity clock gives the standard
/// Wiener process on the uniform grid.
struct Clock {
    std::string name = "identity";
    std::function<double(double)> b;

    double operator()(double t) const { return b ? b(t) : t; }

    static Clock identity() { return Clock{}; }
    /// Appell clock b(t) = sqrt(beta/alpha) * a(t) * t with
    /// a(t) = sqrt(alpha*beta) / (alpha(1-t) + beta t).
    static Clock appell(double alpha, double beta);
};

/// One realization of the driving noise on a time grid. Regenerating with
/// the same (seed, grid, clock) reproduces the increments bit-exactly.
struct WienerPath {
    TimeGrid time_grid;
    std::uint64_t seed = 0;
    std::string clock_name = "identity";
    int refine_level = 0;
    std::vector<double> knot_times;  // physical times b(t_k), size K+1
    std::vector<double> increments;  // size K

    /// Cumulative sum W(b(t_k)).
    double cumulative(int k) const;
};

/// Draw a path. Throws ConfigError if the clock is not strictly increasing
/// on the grid knots or b(0) != 0.
WienerPath sample_path(std::uint64_t seed, const TimeGrid& tg, const Clock& clock);

/// Halve the step by conditional (Brownian bridge) refinement: the refined
/// path agrees with the coarse one at the coarse knots and fills midpoints
/// with the exact conditional law. Fresh draws come from a substream of the
/// path seed tagged by the refinement level, so repeated refinement is
/// deterministic.
WienerPath refine_path(const WienerPath& path, const Clock& clock);

} // namespace shelab
