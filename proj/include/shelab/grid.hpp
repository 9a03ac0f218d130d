#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "shelab/util.hpp"

namespace shelab {

/// Uniform symmetric grid on [-L, L]^dim (dim 1 or 2) with an odd point count
/// per axis, so the origin is a node. Node i sits at -L + i*h, h = 2L/(N-1).
struct Grid {
    int dim = 1;
    double half_width = 0.0;
    int points_per_axis = 0;
    double spacing = 0.0;

    std::size_t size() const {
        return dim == 1 ? static_cast<std::size_t>(points_per_axis)
                        : static_cast<std::size_t>(points_per_axis) * points_per_axis;
    }
    double coord(int i) const { return -half_width + i * spacing; }

    /// Node coordinates as (x1, x2); x2 = 0 in 1-D.
    std::array<double, 2> node(std::size_t id) const {
        if (dim == 1) return {coord(static_cast<int>(id)), 0.0};
        const int ix = static_cast<int>(id % points_per_axis);
        const int iy = static_cast<int>(id / points_per_axis);
        return {coord(ix), coord(iy)};
    }
    double radius2(std::size_t id) const {
        const auto p = node(id);
        return p[0] * p[0] + p[1] * p[1];
    }

    /// Trapezoidal quadrature coefficient (1, 1/2 at ends; products in 2-D).
    double quad_coeff(std::size_t id) const {
        auto edge = [this](int i) { return (i == 0 || i == points_per_axis - 1) ? 0.5 : 1.0; };
        if (dim == 1) return edge(static_cast<int>(id));
        return edge(static_cast<int>(id % points_per_axis)) *
               edge(static_cast<int>(id / points_per_axis));
    }
    /// Volume element h^dim.
    double cell() const { return dim == 1 ? spacing : spacing * spacing; }

    bool on_boundary(std::size_t id) const {
        const int n = points_per_axis;
        if (dim == 1) return id == 0 || static_cast<int>(id) == n - 1;
        const int ix = static_cast<int>(id % n), iy = static_cast<int>(id / n);
        return ix == 0 || ix == n - 1 || iy == 0 || iy == n - 1;
    }
};

using GridPtr = std::shared_ptr<const Grid>;

/// Rejects even N (the origin must be a node), dim outside {1,2}, L <= 0.
GridPtr make_grid(int dim, double half_width, int points_per_axis);

/// One scalar sample on a grid. Values are plain doubles in node order
/// (x fastest in 2-D). Treated as immutable once handed to consumers.
struct Field {
    GridPtr grid;
    std::vector<double> v;

    Field() = default;
    explicit Field(GridPtr g) : grid(std::move(g)), v(grid->size(), 0.0) {}
    Field(GridPtr g, std::vector<double> vals) : grid(std::move(g)), v(std::move(vals)) {}
    std::size_t size() const { return v.size(); }
};

struct VectorField {
    GridPtr grid;
    std::vector<std::vector<double>> comp; // dim arrays

    explicit VectorField(GridPtr g)
        : grid(std::move(g)), comp(grid->dim, std::vector<double>(grid->size(), 0.0)) {}
};

/// Sample an analytic function at all nodes; boundary forced to 0 when
/// dirichlet_clamp is set.
Field sample_field(const GridPtr& g,
                   const std::function<double(std::span<const double>)>& fn,
                   bool dirichlet_clamp = true);

/// Five-point (per axis) second-order centered Laplacian with zero ghosts.
Field laplacian(const Field& f);

/// Centered first differences per axis with zero ghosts.
VectorField gradient(const Field& f);

/// L^2 inner product by trapezoidal quadrature. Throws on grid mismatch.
double inner(const Field& f, const Field& g);

/// Per-node log weights, one value per grid node, for a fixed time.
using LogWeightValues = std::vector<double>;

/// Trapezoidal quadrature of exp(2 w(x)) f(x)^2. `logw` holds the LOG of the
/// weight at each node. Summands are assembled in log space; any node whose
/// summand would exceed the largest representable double raises a
/// NumericError("overflow") instead of silently saturating.
double weighted_l2_sq(const Field& f, std::span<const double> logw);

/// Same with a pointwise nonnegative multiplier m(x) (for moments like
/// |x|^2 e^{2w} f^2). `mult` may be empty meaning 1.
double weighted_quad_sq(const Field& f, std::span<const double> logw,
                        std::span<const double> mult);

/// Convenience: constant-zero log weight.
LogWeightValues zero_logw(const Grid& g);

} // namespace shelab
