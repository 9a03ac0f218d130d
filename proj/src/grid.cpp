#include "shelab/grid.hpp"

#include <cmath>

#include "shelab/kernels.hpp"

namespace shelab {

namespace {
constexpr double kLogMax = 709.0; // just under log(DBL_MAX)
}

GridPtr make_grid(int dim, double half_width, int points_per_axis) {
    if (dim != 1 && dim != 2) throw ConfigError("grid dim must be 1 or 2");
    if (half_width <= 0.0) throw ConfigError("grid half_width must be positive");
    if (points_per_axis < 3) throw ConfigError("grid needs at least 3 points per axis");
    if (points_per_axis % 2 == 0)
        throw ConfigError("grid points_per_axis must be odd so the origin is a node");
    auto g = std::make_shared<Grid>();
    g->dim = dim;
    g->half_width = half_width;
    g->points_per_axis = points_per_axis;
    g->spacing = 2.0 * half_width / (points_per_axis - 1);
    return g;
}

Field sample_field(const GridPtr& g,
                   const std::function<double(std::span<const double>)>& fn,
                   bool dirichlet_clamp) {
    Field f(g);
    for (std::size_t id = 0; id < g->size(); ++id) {
        if (dirichlet_clamp && g->on_boundary(id)) continue;
        const auto p = g->node(id);
        f.v[id] = fn(std::span<const double>(p.data(), g->dim));
    }
    return f;
}

Field laplacian(const Field& f) {
    const Grid& g = *f.grid;
    Field out(f.grid);
    const double inv_h2 = 1.0 / (g.spacing * g.spacing);
    if (g.dim == 1) {
        kern::second_diff_1d(f.v.data(), out.v.data(), g.points_per_axis, inv_h2);
    } else {
        kern::second_diff_2d(f.v.data(), out.v.data(), g.points_per_axis,
                             g.points_per_axis, inv_h2);
    }
    return out;
}

VectorField gradient(const Field& f) {
    const Grid& g = *f.grid;
    VectorField out(f.grid);
    const double inv_2h = 1.0 / (2.0 * g.spacing);
    if (g.dim == 1) {
        kern::central_diff_1d(f.v.data(), out.comp[0].data(), g.points_per_axis, inv_2h);
    } else {
        kern::central_diff_2d_x(f.v.data(), out.comp[0].data(), g.points_per_axis,
                                g.points_per_axis, inv_2h);
        kern::central_diff_2d_y(f.v.data(), out.comp[1].data(), g.points_per_axis,
                                g.points_per_axis, inv_2h);
    }
    return out;
}

double inner(const Field& f, const Field& g) {
    if (f.grid != g.grid &&
        !(f.grid && g.grid && f.grid->dim == g.grid->dim &&
          f.grid->half_width == g.grid->half_width &&
          f.grid->points_per_axis == g.grid->points_per_axis))
        throw ConfigError("inner: fields live on different grids");
    const Grid& gr = *f.grid;
    std::vector<double> terms(gr.size());
    for (std::size_t i = 0; i < gr.size(); ++i)
        terms[i] = gr.quad_coeff(i) * f.v[i] * g.v[i];
    return pairwise_sum(terms) * gr.cell();
}

double weighted_quad_sq(const Field& f, std::span<const double> logw,
                        std::span<const double> mult) {
    const Grid& g = *f.grid;
    std::vector<double> terms(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double fi = f.v[i];
        if (fi == 0.0) continue;
        double s = 2.0 * logw[i] + 2.0 * std::log(std::fabs(fi));
        double m = 1.0;
        if (!mult.empty()) {
            m = mult[i];
            if (m == 0.0) continue;
            s += std::log(m);
        }
        if (s > kLogMax)
            throw NumericError("overflow", "weighted quadrature summand overflows at node " +
                                               std::to_string(i));
        terms[i] = g.quad_coeff(i) * std::exp(s);
    }
    return pairwise_sum(terms) * g.cell();
}

double weighted_l2_sq(const Field& f, std::span<const double> logw) {
    return weighted_quad_sq(f, logw, {});
}

LogWeightValues zero_logw(const Grid& g) { return LogWeightValues(g.size(), 0.0); }

} // namespace shelab
