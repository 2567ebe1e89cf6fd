#pragma once

#include <limits>
#include <string>
#include <vector>

#include "sst/expr.hpp"
#include "sst/geometry.hpp"
#include "sst/warped.hpp"

namespace sst::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Build a metric from upper-triangle component texts, row-major:
// dim 2 -> {g00, g01, g11}; dim 3 -> {g00, g01, g02, g11, g12, g22}.
inline geom::MetricField make_metric(const geom::Chart& chart,
                                     const std::vector<std::string>& tri_texts,
                                     int signature_hint = 0) {
    std::vector<expr::ScalarExpr> comps;
    comps.reserve(tri_texts.size());
    for (const auto& t : tri_texts) comps.push_back(expr::parse(t, chart.coords()));
    return geom::MetricField(chart, std::move(comps), signature_hint);
}

inline geom::Chart unit_sphere_chart(double margin = 0.15) {
    return geom::Chart({"th", "ph"}, {{0.0, 3.141592653589793}, {0.0, 6.283185307179586}},
                       margin);
}

inline geom::MetricField unit_sphere_metric(double margin = 0.15) {
    return make_metric(unit_sphere_chart(margin), {"1", "0", "sin(th)^2"});
}

inline geom::Chart half_plane_chart() {
    return geom::Chart({"x", "y"}, {{-2.0, 2.0}, {0.5, 4.0}}, 0.0);
}

inline geom::MetricField half_plane_metric() {
    return make_metric(half_plane_chart(), {"1/y^2", "0", "1/y^2"});
}

inline geom::Chart flat2_chart(double half_width = 2.0) {
    return geom::Chart({"x", "y"}, {{-half_width, half_width}, {-half_width, half_width}}, 0.0);
}

inline geom::MetricField flat2_metric(double half_width = 2.0) {
    return make_metric(flat2_chart(half_width), {"1", "0", "1"});
}

// ---- standard static space-time fixtures ---------------------------------

// -dt² + dx² + dy²
inline warped::StaticSpacetime minkowski_spacetime() {
    geom::Chart c = flat2_chart();
    return warped::StaticSpacetime(-kInf, kInf, c, flat2_metric(), expr::parse("1", c.coords()),
                                   {.compact = false, .complete = true, .ricci_flat = true},
                                   1.0, 1.0);
}

// -cosh(x)² dt² + dx² on a one-dimensional fiber: constant curvature -1.
inline warped::StaticSpacetime ads2_spacetime() {
    geom::Chart c({"x"}, {{-2.0, 2.0}}, 0.0);
    geom::MetricField m = make_metric(c, {"1"});
    return warped::StaticSpacetime(-kInf, kInf, c, std::move(m),
                                   expr::parse("cosh(x)", c.coords()),
                                   {.compact = false, .complete = true, .ricci_flat = true},
                                   1.0, {});
}

// Flat fiber, f = cosh(x): the Hessian of f has a flat direction.
inline warped::StaticSpacetime cosh_warp_spacetime() {
    geom::Chart c = flat2_chart();
    return warped::StaticSpacetime(-kInf, kInf, c, flat2_metric(),
                                   expr::parse("cosh(x)", c.coords()),
                                   {.compact = false, .complete = true, .ricci_flat = true},
                                   1.0, {});
}

// Flat fiber, f = 1 + x² + y²: Q is a positive multiple of the identity.
inline warped::StaticSpacetime paraboloid_spacetime() {
    geom::Chart c = flat2_chart(1.0);
    return warped::StaticSpacetime(-kInf, kInf, c, flat2_metric(1.0),
                                   expr::parse("1 + x^2 + y^2", c.coords()),
                                   {.compact = false, .complete = true, .ricci_flat = true},
                                   1.0, {});
}

// Round sphere fiber, f = 2 + cos(th).
inline warped::StaticSpacetime sphere_warp_spacetime() {
    geom::Chart c = unit_sphere_chart();
    return warped::StaticSpacetime(-kInf, kInf, c, unit_sphere_metric(),
                                   expr::parse("2 + cos(th)", c.coords()),
                                   {.compact = true, .complete = true, .ricci_flat = false},
                                   1.0, 3.0);
}

// Hyperbolic half-plane fiber, f = y (harmonic: Δf = 0).
inline warped::StaticSpacetime hyperbolic_warp_spacetime() {
    geom::Chart c = half_plane_chart();
    return warped::StaticSpacetime(-kInf, kInf, c, half_plane_metric(),
                                   expr::parse("y", c.coords()),
                                   {.compact = false, .complete = true, .ricci_flat = false},
                                   0.0, {});
}

inline warped::SpacetimeVector stvec(double u, std::vector<double> comps) {
    warped::SpacetimeVector w;
    w.u = u;
    w.v.resize(static_cast<int>(comps.size()));
    for (std::size_t i = 0; i < comps.size(); ++i) w.v(static_cast<int>(i)) = comps[i];
    return w;
}

} // namespace sst::testing
