#pragma once

#include <cmath>
#include <optional>
#include <span>

#include "sst/geometry.hpp"

namespace sst::warped {

struct Flags {
    bool compact = false;
    bool complete = false;
    bool ricci_flat = false;
};

// A standard static space-time: time interval (t1, t2) with metric -f² dt²
// glued to a Riemannian fiber (F, g_F), warp f a positive function of the
// fiber only.  The product chart orders coordinates (t, fiber...) and is the
// ground-truth route for cross-checking every closed-form formula.
class StaticSpacetime {
public:
    StaticSpacetime(double t1, double t2, geom::Chart fiber_chart, geom::MetricField fiber_metric,
                    expr::ScalarExpr warp, Flags flags = {}, std::optional<double> inf_f = {},
                    std::optional<double> sup_f = {}, double t_window = 5.0);

    double t1() const { return t1_; }
    double t2() const { return t2_; }
    bool whole_line() const { return std::isinf(t1_) && t1_ < 0 && std::isinf(t2_) && t2_ > 0; }
    const geom::Chart& fiber_chart() const { return fiber_metric_.chart(); }
    const geom::MetricField& fiber_metric() const { return fiber_metric_; }
    const expr::ScalarExpr& warp() const { return warp_; }
    const Flags& flags() const { return flags_; }
    std::optional<double> declared_inf_f() const { return inf_f_; }
    std::optional<double> declared_sup_f() const { return sup_f_; }

    int fiber_dim() const { return fiber_metric_.dim(); }
    int dim() const { return fiber_dim() + 1; }

    const geom::Chart& product_chart() const { return product_metric_.chart(); }
    const geom::MetricField& product_metric() const { return product_metric_; }

    // Finite window used whenever the time coordinate must be sampled.
    geom::Interval t_sample_window() const;

    double warp_at(std::span<const double> fiber_p) const;

private:
    double t1_, t2_;
    geom::MetricField fiber_metric_;
    expr::ScalarExpr warp_;
    Flags flags_;
    std::optional<double> inf_f_, sup_f_;
    double t_window_;
    geom::MetricField product_metric_;
};

// u ∂_t + V split of a tangent vector.
struct SpacetimeVector {
    double u = 0.0;
    geom::Vec v;
};

geom::Vec to_product(const SpacetimeVector& w);
SpacetimeVector from_product(const geom::Vec& w);

// Fiber curvature + warp data at one point, shared by all the closed forms.
struct WarpFrame {
    geom::PointFrame fiber;
    expr::Jet2 f_jet;
    double f;
    geom::Vec grad_f; // index raised
    geom::SymBilinear hess_f;
    double lap_f;
    geom::SymBilinear ric_F;
    double tau_F;
    geom::SymBilinear q; // Δf·g_F − H^f

    WarpFrame(const StaticSpacetime& S, std::span<const double> p);
};

// Ric(u1∂_t + V1, u2∂_t + V2) = Ric_F(V1,V2) + f Δf u1 u2 − (1/f) H^f(V1,V2)
double ricci_sss(const WarpFrame& F, const SpacetimeVector& w1, const SpacetimeVector& w2);
double ricci_sss(const StaticSpacetime& S, std::span<const double> p, const SpacetimeVector& w1,
                 const SpacetimeVector& w2);

// τ = τ_F − 2 Δf / f
double scalar_sss(const WarpFrame& F);
double scalar_sss(const StaticSpacetime& S, std::span<const double> p);

geom::SymBilinear q_tensor(const StaticSpacetime& S, std::span<const double> p);

// Ric(w,w) = Ric_F(V,V) + (1/f) Q(V,V) − g(w,w) Δf / f
double ricci_q_form(const WarpFrame& F, const SpacetimeVector& w);
double ricci_q_form(const StaticSpacetime& S, std::span<const double> p, const SpacetimeVector& w);

// g(w,w) = −f² u² + g_F(V,V)
double spacetime_norm(const WarpFrame& F, const SpacetimeVector& w);

// Ricci of the assembled product metric computed by the generic curvature
// engine on the (s+1)-chart — the independent route the closed forms must
// reproduce.  The metric is t-independent; `t` only fixes the chart point.
geom::SymBilinear direct_product_ricci(const StaticSpacetime& S, double t,
                                       std::span<const double> p);
double direct_product_scalar(const StaticSpacetime& S, double t, std::span<const double> p);
geom::SymBilinear spacetime_metric_at(const StaticSpacetime& S, double t,
                                      std::span<const double> p);

// 8π T(w,w), via the Einstein tensor (Ric − ½τg) and via the fiber-level
// decomposition Ric_F + (1/f)Q − ½τ_F g; both are exposed so their agreement
// can be asserted.
double stress_energy(const WarpFrame& F, const SpacetimeVector& w);
double stress_energy(const StaticSpacetime& S, std::span<const double> p,
                     const SpacetimeVector& w);
double stress_energy_decomposed(const WarpFrame& F, const SpacetimeVector& w);

} // namespace sst::warped
