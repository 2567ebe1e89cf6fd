#include "sst/warped.hpp"

#include <algorithm>
#include <cmath>

namespace sst::warped {

namespace {

geom::MetricField build_product_metric(const geom::MetricField& fiber, const expr::ScalarExpr& warp,
                                       double t1, double t2, double t_window) {
    if (std::isnan(t1) || std::isnan(t2)) throw GeometryError("time interval endpoint is NaN");
    if (!(t1 < t2)) throw GeometryError("time interval is empty: t1 must be less than t2");
    if (!(t_window > 0.0)) throw GeometryError("t sampling window must be positive");

    const geom::Chart& fc = fiber.chart();
    for (const auto& name : fc.coords())
        if (name == "t")
            throw GeometryError("fiber coordinate 't' collides with the time coordinate");

    std::vector<std::string> coords;
    coords.reserve(static_cast<std::size_t>(fc.dim()) + 1);
    coords.emplace_back("t");
    coords.insert(coords.end(), fc.coords().begin(), fc.coords().end());

    // Finite stand-in for the time axis; the fiber margin is baked into the
    // fiber intervals here so it does not bite into the time domain.
    double lo, hi;
    if (std::isinf(t1) && std::isinf(t2)) {
        lo = -t_window;
        hi = t_window;
    } else if (std::isinf(t1)) {
        lo = t2 - 2.0 * t_window;
        hi = t2;
    } else if (std::isinf(t2)) {
        lo = t1;
        hi = t1 + 2.0 * t_window;
    } else {
        lo = t1;
        hi = t2;
    }

    std::vector<geom::Interval> domain;
    domain.reserve(coords.size());
    domain.push_back({lo, hi});
    for (int i = 0; i < fc.dim(); ++i) {
        const geom::Interval iv = fc.domain()[static_cast<std::size_t>(i)];
        domain.push_back({iv.lo + fc.margin(), iv.hi - fc.margin()});
    }

    geom::Chart product(coords, domain, 0.0);

    const int n = fc.dim() + 1;
    std::vector<expr::ScalarExpr> comps;
    comps.reserve(static_cast<std::size_t>(expr::tri_size(n)));
    const expr::ScalarExpr f_p = expr::rebind(warp, product.coords());
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            if (i == 0 && j == 0)
                comps.push_back(expr::negate(expr::mul(f_p, f_p)));
            else if (i == 0)
                comps.push_back(expr::constant_expr(0.0, product.coords()));
            else
                comps.push_back(expr::rebind(fiber.component(i - 1, j - 1), product.coords()));
        }
    return geom::MetricField(std::move(product), std::move(comps), 1);
}

} // namespace

StaticSpacetime::StaticSpacetime(double t1, double t2, geom::Chart fiber_chart,
                                 geom::MetricField fiber_metric, expr::ScalarExpr warp, Flags flags,
                                 std::optional<double> inf_f, std::optional<double> sup_f,
                                 double t_window)
    : t1_(t1),
      t2_(t2),
      fiber_metric_(std::move(fiber_metric)),
      warp_(expr::rebind(warp, fiber_chart.coords())),
      flags_(flags),
      inf_f_(inf_f),
      sup_f_(sup_f),
      t_window_(t_window),
      product_metric_(build_product_metric(fiber_metric_, warp_, t1, t2, t_window)) {
    if (fiber_chart.coords() != fiber_metric_.chart().coords())
        throw BindError("fiber chart does not match the fiber metric chart");
    const auto& da = fiber_chart.domain();
    const auto& db = fiber_metric_.chart().domain();
    for (std::size_t i = 0; i < da.size(); ++i)
        if (da[i].lo != db[i].lo || da[i].hi != db[i].hi)
            throw BindError("fiber chart domain does not match the fiber metric chart");
}

geom::Interval StaticSpacetime::t_sample_window() const {
    double lo = std::max(t1_, -t_window_);
    double hi = std::min(t2_, t_window_);
    if (!(lo < hi)) {
        // interval lies outside the default window; fall back to its own span
        if (std::isinf(t2_)) {
            lo = t1_;
            hi = t1_ + 2.0 * t_window_;
        } else if (std::isinf(t1_)) {
            lo = t2_ - 2.0 * t_window_;
            hi = t2_;
        } else {
            lo = t1_;
            hi = t2_;
        }
    }
    const double inset = 1e-3 * (hi - lo);
    return {lo + inset, hi - inset};
}

double StaticSpacetime::warp_at(std::span<const double> fiber_p) const {
    const double f = expr::eval(warp_, fiber_p);
    if (!(f > 0.0)) throw GeometryError("warp function is not positive at a sampled fiber point");
    return f;
}

geom::Vec to_product(const SpacetimeVector& w) {
    geom::Vec out(w.v.size() + 1);
    out(0) = w.u;
    for (int i = 0; i < w.v.size(); ++i) out(i + 1) = w.v(i);
    return out;
}

SpacetimeVector from_product(const geom::Vec& w) {
    SpacetimeVector out;
    out.u = w(0);
    out.v.resize(w.size() - 1);
    for (int i = 1; i < w.size(); ++i) out.v(i - 1) = w(i);
    return out;
}

WarpFrame::WarpFrame(const StaticSpacetime& S, std::span<const double> p)
    : fiber(S.fiber_metric(), p),
      f_jet(expr::eval_jet2(S.warp(), p)),
      f(f_jet.value()),
      grad_f(geom::grad(fiber, f_jet)),
      hess_f(geom::hessian(fiber, f_jet)),
      lap_f(0.0),
      ric_F(geom::ricci(fiber)),
      tau_F(0.0),
      q(fiber.dim(), "q") {
    if (!(f > 0.0)) throw GeometryError("warp function is not positive at a sampled fiber point");
    const int s = fiber.dim();
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            lap_f += fiber.ginv(i, j) * hess_f(i, j);
            tau_F += fiber.ginv(i, j) * ric_F(i, j);
        }
    hess_f.set_label("hess_f");
    ric_F.set_label("ric_fiber");
    for (int i = 0; i < s; ++i)
        for (int j = i; j < s; ++j) q.set(i, j, lap_f * fiber.g(i, j) - hess_f(i, j));
}

double ricci_sss(const WarpFrame& F, const SpacetimeVector& w1, const SpacetimeVector& w2) {
    return F.ric_F.apply(w1.v, w2.v) + F.f * F.lap_f * w1.u * w2.u -
           F.hess_f.apply(w1.v, w2.v) / F.f;
}

double ricci_sss(const StaticSpacetime& S, std::span<const double> p, const SpacetimeVector& w1,
                 const SpacetimeVector& w2) {
    return ricci_sss(WarpFrame(S, p), w1, w2);
}

double scalar_sss(const WarpFrame& F) { return F.tau_F - 2.0 * F.lap_f / F.f; }

double scalar_sss(const StaticSpacetime& S, std::span<const double> p) {
    return scalar_sss(WarpFrame(S, p));
}

geom::SymBilinear q_tensor(const StaticSpacetime& S, std::span<const double> p) {
    return WarpFrame(S, p).q;
}

double spacetime_norm(const WarpFrame& F, const SpacetimeVector& w) {
    double s = -F.f * F.f * w.u * w.u;
    for (int i = 0; i < F.fiber.dim(); ++i)
        for (int j = 0; j < F.fiber.dim(); ++j) s += F.fiber.g(i, j) * w.v(i) * w.v(j);
    return s;
}

double ricci_q_form(const WarpFrame& F, const SpacetimeVector& w) {
    return F.ric_F.apply(w.v, w.v) + F.q.apply(w.v, w.v) / F.f -
           spacetime_norm(F, w) * F.lap_f / F.f;
}

double ricci_q_form(const StaticSpacetime& S, std::span<const double> p,
                    const SpacetimeVector& w) {
    return ricci_q_form(WarpFrame(S, p), w);
}

geom::SymBilinear direct_product_ricci(const StaticSpacetime& S, double t,
                                       std::span<const double> p) {
    std::vector<double> x;
    x.reserve(p.size() + 1);
    x.push_back(t);
    x.insert(x.end(), p.begin(), p.end());
    geom::SymBilinear out = geom::ricci(S.product_metric(), x);
    out.set_label("ricci_product");
    return out;
}

double direct_product_scalar(const StaticSpacetime& S, double t, std::span<const double> p) {
    std::vector<double> x;
    x.reserve(p.size() + 1);
    x.push_back(t);
    x.insert(x.end(), p.begin(), p.end());
    return geom::scalar_curv(S.product_metric(), x);
}

geom::SymBilinear spacetime_metric_at(const StaticSpacetime& S, double t,
                                      std::span<const double> p) {
    std::vector<double> x;
    x.reserve(p.size() + 1);
    x.push_back(t);
    x.insert(x.end(), p.begin(), p.end());
    geom::SymBilinear out = geom::metric_at(S.product_metric(), x);
    out.set_label("metric_product");
    return out;
}

double stress_energy(const WarpFrame& F, const SpacetimeVector& w) {
    return ricci_sss(F, w, w) - 0.5 * scalar_sss(F) * spacetime_norm(F, w);
}

double stress_energy(const StaticSpacetime& S, std::span<const double> p,
                     const SpacetimeVector& w) {
    return stress_energy(WarpFrame(S, p), w);
}

double stress_energy_decomposed(const WarpFrame& F, const SpacetimeVector& w) {
    return F.ric_F.apply(w.v, w.v) + F.q.apply(w.v, w.v) / F.f -
           0.5 * F.tau_F * spacetime_norm(F, w);
}

} // namespace sst::warped
