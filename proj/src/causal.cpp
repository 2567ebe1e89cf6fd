#include "sst/causal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sst::causal {

namespace {

geom::Vec to_vec(std::span<const double> p) {
    geom::Vec v(static_cast<int>(p.size()));
    for (int i = 0; i < v.size(); ++i) v(i) = p[static_cast<std::size_t>(i)];
    return v;
}

std::span<const double> as_span(const geom::Vec& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

geom::Vec accel(const geom::PointFrame& F, const geom::Vec& v) {
    const int d = F.dim();
    geom::Vec a = geom::Vec::Zero(d);
    for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) s += F.gamma(k, i, j) * v(i) * v(j);
        a(k) = -s;
    }
    return a;
}

// Geodesic + Jacobi system in one state: J and P are d×m column blocks
// (m = 0 collapses to the plain geodesic equation).
struct JState {
    geom::Vec x, v;
    Eigen::MatrixXd J, P;
};

JState combine(const JState& y, double h, const JState& k1, const JState& k2, const JState& k3,
               const JState& k4) {
    JState out;
    const double w = h / 6.0;
    out.x = y.x + w * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    out.v = y.v + w * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    out.J = y.J + w * (k1.J + 2.0 * k2.J + 2.0 * k3.J + k4.J);
    out.P = y.P + w * (k1.P + 2.0 * k2.P + 2.0 * k3.P + k4.P);
    return out;
}

JState shift(const JState& y, double h, const JState& k) {
    JState out;
    out.x = y.x + h * k.x;
    out.v = y.v + h * k.v;
    out.J = y.J + h * k.J;
    out.P = y.P + h * k.P;
    return out;
}

// One derivative evaluation; false when the point has left the sampling box.
bool rhs(const geom::MetricField& M, const JState& y, bool with_jacobi, JState& dy) {
    if (!M.chart().in_sample_box(as_span(y.x))) return false;
    geom::PointFrame F(M, as_span(y.x));
    const int d = F.dim();
    dy.x = y.v;
    dy.v = accel(F, y.v);
    dy.J = y.P;
    dy.P.resize(d, y.J.cols());
    if (with_jacobi && y.J.cols() > 0) {
        const geom::Tensor4 R = geom::riemann(F);
        for (Eigen::Index a = 0; a < y.J.cols(); ++a)
            for (int l = 0; l < d; ++l) {
                double s = 0.0;
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j)
                        for (int k = 0; k < d; ++k)
                            s += R.at(l, i, j, k) * y.v(i) * y.J(j, a) * y.v(k);
                dy.P(l, a) = -s;
            }
    } else {
        dy.P.setZero();
    }
    return true;
}

bool rk4_step(const geom::MetricField& M, const JState& y, double h, bool with_jacobi,
              JState& out) {
    JState k1, k2, k3, k4;
    if (!rhs(M, y, with_jacobi, k1)) return false;
    if (!rhs(M, shift(y, 0.5 * h, k1), with_jacobi, k2)) return false;
    if (!rhs(M, shift(y, 0.5 * h, k2), with_jacobi, k3)) return false;
    if (!rhs(M, shift(y, h, k3), with_jacobi, k4)) return false;
    out = combine(y, h, k1, k2, k3, k4);
    return M.chart().in_sample_box(as_span(out.x));
}

double metric_norm(const geom::MetricField& M, const geom::Vec& x, const geom::Vec& v) {
    const geom::SymBilinear g = geom::metric_at(M, as_span(x));
    return g.apply(v, v);
}

double jacobi_determinant(const JState& y) {
    const int d = static_cast<int>(y.x.size());
    Eigen::MatrixXd A(d, d);
    A.leftCols(y.J.cols()) = y.J;
    A.col(d - 1) = y.v;
    return A.determinant();
}

struct RunResult {
    GeodesicResult path;
    std::vector<JState> trail; // state at every recorded parameter value
};

RunResult run_geodesic(const geom::MetricField& M, std::span<const double> x0,
                       std::span<const double> v0, double span_len, double step,
                       bool with_jacobi, const Eigen::MatrixXd& J0p) {
    if (static_cast<int>(x0.size()) != M.dim() || static_cast<int>(v0.size()) != M.dim())
        throw BindError("geodesic start data does not match the chart dimension");
    if (!(span_len > 0.0) || !(step > 0.0))
        throw ValidationError("geodesic span and step must be positive");
    if (!M.chart().in_sample_box(x0))
        throw GeometryError("geodesic start point is outside the chart sampling box");

    const int d = M.dim();
    JState y;
    y.x = to_vec(x0);
    y.v = to_vec(v0);
    y.J = Eigen::MatrixXd::Zero(d, J0p.cols());
    y.P = J0p;

    RunResult out;
    out.path.initial_norm = metric_norm(M, y.x, y.v);
    out.path.s.push_back(0.0);
    out.path.length.push_back(0.0);
    out.path.states.push_back({y.x, y.v});
    out.trail.push_back(y);

    const auto n_full = static_cast<long>(std::floor(span_len / step + 1e-9));
    const double rest = span_len - static_cast<double>(n_full) * step;
    double s = 0.0, len = 0.0, prev_norm = out.path.initial_norm;
    for (long i = 0; i < n_full + 1; ++i) {
        const double h = i < n_full ? step : rest;
        if (h <= 1e-12 * span_len) break;
        JState next;
        if (!rk4_step(M, y, h, with_jacobi, next)) {
            out.path.truncated = true;
            out.path.note = "stopped at the chart sampling box";
            break;
        }
        s += h;
        y = std::move(next);
        const double norm = metric_norm(M, y.x, y.v);
        len += 0.5 * h * (std::sqrt(std::abs(prev_norm)) + std::sqrt(std::abs(norm)));
        prev_norm = norm;
        out.path.s.push_back(s);
        out.path.length.push_back(len);
        out.path.states.push_back({y.x, y.v});
        out.trail.push_back(y);
        out.path.max_norm_drift =
            std::max(out.path.max_norm_drift, std::abs(norm - out.path.initial_norm));
    }
    return out;
}

} // namespace

std::string_view to_string(Definiteness d) {
    switch (d) {
    case Definiteness::Zero: return "zero";
    case Definiteness::PositiveDefinite: return "positive-definite";
    case Definiteness::PositiveSemidefinite: return "positive-semidefinite";
    case Definiteness::NegativeDefinite: return "negative-definite";
    case Definiteness::NegativeSemidefinite: return "negative-semidefinite";
    default: return "indefinite";
    }
}

std::string_view to_string(Hyperbolicity h) {
    switch (h) {
    case Hyperbolicity::TrivialPseudoDistance: return "trivial-pseudo-distance";
    case Hyperbolicity::ConformallyHyperbolic: return "conformally-hyperbolic";
    default: return "inconclusive";
    }
}

void DefinitenessSummary::absorb(const geom::SymBilinear& T, const geom::Mat& g, double tol) {
    Eigen::GeneralizedSelfAdjointEigenSolver<geom::Mat> es(T.matrix(), g,
                                                           Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success)
        throw GeometryError("generalized eigenvalue solve failed (metric not positive definite?)");
    const auto& ev = es.eigenvalues();
    const double thr = tol * (1.0 + ev.cwiseAbs().maxCoeff());
    for (int i = 0; i < ev.size(); ++i) {
        const double l = ev(i);
        pd = pd && l > thr;
        psd = psd && l >= -thr;
        nd = nd && l < -thr;
        nsd = nsd && l <= thr;
    }
    ++points;
}

Definiteness DefinitenessSummary::overall() const {
    if (psd && nsd) return Definiteness::Zero;
    if (pd) return Definiteness::PositiveDefinite;
    if (psd) return Definiteness::PositiveSemidefinite;
    if (nd) return Definiteness::NegativeDefinite;
    if (nsd) return Definiteness::NegativeSemidefinite;
    return Definiteness::Indefinite;
}

Definiteness classify_form(const geom::SymBilinear& T, const geom::Mat& g, double tol) {
    DefinitenessSummary s;
    s.absorb(T, g, tol);
    return s.overall();
}

bool is_psd(Definiteness d) {
    return d == Definiteness::Zero || d == Definiteness::PositiveDefinite ||
           d == Definiteness::PositiveSemidefinite;
}

bool is_nsd(Definiteness d) {
    return d == Definiteness::Zero || d == Definiteness::NegativeDefinite ||
           d == Definiteness::NegativeSemidefinite;
}

EnergyReport energy_report(const warped::StaticSpacetime& S, const PointList& fiber_pts,
                           int causal_samples, std::uint64_t seed, double tol) {
    if (fiber_pts.size() == 0) throw ValidationError("energy report needs fiber samples");
    EnergyReport E;
    E.fiber_dim = S.fiber_dim();

    std::vector<warped::WarpFrame> frames;
    frames.reserve(fiber_pts.size());
    DefinitenessSummary ric, q;
    E.min_tau_f = std::numeric_limits<double>::infinity();
    E.min_lap_over_f = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < fiber_pts.size(); ++n) {
        frames.emplace_back(S, fiber_pts.at(n));
        const warped::WarpFrame& F = frames.back();
        ric.absorb(F.ric_F, F.fiber.g_matrix(), tol);
        q.absorb(F.q, F.fiber.g_matrix(), tol);
        E.min_tau_f = std::min(E.min_tau_f, F.tau_F);
        E.min_lap_over_f = std::min(E.min_lap_over_f, F.lap_f / F.f);
    }
    E.ric_f_class = ric.overall();
    E.q_class = q.overall();
    E.timelike_convergence = is_psd(E.ric_f_class) && is_psd(E.q_class);
    E.null_convergence = E.timelike_convergence;
    E.reversed_convergence = is_nsd(E.ric_f_class) && is_nsd(E.q_class);
    if (S.flags().ricci_flat) E.null_iff_q = is_psd(E.q_class);

    // empirical sweep over the causal cone: u = ±λ‖V‖/f with λ ≥ 1
    static constexpr double kLambdas[] = {1.0, 1.1, 2.0, 10.0};
    std::mt19937_64 rng = seeded_rng(seed, "causal-cone");
    const int d = S.fiber_dim();
    bool first = true;
    for (int n = 0; n < causal_samples; ++n) {
        const auto idx =
            static_cast<std::size_t>(uniform01(rng) * static_cast<double>(frames.size()));
        const warped::WarpFrame& F = frames[std::min(idx, frames.size() - 1)];
        warped::SpacetimeVector w;
        w.v.resize(d);
        double vnorm2 = 0.0;
        do {
            for (int i = 0; i < d; ++i) w.v(i) = uniform_in(rng, -1.0, 1.0);
            vnorm2 = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) vnorm2 += F.fiber.g(i, j) * w.v(i) * w.v(j);
        } while (vnorm2 < 1e-20);
        const double lambda = kLambdas[n % 4];
        const double sign = n % 8 < 4 ? 1.0 : -1.0;
        w.u = sign * lambda * std::sqrt(vnorm2) / F.f;

        const double r = warped::ricci_sss(F, w, w);
        const double t = warped::stress_energy(F, w);
        if (first) {
            E.min_ric_causal = E.max_ric_causal = r;
            E.min_stress_causal = E.max_stress_causal = t;
            first = false;
        } else {
            E.min_ric_causal = std::min(E.min_ric_causal, r);
            E.max_ric_causal = std::max(E.max_ric_causal, r);
            E.min_stress_causal = std::min(E.min_stress_causal, t);
            E.max_stress_causal = std::max(E.max_stress_causal, t);
        }
    }
    E.causal_samples = static_cast<std::size_t>(std::max(causal_samples, 0));
    return E;
}

HyperbolicityReport hyperbolicity_classify(const warped::StaticSpacetime& S,
                                           const EnergyReport& E) {
    HyperbolicityReport out;
    const bool nsd_both = is_nsd(E.ric_f_class) && is_nsd(E.q_class);
    const bool inf_pos = S.declared_inf_f().has_value() && *S.declared_inf_f() > 0.0;
    const bool fiber_ok = S.flags().compact || (S.flags().complete && inf_pos);

    if (S.whole_line() && nsd_both && fiber_ok) {
        out.verdict = Hyperbolicity::TrivialPseudoDistance;
        out.reasons.push_back("time interval is the whole real line");
        out.reasons.push_back("Ric_F and Q are both nonpositive on the samples");
        out.reasons.push_back(S.flags().compact ? "fiber is compact"
                                                : "fiber is complete and inf f > 0");
        return out;
    }
    if (is_psd(E.ric_f_class) && E.q_class == Definiteness::PositiveDefinite) {
        out.verdict = Hyperbolicity::ConformallyHyperbolic;
        out.reasons.push_back("Ric_F is nonnegative on the samples");
        out.reasons.push_back("Q is positive definite on the samples");
        return out;
    }

    out.verdict = Hyperbolicity::Inconclusive;
    if (!S.whole_line()) out.reasons.push_back("time interval is not the whole real line");
    if (!nsd_both) out.reasons.push_back("Ric_F or Q is not nonpositive");
    if (!fiber_ok)
        out.reasons.push_back("fiber is neither compact nor complete with inf f > 0");
    if (!is_psd(E.ric_f_class)) out.reasons.push_back("Ric_F is not nonnegative");
    if (E.q_class != Definiteness::PositiveDefinite)
        out.reasons.push_back("Q is not positive definite");
    return out;
}

GeodesicResult integrate_geodesic(const geom::MetricField& M, std::span<const double> x0,
                                  std::span<const double> v0, double span_len, double step) {
    return run_geodesic(M, x0, v0, span_len, step, false, Eigen::MatrixXd::Zero(M.dim(), 0))
        .path;
}

ConjugateReport jacobi_conjugate(const geom::MetricField& M, std::span<const double> x0,
                                 std::span<const double> v0, double span_len, double step) {
    const int d = M.dim();
    ConjugateReport out;

    // basis of γ'(0)^⊥: kernel of the covector g·γ' via full SVD
    const geom::SymBilinear g0 = geom::metric_at(M, x0);
    geom::Vec v = to_vec(v0);
    Eigen::MatrixXd c(1, d);
    double vscale = 0.0;
    for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += g0(j, i) * v(i);
        c(0, j) = s;
        vscale = std::max(vscale, std::abs(v(j)));
    }
    const double norm0 = g0.apply(v, v);
    out.degenerate_frame = std::abs(norm0) <= 1e-10 * (1.0 + vscale * vscale);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullV);
    Eigen::MatrixXd J0p = svd.matrixV().rightCols(d - 1);

    RunResult run = run_geodesic(M, x0, v0, span_len, step, true, J0p);
    out.path = std::move(run.path);

    std::vector<double> det(run.trail.size());
    for (std::size_t k = 0; k < run.trail.size(); ++k) det[k] = jacobi_determinant(run.trail[k]);
    out.final_determinant = det.empty() ? 0.0 : det.back();
    if (out.degenerate_frame) return out; // determinant vanishes identically

    // first sign change after the trivial zero at s = 0
    auto length_at = [&](std::size_t k, double sstar) {
        const double nk = metric_norm(M, run.trail[k].x, run.trail[k].v);
        return out.path.length[k] + (sstar - out.path.s[k]) * std::sqrt(std::abs(nk));
    };
    for (std::size_t k = 1; k + 1 < det.size(); ++k) {
        if (det[k] == 0.0) {
            out.first_conjugate = out.path.s[k];
            out.first_conjugate_length = out.path.length[k];
            return out;
        }
        if (det[k] * det[k + 1] < 0.0) {
            double lo = out.path.s[k], hi = out.path.s[k + 1];
            const double dlo_sign = det[k] > 0.0 ? 1.0 : -1.0;
            while (hi - lo > 1e-8) {
                const double mid = 0.5 * (lo + hi);
                JState ymid;
                if (!rk4_step(M, run.trail[k], mid - out.path.s[k], true, ymid)) break;
                const double dm = jacobi_determinant(ymid);
                if (dm * dlo_sign > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            out.first_conjugate = 0.5 * (lo + hi);
            out.first_conjugate_length = length_at(k, *out.first_conjugate);
            return out;
        }
    }
    return out;
}

std::optional<double> timelike_diameter_bound(const warped::StaticSpacetime& S,
                                              const PointList& fiber_pts) {
    if (fiber_pts.size() == 0) throw ValidationError("diameter bound needs fiber samples");
    double c = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (std::size_t n = 0; n < fiber_pts.size(); ++n) {
        const warped::WarpFrame F(S, fiber_pts.at(n));
        const double r = F.lap_f / F.f;
        c = std::min(c, r);
        scale = std::max(scale, std::abs(r));
    }
    // a sampled infimum below roundoff (e.g. a harmonic warp) gives no bound
    if (c <= 1e-12 * (1.0 + scale)) return std::nullopt;
    return std::numbers::pi * std::sqrt(static_cast<double>(S.dim() - 1) / c);
}

} // namespace sst::causal
