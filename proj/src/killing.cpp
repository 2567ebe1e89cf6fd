#include "sst/killing.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace sst::killing {

namespace {

constexpr double kZeroTol = 1e-12;  // "identically zero" detection
constexpr double kConstTol = 1e-10; // "constant over the grid" detection
constexpr double kNuZero = 1e-10;   // ν treated as zero below this

double largest_singular_value(const geom::Mat& a) {
    return Eigen::JacobiSVD<geom::Mat>(a).singularValues()(0);
}

std::string fmt(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

// Solution family of h'' = -ν h, its derivative, and ∫_{t0}^t h.
struct HModel {
    double nu = 0.0;
    double c1 = 0.0, c2 = 0.0;
    double t0 = 0.0;

    double b1(double t) const {
        if (nu > kNuZero) return std::cos(std::sqrt(nu) * t);
        if (nu < -kNuZero) return std::exp(std::sqrt(-nu) * t);
        return 1.0;
    }
    double b2(double t) const {
        if (nu > kNuZero) return std::sin(std::sqrt(nu) * t);
        if (nu < -kNuZero) return std::exp(-std::sqrt(-nu) * t);
        return t;
    }
    double db1(double t) const {
        if (nu > kNuZero) return -std::sqrt(nu) * std::sin(std::sqrt(nu) * t);
        if (nu < -kNuZero) return std::sqrt(-nu) * std::exp(std::sqrt(-nu) * t);
        return 0.0;
    }
    double db2(double t) const {
        if (nu > kNuZero) return std::sqrt(nu) * std::cos(std::sqrt(nu) * t);
        if (nu < -kNuZero) return -std::sqrt(-nu) * std::exp(-std::sqrt(-nu) * t);
        return 1.0;
    }
    double ib1(double t) const {
        if (nu > kNuZero) return std::sin(std::sqrt(nu) * t) / std::sqrt(nu);
        if (nu < -kNuZero) return std::exp(std::sqrt(-nu) * t) / std::sqrt(-nu);
        return t;
    }
    double ib2(double t) const {
        if (nu > kNuZero) return -std::cos(std::sqrt(nu) * t) / std::sqrt(nu);
        if (nu < -kNuZero) return -std::exp(-std::sqrt(-nu) * t) / std::sqrt(-nu);
        return 0.5 * t * t;
    }

    double deriv(double t) const { return c1 * db1(t) + c2 * db2(t); }
    double integral(double t) const {
        return c1 * (ib1(t) - ib1(t0)) + c2 * (ib2(t) - ib2(t0));
    }
};

// K_b(f) = K^i ∂_i f at one point.
double field_of_warp(const geom::VectorJet1& k, const expr::Jet2& f_jet) {
    double s = 0.0;
    for (int i = 0; i < k.dim; ++i) s += k.comp(i) * f_jet.grad(i);
    return s;
}

void require_scalar_of_t(const expr::ScalarExpr& e, const char* what) {
    if (e.dim() != 1)
        throw BindError(std::string(what) + " must be bound to the single coordinate t");
}

} // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::Killing: return "killing";
    case Verdict::Conformal: return "conformal";
    default: return "neither";
    }
}

FieldCheck classify_field(const geom::MetricField& M, const geom::VectorFieldExpr& X,
                          const PointList& pts, double tol) {
    if (X.dim() != M.dim())
        throw BindError("vector field has " + std::to_string(X.dim()) +
                        " components on a dim-" + std::to_string(M.dim()) + " chart");
    if (pts.size() == 0) throw ValidationError("field classification needs sample points");

    FieldCheck out;
    out.points = pts.size();
    const int d = M.dim();
    for (std::size_t n = 0; n < pts.size(); ++n) {
        geom::PointFrame F(M, pts.at(n));
        geom::SymBilinear L = geom::lie_metric(F, geom::vector_jet(X, pts.at(n)));
        const geom::Mat A = F.ginv_matrix() * L.matrix();
        const double sigma = A.trace() / (2.0 * d);
        const geom::Mat traceless = A - (A.trace() / d) * geom::Mat::Identity(d, d);

        out.killing_residual = std::max(out.killing_residual, largest_singular_value(A));
        out.conformal_residual =
            std::max(out.conformal_residual, largest_singular_value(traceless));
        if (n == 0) {
            out.sigma_min = out.sigma_max = sigma;
        } else {
            out.sigma_min = std::min(out.sigma_min, sigma);
            out.sigma_max = std::max(out.sigma_max, sigma);
        }
    }

    if (out.killing_residual <= tol)
        out.verdict = Verdict::Killing;
    else if (out.conformal_residual <= tol)
        out.verdict = Verdict::Conformal;
    else
        out.verdict = Verdict::Neither;
    return out;
}

geom::VectorJet1 f2_grad_jet(const geom::PointFrame& F, const expr::Jet2& f_jet,
                             const expr::Jet2& psi_jet) {
    const int d = F.dim();
    const double f = f_jet.value();
    geom::VectorJet1 W;
    W.dim = d;
    W.comp.resize(d);
    W.dcomp.resize(d, d);

    for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += F.ginv(i, j) * psi_jet.grad(j);
        W.comp(i) = f * f * s;
    }
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i) {
            double s = 0.0;
            for (int j = 0; j < d; ++j) {
                double dginv = 0.0; // ∂_k g^{ij} = -g^{ia} ∂_k g_{ab} g^{bj}
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b)
                        dginv -= F.ginv(i, a) * F.dg(k, a, b) * F.ginv(b, j);
                s += (2.0 * f * f_jet.grad(k) * F.ginv(i, j) + f * f * dginv) * psi_jet.grad(j);
                s += f * f * F.ginv(i, j) * psi_jet.hess(k, j);
            }
            W.dcomp(k, i) = s;
        }
    return W;
}

geom::SymBilinear b_tensor(const geom::PointFrame& F, const expr::Jet2& f_jet,
                           const expr::Jet2& psi_jet) {
    const double f = f_jet.value();
    if (!(f > 0.0)) throw GeometryError("warp function is not positive at a sampled fiber point");
    geom::SymBilinear B = geom::hessian(F, psi_jet);
    for (int i = 0; i < F.dim(); ++i)
        for (int j = i; j < F.dim(); ++j)
            B.add(i, j,
                  (f_jet.grad(i) * psi_jet.grad(j) + f_jet.grad(j) * psi_jet.grad(i)) / f);
    B.set_label("b");
    return B;
}

StaticFormCheck check_static_form(const warped::StaticSpacetime& S, const expr::ScalarExpr& h,
                                  const geom::VectorFieldExpr& V, const PointList& fiber_pts,
                                  const std::vector<double>& t_grid, double tol) {
    require_scalar_of_t(h, "the time profile h");
    if (t_grid.empty()) throw ValidationError("static-form check needs a time grid");

    StaticFormCheck out;
    FieldCheck fiber = classify_field(S.fiber_metric(), V, fiber_pts, tol);
    out.field_residual = fiber.killing_residual;

    std::vector<double> vlnf;
    vlnf.reserve(fiber_pts.size());
    double sum = 0.0;
    for (std::size_t n = 0; n < fiber_pts.size(); ++n) {
        const expr::Jet2 fj = expr::eval_jet2(S.warp(), fiber_pts.at(n));
        if (!(fj.value() > 0.0))
            throw GeometryError("warp function is not positive at a sampled fiber point");
        const geom::VectorJet1 vj = geom::vector_jet(V, fiber_pts.at(n));
        vlnf.push_back(field_of_warp(vj, fj) / fj.value());
        sum += vlnf.back();
    }
    out.vlnf_mean = sum / static_cast<double>(vlnf.size());
    for (double v : vlnf) out.vlnf_spread = std::max(out.vlnf_spread, std::abs(v - out.vlnf_mean));

    for (double t : t_grid) {
        const expr::Jet2 hj = expr::eval_jet2(h, std::span{&t, 1});
        out.h_residual = std::max(out.h_residual, std::abs(hj.grad(0) + out.vlnf_mean));
    }

    const double scale = 1.0 + std::abs(out.vlnf_mean);
    if (fiber.verdict == Verdict::Killing && out.vlnf_spread <= tol * scale &&
        out.h_residual <= tol * scale)
        out.verdict = Verdict::Killing;
    return out;
}

StructuredReport classify_structured(const warped::StaticSpacetime& S,
                                     const StructuredCandidate& cand,
                                     const std::vector<geom::VectorFieldExpr>& basis,
                                     const PointList& fiber_pts, const std::vector<double>& t_grid,
                                     double tol) {
    require_scalar_of_t(cand.h, "the time profile h");
    if (cand.phi.size() != basis.size())
        throw ValidationError("candidate has " + std::to_string(cand.phi.size()) +
                              " phi coefficients for " + std::to_string(basis.size()) +
                              " basis elements");
    for (const auto& phi : cand.phi) require_scalar_of_t(phi, "each phi coefficient");
    if (fiber_pts.size() == 0 || t_grid.empty())
        throw ValidationError("classification needs fiber samples and a time grid");

    StructuredReport R;
    const auto worst = [&R](double r) { R.worst_residual = std::max(R.worst_residual, r); };
    const auto fail = [&R](std::string note) {
        R.verdict = Verdict::Neither;
        R.notes.push_back(std::move(note));
    };

    const std::size_t nb = basis.size();
    const std::size_t np = fiber_pts.size();
    const std::size_t nt = t_grid.size();
    const int d = S.fiber_dim();

    // sample the time profiles
    std::vector<double> hv(nt);
    double h_scale = 0.0, h_min = 0.0, h_max = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
        hv[k] = expr::eval(cand.h, std::span{&t_grid[k], 1});
        h_scale = std::max(h_scale, std::abs(hv[k]));
        h_min = k == 0 ? hv[k] : std::min(h_min, hv[k]);
        h_max = k == 0 ? hv[k] : std::max(h_max, hv[k]);
    }
    std::vector<std::vector<double>> phiv(nb, std::vector<double>(nt));
    double phi_scale = 0.0;
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t k = 0; k < nt; ++k) {
            phiv[b][k] = expr::eval(cand.phi[b], std::span{&t_grid[k], 1});
            phi_scale = std::max(phi_scale, std::abs(phiv[b][k]));
        }

    // sample the fiber data
    std::vector<geom::PointFrame> frames;
    frames.reserve(np);
    std::vector<expr::Jet2> fjets, psijets;
    fjets.reserve(np);
    psijets.reserve(np);
    double psi_scale = 0.0;
    for (std::size_t n = 0; n < np; ++n) {
        frames.emplace_back(S.fiber_metric(), fiber_pts.at(n));
        fjets.push_back(expr::eval_jet2(S.warp(), fiber_pts.at(n)));
        if (!(fjets.back().value() > 0.0))
            throw GeometryError("warp function is not positive at a sampled fiber point");
        psijets.push_back(expr::eval_jet2(cand.psi, fiber_pts.at(n)));
        psi_scale = std::max(psi_scale, std::abs(psijets.back().value()));
    }
    std::vector<std::vector<geom::VectorJet1>> bjets(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        if (basis[b].dim() != d)
            throw BindError("basis element " + std::to_string(b) +
                            " does not match the fiber dimension");
        bjets[b].reserve(np);
        for (std::size_t n = 0; n < np; ++n)
            bjets[b].push_back(geom::vector_jet(basis[b], fiber_pts.at(n)));
    }

    const bool h_zero = h_scale <= kZeroTol;
    const bool psi_zero = psi_scale <= kZeroTol;
    const bool h_const = (h_max - h_min) <= kConstTol * (1.0 + h_scale);

    // every declared basis element must be a fiber Killing field
    for (std::size_t b = 0; b < nb; ++b) {
        FieldCheck fc = classify_field(S.fiber_metric(), basis[b], fiber_pts, tol);
        worst(fc.killing_residual);
        if (fc.verdict != Verdict::Killing) {
            R.case_label = "invalid-basis";
            fail("basis element " + std::to_string(b) +
                 " is not a fiber Killing field (residual " + fmt(fc.killing_residual) + ")");
            return R;
        }
    }

    // ---- hψ ≡ 0: constant-coefficient fiber field ------------------------
    if (h_zero || psi_zero) {
        R.case_label = "fiber-only";
        R.omega.resize(nb);
        double omega_scale = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
            double sum = 0.0;
            for (double v : phiv[b]) sum += v;
            R.omega[b] = sum / static_cast<double>(nt);
            omega_scale += std::abs(R.omega[b]);
            double spread = 0.0;
            for (double v : phiv[b]) spread = std::max(spread, std::abs(v - R.omega[b]));
            worst(spread / (1.0 + phi_scale));
            if (spread > tol * (1.0 + phi_scale)) {
                fail("phi coefficient " + std::to_string(b) +
                     " must be constant when h·ψ vanishes (spread " + fmt(spread) + ")");
                return R;
            }
        }

        double lie_res = 0.0, lnf_res = 0.0;
        for (std::size_t n = 0; n < np; ++n) {
            geom::Mat L = geom::Mat::Zero(d, d);
            double kf = 0.0;
            for (std::size_t b = 0; b < nb; ++b) {
                L += R.omega[b] * geom::lie_metric(frames[n], bjets[b][n]).matrix();
                kf += R.omega[b] * field_of_warp(bjets[b][n], fjets[n]);
            }
            lie_res = std::max(lie_res,
                               largest_singular_value(geom::Mat(frames[n].ginv_matrix() * L)));
            lnf_res = std::max(lnf_res, std::abs(kf / fjets[n].value()));
        }
        const double scale = 1.0 + omega_scale;
        worst(lie_res / scale);
        worst(lnf_res / scale);
        if (lie_res > tol * scale) {
            fail("combined fiber field is not Killing (residual " + fmt(lie_res) + ")");
            return R;
        }
        if (lnf_res > tol * scale) {
            fail("combined fiber field does not annihilate f (residual " + fmt(lnf_res) + ")");
            return R;
        }
        R.verdict = Verdict::Killing;
        return R;
    }

    R.case_label = h_const ? "constant-h" : "separable";

    // ---- W = f²∇ψ must be a fiber Killing field --------------------------
    std::vector<geom::VectorJet1> wjets;
    wjets.reserve(np);
    std::vector<double> wlnf(np);
    double w_scale = 0.0, w_killing = 0.0, wlnf_scale = 0.0;
    for (std::size_t n = 0; n < np; ++n) {
        wjets.push_back(f2_grad_jet(frames[n], fjets[n], psijets[n]));
        const double f = fjets[n].value();
        const geom::Mat L = 2.0 * f * f * b_tensor(frames[n], fjets[n], psijets[n]).matrix();
        w_killing = std::max(w_killing,
                             largest_singular_value(geom::Mat(frames[n].ginv_matrix() * L)));
        wlnf[n] = field_of_warp(wjets[n], fjets[n]) / f;
        wlnf_scale = std::max(wlnf_scale, std::abs(wlnf[n]));
        for (int i = 0; i < d; ++i) w_scale = std::max(w_scale, std::abs(wjets[n].comp(i)));
    }
    worst(w_killing / (1.0 + w_scale));
    if (w_killing > tol * (1.0 + w_scale)) {
        fail("f²·grad ψ is not a fiber Killing field (residual " + fmt(w_killing) + ")");
        return R;
    }

    // ---- expand W in the declared basis ----------------------------------
    R.tau.assign(nb, 0.0);
    if (nb == 0) {
        if (w_scale > tol) {
            fail("f²·grad ψ is nonzero but no basis was declared");
            return R;
        }
    } else {
        Eigen::MatrixXd A(np * static_cast<std::size_t>(d), nb);
        Eigen::VectorXd rhs(np * static_cast<std::size_t>(d));
        for (std::size_t n = 0; n < np; ++n)
            for (int i = 0; i < d; ++i) {
                const auto row = static_cast<Eigen::Index>(n * static_cast<std::size_t>(d)) + i;
                rhs(row) = wjets[n].comp(i);
                for (std::size_t b = 0; b < nb; ++b)
                    A(row, static_cast<Eigen::Index>(b)) = bjets[b][n].comp(i);
            }
        Eigen::VectorXd tau = A.colPivHouseholderQr().solve(rhs);
        const double fit = (A * tau - rhs).cwiseAbs().maxCoeff() / (1.0 + w_scale);
        worst(fit);
        if (fit > tol) {
            fail("declared basis does not span f²·grad ψ (fit residual " + fmt(fit) + ")");
            return R;
        }
        for (std::size_t b = 0; b < nb; ++b) R.tau[b] = tau(static_cast<Eigen::Index>(b));
    }

    // ---- eigen relation (f²∇ψ)(ln f) = ν ψ -------------------------------
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < np; ++n) {
        num += wlnf[n] * psijets[n].value();
        den += psijets[n].value() * psijets[n].value();
    }
    const double nu = num / den;
    double eig_res = 0.0;
    for (std::size_t n = 0; n < np; ++n)
        eig_res = std::max(eig_res, std::abs(wlnf[n] - nu * psijets[n].value()));
    worst(eig_res / (1.0 + wlnf_scale));
    if (eig_res > tol * (1.0 + wlnf_scale)) {
        fail("(f²∇ψ)(ln f) is not a constant multiple of ψ (residual " + fmt(eig_res) + ")");
        return R;
    }
    R.nu = nu;
    R.nu_valid = true;

    // implied by the two conditions above: Δψ = -2νψ/f²; recorded as a
    // diagnostic so downstream reports can show the cross-check
    double lap_res = 0.0;
    for (std::size_t n = 0; n < np; ++n) {
        const double f = fjets[n].value();
        lap_res = std::max(lap_res, std::abs(geom::laplacian(frames[n], psijets[n]) +
                                             2.0 * nu * psijets[n].value() / (f * f)));
    }
    R.notes.push_back("laplacian cross-check residual " + fmt(lap_res));

    // ---- h must solve h'' = -ν h -----------------------------------------
    HModel model;
    model.nu = nu;
    double t_absmax = 0.0;
    for (double t : t_grid) t_absmax = std::max(t_absmax, std::abs(t));
    if (nu < -kNuZero && std::sqrt(-nu) * t_absmax > 300.0) {
        fail("exponential profile overflows the time window (nu " + fmt(nu) + ")");
        return R;
    }
    Eigen::MatrixXd Ah(nt, 2);
    Eigen::VectorXd hvec(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        Ah(static_cast<Eigen::Index>(k), 0) = model.b1(t_grid[k]);
        Ah(static_cast<Eigen::Index>(k), 1) = model.b2(t_grid[k]);
        hvec(static_cast<Eigen::Index>(k)) = hv[k];
    }
    Eigen::Vector2d c = Ah.colPivHouseholderQr().solve(hvec);
    model.c1 = c(0);
    model.c2 = c(1);
    const double h_fit = (Ah * c - hvec).cwiseAbs().maxCoeff() / (1.0 + h_scale);
    worst(h_fit);
    if (h_fit > tol * 10.0) {
        fail("h does not satisfy h'' = -nu·h for nu " + fmt(nu) + " (fit residual " +
             fmt(h_fit) + ")");
        return R;
    }

    // reference time: grid point where |h| peaks
    std::size_t k0 = 0;
    for (std::size_t k = 1; k < nt; ++k)
        if (std::abs(hv[k]) > std::abs(hv[k0])) k0 = k;
    model.t0 = t_grid[k0];
    R.t0 = model.t0;

    // ---- φ^b = τ^b ∫_{t0}^t h + ω^b --------------------------------------
    R.omega.assign(nb, 0.0);
    double omega_scale = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
        double sum = 0.0;
        for (std::size_t k = 0; k < nt; ++k)
            sum += phiv[b][k] - R.tau[b] * model.integral(t_grid[k]);
        R.omega[b] = sum / static_cast<double>(nt);
        omega_scale += std::abs(R.omega[b]);
        double spread = 0.0;
        for (std::size_t k = 0; k < nt; ++k)
            spread = std::max(spread, std::abs(phiv[b][k] - R.tau[b] * model.integral(t_grid[k]) -
                                               R.omega[b]));
        worst(spread / (1.0 + phi_scale));
        if (spread > tol * 10.0 * (1.0 + phi_scale)) {
            fail("phi coefficient " + std::to_string(b) +
                 " is not tau·∫h plus a constant (spread " + fmt(spread) + ")");
            return R;
        }
    }

    // ---- condition at the reference time ---------------------------------
    const double hp0 = model.deriv(model.t0);
    double t0_res = 0.0;
    for (std::size_t n = 0; n < np; ++n) {
        double val = hp0 * psijets[n].value();
        for (std::size_t b = 0; b < nb; ++b)
            val += R.omega[b] * field_of_warp(bjets[b][n], fjets[n]) / fjets[n].value();
        t0_res = std::max(t0_res, std::abs(val));
    }
    const double t0_scale = 1.0 + std::abs(hp0) * psi_scale + omega_scale;
    worst(t0_res / t0_scale);
    if (t0_res > tol * 10.0 * t0_scale) {
        fail("h'(t0)·ψ + Σ ω·K(ln f) does not vanish (residual " + fmt(t0_res) + ")");
        return R;
    }

    R.verdict = Verdict::Killing;
    return R;
}

geom::VectorFieldExpr assemble_candidate(const warped::StaticSpacetime& S,
                                         const StructuredCandidate& cand,
                                         const std::vector<geom::VectorFieldExpr>& basis) {
    if (cand.phi.size() != basis.size())
        throw ValidationError("candidate has " + std::to_string(cand.phi.size()) +
                              " phi coefficients for " + std::to_string(basis.size()) +
                              " basis elements");
    const std::vector<std::string>& coords = S.product_chart().coords();
    geom::VectorFieldExpr K;
    K.comps.push_back(expr::mul(expr::rebind(cand.h, coords), expr::rebind(cand.psi, coords)));
    for (int i = 0; i < S.fiber_dim(); ++i) {
        expr::ScalarExpr comp = expr::constant_expr(0.0, coords);
        for (std::size_t b = 0; b < basis.size(); ++b) {
            if (basis[b].dim() != S.fiber_dim())
                throw BindError("basis element " + std::to_string(b) +
                                " does not match the fiber dimension");
            comp = expr::add(comp, expr::mul(expr::rebind(cand.phi[b], coords),
                                             expr::rebind(basis[b].comps[static_cast<std::size_t>(
                                                              i)],
                                                          coords)));
        }
        K.comps.push_back(std::move(comp));
    }
    return K;
}

CompactFilter compact_filter(const warped::StaticSpacetime& S,
                             const std::vector<geom::VectorFieldExpr>& basis,
                             const PointList& fiber_pts, double tol) {
    if (fiber_pts.size() == 0) throw ValidationError("compact filter needs sample points");
    CompactFilter out;
    out.max_kf.assign(basis.size(), 0.0);

    std::vector<expr::Jet2> fjets;
    fjets.reserve(fiber_pts.size());
    double grad_scale = 0.0;
    for (std::size_t n = 0; n < fiber_pts.size(); ++n) {
        fjets.push_back(expr::eval_jet2(S.warp(), fiber_pts.at(n)));
        for (int i = 0; i < S.fiber_dim(); ++i)
            grad_scale = std::max(grad_scale, std::abs(fjets.back().grad(i)));
    }
    for (std::size_t b = 0; b < basis.size(); ++b) {
        for (std::size_t n = 0; n < fiber_pts.size(); ++n) {
            const geom::VectorJet1 kj = geom::vector_jet(basis[b], fiber_pts.at(n));
            out.max_kf[b] = std::max(out.max_kf[b], std::abs(field_of_warp(kj, fjets[n])));
        }
        if (out.max_kf[b] <= tol * (1.0 + grad_scale))
            out.survivors.push_back(static_cast<int>(b));
    }
    return out;
}

} // namespace sst::killing
