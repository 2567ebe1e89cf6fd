#include "sst/cli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sst/causal.hpp"
#include "sst/sampling.hpp"

namespace sst::cli {

namespace {

using manifest::Manifest;
using report::Document;
using report::Status;
using report::json;

constexpr std::string_view kSampledDomainNote = "hypotheses verified on sampled domain only";

std::vector<double> product_point(double t, std::span<const double> fiber_p) {
    std::vector<double> q;
    q.reserve(fiber_p.size() + 1);
    q.push_back(t);
    q.insert(q.end(), fiber_p.begin(), fiber_p.end());
    return q;
}

json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

void fill_field_check(json& rec, const killing::FieldCheck& fc, double tol) {
    rec["verdict"] = killing::to_string(fc.verdict);
    rec["killing_residual"] = fc.killing_residual;
    rec["conformal_residual"] = fc.conformal_residual;
    rec["sigma_range"] = {fc.sigma_min, fc.sigma_max};
    rec["tol"] = tol;
    rec["points"] = fc.points;
}

// ---- curvature -----------------------------------------------------------

void run_curvature(Document& doc, const Manifest& m, const std::string& prefix) {
    const warped::StaticSpacetime& S = m.spacetime;
    const double tol = m.numerics.tol;
    const PointList pts =
        sample_points(S.fiber_chart(), m.numerics.samples, m.numerics.seed, "curvature");
    const geom::Interval tw = S.t_sample_window();
    const std::vector<double> tgrid = linspace(tw.lo, tw.hi, 7);
    std::mt19937_64 rng = seeded_rng(m.numerics.seed, "curvature-vectors");

    const int d = S.fiber_dim();
    double max_ric = 0.0, max_scalar = 0.0, max_tt = 0.0, max_probe = 0.0;
    double tau_min = std::numeric_limits<double>::infinity(), tau_max = -tau_min;

    for (std::size_t n = 0; n < pts.size(); ++n) {
        const auto p = pts.at(n);
        const warped::WarpFrame F(S, p);
        tau_min = std::min(tau_min, F.tau_F);
        tau_max = std::max(tau_max, F.tau_F);

        // closed-form product Ricci from the fiber data
        geom::Mat E = geom::Mat::Zero(d + 1, d + 1);
        E(0, 0) = F.f * F.lap_f;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                E(i + 1, j + 1) = F.ric_F(i, j) - F.hess_f(i, j) / F.f;

        const std::vector<double> q = product_point(tgrid[n % tgrid.size()], p);
        const geom::SymBilinear R = geom::ricci(S.product_metric(), q);
        const double scale = 1.0 + E.cwiseAbs().maxCoeff();
        for (int i = 0; i <= d; ++i)
            for (int j = 0; j <= d; ++j)
                max_ric = std::max(max_ric, std::abs(R(i, j) - E(i, j)) / scale);

        const double tau_closed = warped::scalar_sss(F);
        const double tau_generic = geom::scalar_curv(S.product_metric(), q);
        max_scalar =
            std::max(max_scalar, std::abs(tau_generic - tau_closed) / (1.0 + std::abs(tau_closed)));

        const double tt = F.f * F.lap_f;
        max_tt = std::max(max_tt, std::abs(R(0, 0) - tt) / (1.0 + std::abs(tt)));

        // random bilinear probe of the closed form against the generic matrix
        warped::SpacetimeVector w1, w2;
        w1.v.resize(d);
        w2.v.resize(d);
        w1.u = uniform_in(rng, -1.0, 1.0);
        w2.u = uniform_in(rng, -1.0, 1.0);
        for (int i = 0; i < d; ++i) {
            w1.v(i) = uniform_in(rng, -1.0, 1.0);
            w2.v(i) = uniform_in(rng, -1.0, 1.0);
        }
        const double closed = warped::ricci_sss(F, w1, w2);
        const double generic = R.apply(warped::to_product(w1), warped::to_product(w2));
        max_probe = std::max(max_probe, std::abs(closed - generic) / (1.0 + std::abs(closed)));
    }

    json& range = doc.add(prefix + "fiber-curvature-range", Status::Info);
    range["tau_min"] = tau_min;
    range["tau_max"] = tau_max;
    range["points"] = pts.size();
    range["note"] = kSampledDomainNote;

    auto residual_check = [&](const std::string& name, double residual) {
        json& rec = doc.add(prefix + name, residual <= tol ? Status::Pass : Status::Fail);
        rec["max_relative_residual"] = residual;
        rec["tol"] = tol;
        rec["points"] = pts.size();
        rec["time_grid"] = tgrid.size();
    };
    residual_check("warped-ricci-identity", max_ric);
    residual_check("scalar-identity", max_scalar);
    residual_check("static-observer-ricci", max_tt);
    residual_check("bilinear-probe", max_probe);
}

// ---- killing-check -------------------------------------------------------

void run_killing_check(Document& doc, const Manifest& m, const std::string& prefix) {
    const warped::StaticSpacetime& S = m.spacetime;
    const double tol = m.numerics.tol;
    const PointList pts =
        sample_points(S.fiber_chart(), m.numerics.samples, m.numerics.seed, "killing-check");

    bool any = false;
    for (const std::string& name : m.basis) {
        const killing::FieldCheck fc =
            killing::classify_field(S.fiber_metric(), m.vector_fields.at(name), pts, tol);
        json& rec = doc.add(prefix + "basis:" + name,
                            fc.verdict == killing::Verdict::Killing ? Status::Pass : Status::Fail);
        fill_field_check(rec, fc, tol);
        any = true;
    }
    if (m.check_field) {
        const killing::FieldCheck fc =
            killing::classify_field(S.fiber_metric(), m.vector_fields.at(*m.check_field), pts, tol);
        json& rec = doc.add(prefix + "field:" + *m.check_field,
                            fc.verdict == killing::Verdict::Killing ? Status::Pass : Status::Fail);
        fill_field_check(rec, fc, tol);
        any = true;
    }
    if (m.static_candidate) {
        const geom::Interval tw = S.t_sample_window();
        const std::vector<double> tgrid = linspace(tw.lo, tw.hi, 41);
        const killing::StaticFormCheck sc = killing::check_static_form(
            S, m.static_candidate->h, m.vector_fields.at(m.static_candidate->v), pts, tgrid, tol);
        json& rec = doc.add(prefix + "static-candidate",
                            sc.verdict == killing::Verdict::Killing ? Status::Pass : Status::Fail);
        rec["verdict"] = killing::to_string(sc.verdict);
        rec["field_residual"] = sc.field_residual;
        rec["vlnf_mean"] = sc.vlnf_mean;
        rec["vlnf_spread"] = sc.vlnf_spread;
        rec["h_residual"] = sc.h_residual;
        rec["tol"] = tol;
        rec["points"] = pts.size();
        rec["time_grid"] = tgrid.size();
        any = true;
    }
    if (m.candidate) {
        const geom::Interval tw = S.t_sample_window();
        const std::vector<double> tgrid = linspace(tw.lo, tw.hi, 41);
        const killing::StructuredReport r = killing::classify_structured(
            S, *m.candidate, manifest::resolve_basis(m), pts, tgrid, tol);
        json& rec = doc.add(prefix + "candidate",
                            r.verdict == killing::Verdict::Killing ? Status::Pass : Status::Fail);
        rec["case"] = r.case_label;
        rec["verdict"] = killing::to_string(r.verdict);
        rec["worst_residual"] = r.worst_residual;
        rec["tol"] = tol;
        rec["points"] = pts.size();
        rec["time_grid"] = tgrid.size();
        any = true;
    }
    if (!any)
        throw ValidationError(
            "killing-check needs a [killing] basis, a check field, or a candidate");
}

// ---- killing-classify ----------------------------------------------------

void run_killing_classify(Document& doc, const Manifest& m, const std::string& prefix) {
    if (!m.candidate)
        throw ValidationError(
            "killing-classify needs a structured candidate (candidate.h/psi/phi)");
    const warped::StaticSpacetime& S = m.spacetime;
    const double tol = m.numerics.tol;
    const std::vector<geom::VectorFieldExpr> basis = manifest::resolve_basis(m);
    const PointList pts =
        sample_points(S.fiber_chart(), m.numerics.samples, m.numerics.seed, "killing-classify");
    const geom::Interval tw = S.t_sample_window();
    const std::vector<double> tgrid = linspace(tw.lo, tw.hi, 41);

    const killing::StructuredReport r =
        killing::classify_structured(S, *m.candidate, basis, pts, tgrid, tol);
    json& rec = doc.add(prefix + "structured-candidate",
                        r.verdict == killing::Verdict::Killing ? Status::Pass : Status::Fail);
    rec["case"] = r.case_label;
    rec["verdict"] = killing::to_string(r.verdict);
    rec["nu"] = r.nu_valid ? json(r.nu) : json(nullptr);
    rec["tau"] = r.tau;
    rec["omega"] = r.omega;
    rec["t0"] = r.t0;
    rec["worst_residual"] = r.worst_residual;
    rec["tol"] = tol;
    rec["points"] = pts.size();
    rec["time_grid"] = tgrid.size();
    rec["notes"] = r.notes;

    // independent route: the same candidate as one product-chart field
    const geom::VectorFieldExpr K = killing::assemble_candidate(S, *m.candidate, basis);
    const PointList ppts = sample_points(S.product_chart(), m.numerics.samples, m.numerics.seed,
                                         "killing-assembled");
    const killing::FieldCheck fc = killing::classify_field(S.product_metric(), K, ppts, tol);
    const bool agree =
        (fc.verdict == killing::Verdict::Killing) == (r.verdict == killing::Verdict::Killing);
    json& cross = doc.add(prefix + "assembled-cross-check", agree ? Status::Pass : Status::Fail);
    cross["structured_verdict"] = killing::to_string(r.verdict);
    cross["direct_verdict"] = killing::to_string(fc.verdict);
    cross["killing_residual"] = fc.killing_residual;
    cross["tol"] = tol;
    cross["points"] = fc.points;

    if (S.flags().compact && !basis.empty()) {
        const killing::CompactFilter cf = killing::compact_filter(S, basis, pts, tol);
        json& filt = doc.add(prefix + "compact-filter", Status::Info);
        json survivors = json::array();
        for (int idx : cf.survivors) survivors.push_back(m.basis[static_cast<std::size_t>(idx)]);
        filt["survivors"] = std::move(survivors);
        json kf;
        for (std::size_t b = 0; b < m.basis.size(); ++b) kf[m.basis[b]] = cf.max_kf[b];
        filt["max_kf"] = std::move(kf);
        filt["note"] = "survivors are tangent to the warp level sets; ∂_t always generates";
    }
}

// ---- energy / classify ---------------------------------------------------

void emit_class_checks(Document& doc, const causal::EnergyReport& E, std::size_t points,
                       double tol, const std::string& prefix) {
    json& ric = doc.add(prefix + "ricci-fiber-class", Status::Info);
    ric["class"] = causal::to_string(E.ric_f_class);
    ric["points"] = points;
    ric["tol"] = tol;
    ric["note"] = kSampledDomainNote;

    json& q = doc.add(prefix + "q-class", Status::Info);
    q["class"] = causal::to_string(E.q_class);
    q["points"] = points;
    q["tol"] = tol;
    q["note"] = kSampledDomainNote;
}

void emit_hyperbolicity(Document& doc, const warped::StaticSpacetime& S,
                        const causal::EnergyReport& E, const std::string& prefix) {
    const causal::HyperbolicityReport H = causal::hyperbolicity_classify(S, E);
    json& rec = doc.add(prefix + "hyperbolicity",
                        H.verdict == causal::Hyperbolicity::Inconclusive ? Status::Inconclusive
                                                                         : Status::Pass);
    rec["verdict"] = causal::to_string(H.verdict);
    rec["reasons"] = H.reasons;
    json ev;
    ev["ric_f_class"] = causal::to_string(E.ric_f_class);
    ev["q_class"] = causal::to_string(E.q_class);
    ev["whole_line"] = S.whole_line();
    ev["declared_compact"] = S.flags().compact;
    ev["declared_complete"] = S.flags().complete;
    ev["declared_inf_f"] = optional_number(S.declared_inf_f());
    rec["evidence"] = std::move(ev);
}

void run_energy(Document& doc, const Manifest& m, const std::string& prefix) {
    const warped::StaticSpacetime& S = m.spacetime;
    const double tol = m.numerics.tol;
    const PointList pts =
        sample_points(S.fiber_chart(), m.numerics.samples, m.numerics.seed, "energy");
    const causal::EnergyReport E =
        causal::energy_report(S, pts, m.numerics.causal_samples, m.numerics.seed, tol);

    emit_class_checks(doc, E, pts.size(), tol, prefix);

    json& conv = doc.add(prefix + "convergence-conditions", Status::Info);
    conv["timelike_convergence"] = E.timelike_convergence;
    conv["null_convergence"] = E.null_convergence;
    conv["reversed_convergence"] = E.reversed_convergence;
    conv["null_iff_q"] = E.null_iff_q ? json(*E.null_iff_q) : json(nullptr);
    conv["note"] = kSampledDomainNote;

    // TCC forces a subharmonic warp: Δf/f must be nonnegative wherever TCC holds
    const double lap_scale = 1.0 + std::abs(E.min_lap_over_f);
    const bool lap_ok = E.min_lap_over_f >= -tol * lap_scale;
    json& stat = doc.add(prefix + "static-observer-necessaries",
                         E.timelike_convergence ? (lap_ok ? Status::Pass : Status::Fail)
                                                : Status::Info);
    stat["min_tau_f"] = E.min_tau_f;
    stat["min_lap_over_f"] = E.min_lap_over_f;
    stat["subharmonic_required"] = E.timelike_convergence;

    // the seeded causal-cone sweep must not contradict an established verdict
    const double ric_scale =
        1.0 + std::max(std::abs(E.min_ric_causal), std::abs(E.max_ric_causal));
    std::vector<std::string> violations;
    if (E.timelike_convergence && E.min_ric_causal < -tol * ric_scale)
        violations.push_back("Ric(w,w) < 0 on a causal sample despite the convergence verdict");
    if (E.reversed_convergence && E.max_ric_causal > tol * ric_scale)
        violations.push_back("Ric(w,w) > 0 on a causal sample despite the reversed verdict");
    const bool any_verdict = E.timelike_convergence || E.reversed_convergence;
    json& sweep = doc.add(prefix + "causal-sweep-consistency",
                          !any_verdict         ? Status::Info
                          : violations.empty() ? Status::Pass
                                               : Status::Fail);
    sweep["min_ric_causal"] = E.min_ric_causal;
    sweep["max_ric_causal"] = E.max_ric_causal;
    sweep["min_stress_causal"] = E.min_stress_causal;
    sweep["max_stress_causal"] = E.max_stress_causal;
    sweep["causal_samples"] = E.causal_samples;
    sweep["violations"] = violations;

    emit_hyperbolicity(doc, S, E, prefix);
}

void run_classify(Document& doc, const Manifest& m, const std::string& prefix) {
    const warped::StaticSpacetime& S = m.spacetime;
    const PointList pts =
        sample_points(S.fiber_chart(), m.numerics.samples, m.numerics.seed, "energy");
    const causal::EnergyReport E =
        causal::energy_report(S, pts, m.numerics.causal_samples, m.numerics.seed, m.numerics.tol);
    emit_class_checks(doc, E, pts.size(), m.numerics.tol, prefix);
    emit_hyperbolicity(doc, S, E, prefix);
}

// ---- geodesic ------------------------------------------------------------

void run_geodesic(Document& doc, const Manifest& m, const std::string& prefix) {
    if (!m.geodesic)
        throw ValidationError("the geodesic command needs a [geodesic] section");
    const warped::StaticSpacetime& S = m.spacetime;
    const manifest::GeodesicSpec& G = *m.geodesic;
    const double tol = m.numerics.tol;
    const geom::MetricField& M = S.product_metric();

    const causal::GeodesicResult R =
        causal::integrate_geodesic(M, G.start, G.velocity, G.span, m.numerics.step);
    const double n0 = R.initial_norm;
    const std::string character = std::abs(n0) <= tol * (1.0 + std::abs(n0)) ? "null"
                                  : n0 < 0.0                                 ? "timelike"
                                                                             : "spacelike";

    json& integ = doc.add(prefix + "integration", Status::Info);
    integ["steps"] = R.s.size() - 1;
    integ["final_s"] = R.s.back();
    integ["lorentz_length"] = R.length.back();
    integ["truncated"] = R.truncated;
    if (!R.note.empty()) integ["note"] = R.note;
    integ["initial_norm"] = n0;
    integ["character"] = character;
    integ["step"] = m.numerics.step;

    const double allowed = tol * (1.0 + std::abs(n0));
    json& norm = doc.add(prefix + "norm-conservation",
                         R.max_norm_drift <= allowed ? Status::Pass : Status::Fail);
    norm["max_drift"] = R.max_norm_drift;
    norm["allowed"] = allowed;

    const causal::ConjugateReport C =
        causal::jacobi_conjugate(M, G.start, G.velocity, G.span, m.numerics.step);
    json& conj = doc.add(prefix + "conjugate-points", Status::Info);
    conj["degenerate_frame"] = C.degenerate_frame;
    conj["first_conjugate_s"] = optional_number(C.first_conjugate);
    conj["first_conjugate_length"] = optional_number(C.first_conjugate_length);
    conj["final_determinant"] = C.final_determinant;

    const PointList pts =
        sample_points(S.fiber_chart(), m.numerics.samples, m.numerics.seed, "diameter");
    const std::optional<double> bound = causal::timelike_diameter_bound(S, pts);
    const bool applicable =
        bound.has_value() && C.first_conjugate_length.has_value() && character == "timelike";
    Status st = Status::Info;
    if (applicable)
        st = *C.first_conjugate_length <= *bound * (1.0 + 1e-3) ? Status::Pass : Status::Fail;
    json& diam = doc.add(prefix + "diameter-bound", st);
    diam["bound"] = optional_number(bound);
    diam["definition"] = "pi*sqrt((dim-1)/c), c = min laplacian(f)/f over the samples";
    diam["conjugate_within_bound"] = applicable ? json(st == Status::Pass) : json(nullptr);
}

} // namespace

Document run(std::string_view command, const Manifest& m) {
    Document doc{std::string(command), m};
    if (command == "curvature") {
        run_curvature(doc, m, "");
    } else if (command == "killing-check") {
        run_killing_check(doc, m, "");
    } else if (command == "killing-classify") {
        run_killing_classify(doc, m, "");
    } else if (command == "energy") {
        run_energy(doc, m, "");
    } else if (command == "classify") {
        run_classify(doc, m, "");
    } else if (command == "geodesic") {
        run_geodesic(doc, m, "");
    } else if (command == "full-report") {
        run_curvature(doc, m, "curvature/");
        if (!m.basis.empty() || m.check_field || m.static_candidate || m.candidate)
            run_killing_check(doc, m, "killing-check/");
        if (m.candidate) run_killing_classify(doc, m, "killing-classify/");
        run_energy(doc, m, "energy/");
        if (m.geodesic) run_geodesic(doc, m, "geodesic/");
    } else {
        throw ValidationError("unknown command '" + std::string(command) + "'");
    }
    return doc;
}

} // namespace sst::cli
