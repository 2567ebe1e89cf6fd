#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sst/killing.hpp"
#include "sst/sampling.hpp"
#include "test_helpers.hpp"

using namespace sst;
using namespace sst::killing;
using sst::geom::make_vector_field;
using sst::testing::make_metric;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> t_grid_for(const warped::StaticSpacetime& S, int n = 41) {
    const geom::Interval w = S.t_sample_window();
    return linspace(w.lo, w.hi, n);
}

// degree-2 polynomial with coefficients drawn from [-amp, amp]
std::string random_poly(std::mt19937_64& rng, const std::vector<std::string>& coords,
                        double amp) {
    std::ostringstream out;
    out.precision(17);
    out << uniform_in(rng, -amp, amp);
    for (const auto& c : coords) {
        out << " + " << uniform_in(rng, -amp, amp) << "*" << c;
        out << " + " << uniform_in(rng, -amp, amp) << "*" << c << "^2";
    }
    if (coords.size() >= 2)
        out << " + " << uniform_in(rng, -amp, amp) << "*" << coords[0] << "*" << coords[1];
    return out.str();
}

} // namespace

TEST_CASE("flat plane: isometries, conformal fields, and junk") {
    geom::MetricField M = testing::flat2_metric();
    PointList pts = sample_points(M.chart(), 30, 8001, "flat-killing");

    for (const auto& comps : {std::vector<std::string>{"1", "0"},
                              std::vector<std::string>{"0", "1"},
                              std::vector<std::string>{"-y", "x"}}) {
        FieldCheck fc = classify_field(M, make_vector_field(M.chart(), comps), pts, 1e-8);
        CHECK(fc.verdict == Verdict::Killing);
        CHECK(fc.killing_residual <= 1e-12);
    }

    // dilation: homothety with constant conformal factor 1
    FieldCheck dil = classify_field(M, make_vector_field(M.chart(), {"x", "y"}), pts, 1e-8);
    CHECK(dil.verdict == Verdict::Conformal);
    CHECK(dil.conformal_residual <= 1e-12);
    CHECK(dil.sigma_min == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(dil.sigma_max == doctest::Approx(1.0).epsilon(1e-10));

    // the z² field: conformal with factor 2x
    FieldCheck sq =
        classify_field(M, make_vector_field(M.chart(), {"x^2 - y^2", "2*x*y"}), pts, 1e-8);
    CHECK(sq.verdict == Verdict::Conformal);
    CHECK(sq.sigma_min == doctest::Approx(-4.0).epsilon(1e-6));
    CHECK(sq.sigma_max == doctest::Approx(4.0).epsilon(1e-6));

    FieldCheck junk = classify_field(M, make_vector_field(M.chart(), {"x^2", "0"}), pts, 1e-8);
    CHECK(junk.verdict == Verdict::Neither);
    CHECK(junk.killing_residual > 1e-2);

    CHECK_THROWS_AS(classify_field(M, make_vector_field(M.chart(), {"x", "0"}), PointList{}, 1e-8),
                    ValidationError);
}

TEST_CASE("sphere: the rotation algebra and a gradient conformal field") {
    geom::MetricField M = testing::unit_sphere_metric();
    PointList pts = sample_points(M.chart(), 30, 8002, "sphere-killing");

    for (const auto& comps :
         {std::vector<std::string>{"0", "1"},
          std::vector<std::string>{"sin(ph)", "cos(ph)*cos(th)/sin(th)"},
          std::vector<std::string>{"cos(ph)", "-sin(ph)*cos(th)/sin(th)"}}) {
        FieldCheck fc = classify_field(M, make_vector_field(M.chart(), comps), pts, 1e-8);
        CHECK(fc.verdict == Verdict::Killing);
        CHECK(fc.killing_residual <= 1e-10);
    }

    // grad(cos th) = -sin(th) ∂_th has L_V g = -2 cos(th)·g
    FieldCheck grad = classify_field(M, make_vector_field(M.chart(), {"-sin(th)", "0"}), pts, 1e-8);
    CHECK(grad.verdict == Verdict::Conformal);
    CHECK(grad.sigma_min == doctest::Approx(-std::cos(0.15)).epsilon(1e-6));
    CHECK(grad.sigma_max == doctest::Approx(std::cos(0.15)).epsilon(1e-6));
}

TEST_CASE("hyperbolic plane: Möbius generators are Killing") {
    geom::MetricField M = testing::half_plane_metric();
    PointList pts = sample_points(M.chart(), 30, 8003, "h2-killing");

    for (const auto& comps : {std::vector<std::string>{"1", "0"},
                              std::vector<std::string>{"x", "y"},
                              std::vector<std::string>{"x^2 - y^2", "2*x*y"}}) {
        FieldCheck fc = classify_field(M, make_vector_field(M.chart(), comps), pts, 1e-8);
        CHECK(fc.verdict == Verdict::Killing);
        CHECK(fc.killing_residual <= 1e-10);
    }

    // traceless Lie derivative but nonzero: neither Killing nor conformal
    FieldCheck shear = classify_field(M, make_vector_field(M.chart(), {"y", "0"}), pts, 1e-8);
    CHECK(shear.verdict == Verdict::Neither);
    CHECK(std::abs(shear.sigma_min) <= 1e-12);
    CHECK(std::abs(shear.sigma_max) <= 1e-12);
    CHECK(shear.conformal_residual > 1e-2);
}

TEST_CASE("L_{f²∇ψ} g = 2f²(H^ψ + (df dψ + dψ df)/f) on random data") {
    struct Arena {
        const char* salt;
        geom::MetricField M;
    };
    std::vector<Arena> arenas;
    arenas.push_back({"flat", testing::flat2_metric()});
    arenas.push_back({"sphere", testing::unit_sphere_metric()});
    arenas.push_back({"halfplane", testing::half_plane_metric()});

    std::mt19937_64 rng = seeded_rng(8004, "b-identity");
    int checked = 0;
    for (const auto& [salt, M] : arenas) {
        CAPTURE(salt);
        PointList pts = sample_points(M.chart(), 4, 8004, salt);
        const auto& coords = M.chart().coords();
        for (int trial = 0; trial < 17 && checked < 50; ++trial, ++checked) {
            expr::ScalarExpr f =
                expr::parse("exp(0.3*(" + random_poly(rng, coords, 0.5) + "))", coords);
            expr::ScalarExpr psi = expr::parse(random_poly(rng, coords, 1.0), coords);
            for (std::size_t n = 0; n < pts.size(); ++n) {
                geom::PointFrame F(M, pts.at(n));
                const expr::Jet2 fj = expr::eval_jet2(f, pts.at(n));
                const expr::Jet2 pj = expr::eval_jet2(psi, pts.at(n));

                geom::SymBilinear direct = geom::lie_metric(F, f2_grad_jet(F, fj, pj));
                geom::SymBilinear B = b_tensor(F, fj, pj);
                const double f2 = fj.value() * fj.value();
                const double scale = 1.0 + direct.max_abs();
                for (int i = 0; i < F.dim(); ++i)
                    for (int j = i; j < F.dim(); ++j)
                        CHECK(std::abs(direct(i, j) - 2.0 * f2 * B(i, j)) <= 1e-8 * scale);
            }
        }
    }
    CHECK(checked == 50);
}

TEST_CASE("structured candidate on the cosh fiber: the separable case") {
    warped::StaticSpacetime S = testing::ads2_spacetime();
    PointList pts = sample_points(S.fiber_chart(), 20, 8005, "ads2-killing");
    std::vector<double> ts = t_grid_for(S);
    std::vector<geom::VectorFieldExpr> basis = {make_vector_field(S.fiber_chart(), {"1"})};

    StructuredCandidate cand{expr::parse("cos(t)", std::vector<std::string>{"t"}),
                             expr::parse("tanh(x)", S.fiber_chart().coords()),
                             {expr::parse("sin(t)", std::vector<std::string>{"t"})}};

    StructuredReport R = classify_structured(S, cand, basis, pts, ts, 1e-8);
    CHECK(R.verdict == Verdict::Killing);
    CHECK(R.case_label == "separable");
    REQUIRE(R.nu_valid);
    CHECK(R.nu == doctest::Approx(1.0).epsilon(1e-8));
    REQUIRE(R.tau.size() == 1);
    CHECK(R.tau[0] == doctest::Approx(1.0).epsilon(1e-8));
    REQUIRE(!R.notes.empty());
    CHECK(R.notes[0].find("laplacian") != std::string::npos);

    // independent route: assemble on the product chart and take raw Lie
    // derivatives against the full metric
    geom::VectorFieldExpr K = assemble_candidate(S, cand, basis);
    PointList ppts = sample_points(S.product_chart(), 40, 8005, "ads2-product");
    FieldCheck direct = classify_field(S.product_metric(), K, ppts, 1e-8);
    CHECK(direct.verdict == Verdict::Killing);
    CHECK(direct.killing_residual <= 1e-10);

    // h = t² is outside the h'' = -ν h family, so the candidate must fail
    StructuredCandidate bad = cand;
    bad.h = expr::parse("t^2", std::vector<std::string>{"t"});
    StructuredReport Rb = classify_structured(S, bad, basis, pts, ts, 1e-8);
    CHECK(Rb.verdict == Verdict::Neither);
    CHECK(!Rb.notes.empty());
    bool mentions_family = false;
    for (const auto& note : Rb.notes)
        if (note.find("h''") != std::string::npos) mentions_family = true;
    CHECK(mentions_family);
    FieldCheck bad_direct =
        classify_field(S.product_metric(), assemble_candidate(S, bad, basis), ppts, 1e-8);
    CHECK(bad_direct.verdict == Verdict::Neither);
    CHECK(bad_direct.killing_residual > 1e-3);

    // right family, wrong integration constant structure
    StructuredCandidate off = cand;
    off.phi = {expr::parse("cos(t)", std::vector<std::string>{"t"})};
    StructuredReport Ro = classify_structured(S, off, basis, pts, ts, 1e-8);
    CHECK(Ro.verdict == Verdict::Neither);
}

TEST_CASE("structured candidate on flat space: the boost") {
    warped::StaticSpacetime S = testing::minkowski_spacetime();
    PointList pts = sample_points(S.fiber_chart(), 20, 8006, "boost");
    std::vector<double> ts = t_grid_for(S);
    std::vector<geom::VectorFieldExpr> basis = {make_vector_field(S.fiber_chart(), {"1", "0"}),
                                                make_vector_field(S.fiber_chart(), {"0", "1"})};

    StructuredCandidate cand{expr::parse("1", std::vector<std::string>{"t"}),
                             expr::parse("x", S.fiber_chart().coords()),
                             {expr::parse("t", std::vector<std::string>{"t"}),
                              expr::parse("0", std::vector<std::string>{"t"})}};

    StructuredReport R = classify_structured(S, cand, basis, pts, ts, 1e-8);
    CHECK(R.verdict == Verdict::Killing);
    CHECK(R.case_label == "constant-h");
    REQUIRE(R.nu_valid);
    CHECK(std::abs(R.nu) <= 1e-8);
    REQUIRE(R.tau.size() == 2);
    CHECK(R.tau[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(R.tau[1]) <= 1e-8);

    geom::VectorFieldExpr K = assemble_candidate(S, cand, basis);
    PointList ppts = sample_points(S.product_chart(), 40, 8006, "boost-product");
    FieldCheck direct = classify_field(S.product_metric(), K, ppts, 1e-8);
    CHECK(direct.verdict == Verdict::Killing);
    CHECK(direct.killing_residual <= 1e-10);
}

TEST_CASE("structured candidate with vanishing time part") {
    warped::StaticSpacetime S = testing::sphere_warp_spacetime();
    PointList pts = sample_points(S.fiber_chart(), 20, 8007, "fiber-only");
    std::vector<double> ts = t_grid_for(S);
    auto zero_t = [] { return expr::parse("0", std::vector<std::string>{"t"}); };
    auto one_t = [] { return expr::parse("1", std::vector<std::string>{"t"}); };
    expr::ScalarExpr psi0 = expr::parse("0", S.fiber_chart().coords());

    // ∂_ph is tangent to the level sets of f = 2 + cos(th): Killing
    std::vector<geom::VectorFieldExpr> rot_z = {make_vector_field(S.fiber_chart(), {"0", "1"})};
    StructuredCandidate cand{zero_t(), psi0, {one_t()}};
    StructuredReport R = classify_structured(S, cand, rot_z, pts, ts, 1e-8);
    CHECK(R.verdict == Verdict::Killing);
    CHECK(R.case_label == "fiber-only");
    REQUIRE(R.omega.size() == 1);
    CHECK(R.omega[0] == doctest::Approx(1.0).epsilon(1e-12));

    // a rotation that moves th changes f: rejected
    std::vector<geom::VectorFieldExpr> rot_x = {
        make_vector_field(S.fiber_chart(), {"sin(ph)", "cos(ph)*cos(th)/sin(th)"})};
    StructuredReport Rx = classify_structured(S, StructuredCandidate{zero_t(), psi0, {one_t()}},
                                              rot_x, pts, ts, 1e-8);
    CHECK(Rx.verdict == Verdict::Neither);
    bool mentions_f = false;
    for (const auto& note : Rx.notes)
        if (note.find("annihilate") != std::string::npos) mentions_f = true;
    CHECK(mentions_f);

    // time-dependent coefficient is not allowed when h·ψ ≡ 0
    StructuredCandidate wobble{zero_t(), psi0,
                               {expr::parse("sin(t)", std::vector<std::string>{"t"})}};
    CHECK(classify_structured(S, wobble, rot_z, pts, ts, 1e-8).verdict == Verdict::Neither);

    CHECK_THROWS_AS(
        classify_structured(S, StructuredCandidate{zero_t(), psi0, {}}, rot_z, pts, ts, 1e-8),
        ValidationError);
}

TEST_CASE("static-form candidates h(t)∂_t + V") {
    warped::StaticSpacetime S = testing::hyperbolic_warp_spacetime();
    PointList pts = sample_points(S.fiber_chart(), 20, 8008, "static-form");
    std::vector<double> ts = t_grid_for(S);
    const std::vector<std::string> tf = {"t"};

    // V = x∂_x + y∂_y has V(ln y) = 1, so h = -t closes the Killing equation
    geom::VectorFieldExpr dil = make_vector_field(S.fiber_chart(), {"x", "y"});
    StaticFormCheck a = check_static_form(S, expr::parse("-t", tf), dil, pts, ts, 1e-8);
    CHECK(a.verdict == Verdict::Killing);
    CHECK(a.vlnf_mean == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(a.h_residual <= 1e-10);

    // V = ∂_x is tangent to the level sets of f, so constant h works
    geom::VectorFieldExpr dx = make_vector_field(S.fiber_chart(), {"1", "0"});
    CHECK(check_static_form(S, expr::parse("1", tf), dx, pts, ts, 1e-8).verdict ==
          Verdict::Killing);

    // mismatched profile
    StaticFormCheck c = check_static_form(S, expr::parse("t", tf), dx, pts, ts, 1e-8);
    CHECK(c.verdict == Verdict::Neither);
    CHECK(c.h_residual == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("compact filter keeps the fields tangent to the level sets of f") {
    warped::StaticSpacetime S = testing::sphere_warp_spacetime();
    PointList pts = sample_points(S.fiber_chart(), 30, 8009, "compact-filter");
    std::vector<geom::VectorFieldExpr> basis = {
        make_vector_field(S.fiber_chart(), {"0", "1"}),
        make_vector_field(S.fiber_chart(), {"sin(ph)", "cos(ph)*cos(th)/sin(th)"}),
        make_vector_field(S.fiber_chart(), {"cos(ph)", "-sin(ph)*cos(th)/sin(th)"})};

    CompactFilter cf = compact_filter(S, basis, pts, 1e-8);
    REQUIRE(cf.survivors.size() == 1);
    CHECK(cf.survivors[0] == 0);
    CHECK(cf.max_kf[0] <= 1e-12);
    CHECK(cf.max_kf[1] > 0.5);
    CHECK(cf.max_kf[2] > 0.5);
}

TEST_CASE("round S³ fiber of radius 2: the full rotation algebra") {
    geom::Chart c({"chi", "th", "ph"}, {{0.0, kPi}, {0.0, kPi}, {0.0, 2.0 * kPi}}, 0.2);
    geom::MetricField M = make_metric(
        c, {"4", "0", "0", "4*sin(chi)^2", "0", "4*sin(chi)^2*sin(th)^2"});
    PointList pts = sample_points(c, 15, 8010, "s3-killing");

    const std::vector<std::vector<std::string>> generators = {
        {"0", "0", "1"},
        {"0", "-sin(ph)", "-cos(ph)*cos(th)/sin(th)"},
        {"0", "cos(ph)", "-sin(ph)*cos(th)/sin(th)"},
        {"-cos(th)", "sin(th)*cos(chi)/sin(chi)", "0"},
        {"-sin(th)*cos(ph)", "-cos(chi)*cos(th)*cos(ph)/sin(chi)",
         "cos(chi)*sin(ph)/(sin(chi)*sin(th))"},
        {"-sin(th)*sin(ph)", "-cos(chi)*cos(th)*sin(ph)/sin(chi)",
         "-cos(chi)*cos(ph)/(sin(chi)*sin(th))"}};

    for (std::size_t i = 0; i < generators.size(); ++i) {
        CAPTURE(i);
        FieldCheck fc = classify_field(M, make_vector_field(c, generators[i]), pts, 1e-8);
        CHECK(fc.verdict == Verdict::Killing);
        CHECK(fc.killing_residual <= 1e-10);
    }

    // constant warp: every generator survives the compact filter
    warped::StaticSpacetime S(-testing::kInf, testing::kInf, c, M, expr::parse("2", c.coords()),
                              {.compact = true, .complete = true, .ricci_flat = false}, 2.0, 2.0);
    std::vector<geom::VectorFieldExpr> basis;
    for (const auto& g : generators) basis.push_back(make_vector_field(c, g));
    CompactFilter cf = compact_filter(S, basis, pts, 1e-8);
    CHECK(cf.survivors.size() == 6);
}
