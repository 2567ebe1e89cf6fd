#include "doctest.h"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sst/expr.hpp"

using namespace sst;
using namespace sst::expr;

namespace {

const std::vector<std::string> kXY = {"x", "y"};
const std::vector<std::string> kXYZ = {"x", "y", "z"};

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace

TEST_CASE("parse and evaluate basic arithmetic") {
    auto e = parse("x^2 + y^2", kXY);
    const double pt[] = {3.0, 4.0};
    CHECK(eval(e, pt) == doctest::Approx(25.0).epsilon(1e-15));

    auto f = parse("(x + y) * (x - y) / 2", kXY);
    CHECK(eval(f, pt) == doctest::Approx(-3.5).epsilon(1e-15));
}

TEST_CASE("precedence: ^ binds tighter than unary minus, which beats * and /") {
    const std::vector<std::string> x = {"x"};
    const double pt[] = {3.0};
    CHECK(eval(parse("-x^2", x), pt) == doctest::Approx(-9.0));     // -(x^2)
    CHECK(eval(parse("-x*2", x), pt) == doctest::Approx(-6.0));     // (-x)*2
    CHECK(eval(parse("2^-2", x), pt) == doctest::Approx(0.25));
    CHECK(eval(parse("2 ^ 3 ^ 2", x), pt) == doctest::Approx(512.0)); // right-associative
    CHECK(eval(parse("sin(x)^2", x), pt) ==
          doctest::Approx(std::sin(3.0) * std::sin(3.0)).epsilon(1e-15));
}

TEST_CASE("syntax errors carry byte offsets and expected sets") {
    CHECK_THROWS_AS(parse("x + * y", kXY), ParseError);
    try {
        parse("x + * y", kXY);
    } catch (const ParseError& err) {
        CHECK(err.offset == 4);
        CHECK(!err.expected.empty());
    }

    try {
        parse("sin x", kXY); // function application requires parentheses
        CHECK(false);
    } catch (const ParseError& err) {
        // 'sin' alone is an unknown identifier (it is not a coordinate).
        CHECK(err.offset == 0);
    }

    CHECK_THROWS_AS(parse("(x + y", kXY), ParseError);
    CHECK_THROWS_AS(parse("x + y)", kXY), ParseError);
    CHECK_THROWS_AS(parse("", kXY), ParseError);
}

TEST_CASE("unknown identifiers are rejected at parse time") {
    try {
        parse("sin(q)", {&kXY[0], 1}); // chart with only 'x'
        CHECK(false);
    } catch (const ParseError& err) {
        CHECK(std::string(err.what()).find("'q'") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("x(2)", kXY), ParseError); // coordinate used as a function
}

TEST_CASE("named parameters bind at evaluation") {
    auto e = parse("a * x + b", {&kXY[0], 1}, std::vector<std::string>{"a", "b"});
    const double pt[] = {2.0};
    CHECK(eval(e, pt, {{"a", 3.0}, {"b", -1.0}}) == doctest::Approx(5.0));
    CHECK_THROWS_AS(eval(e, pt, {{"a", 3.0}}), EvalError); // b unbound
    // parameters are derivative-free
    auto j = eval_jet2(e, pt, {{"a", 3.0}, {"b", -1.0}});
    CHECK(j.grad(0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(j.hess(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("jet of sin(x)*y at (pi/2, 3)") {
    auto e = parse("sin(x) * y", kXY);
    const double pt[] = {std::numbers::pi / 2, 3.0};
    auto j = eval_jet2(e, pt);
    CHECK(j.value() == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(j.grad(0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(j.grad(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(j.hess(0, 0) == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(j.hess(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(j.hess(1, 1) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("jet of a polynomial against hand derivatives") {
    auto e = parse("x^2*y + y^3", kXY);
    const double pt[] = {1.0, 2.0};
    auto j = eval_jet2(e, pt);
    CHECK(j.value() == doctest::Approx(10.0));
    CHECK(j.grad(0) == doctest::Approx(4.0));
    CHECK(j.grad(1) == doctest::Approx(13.0));
    CHECK(j.hess(0, 0) == doctest::Approx(4.0));
    CHECK(j.hess(0, 1) == doctest::Approx(2.0));
    CHECK(j.hess(1, 1) == doctest::Approx(12.0));
}

TEST_CASE("variable exponent uses exp/log with exact derivatives") {
    auto e = parse("x^y", kXY);
    const double pt[] = {2.0, 3.0};
    auto j = eval_jet2(e, pt);
    const double ln2 = std::log(2.0);
    CHECK(j.value() == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(j.grad(0) == doctest::Approx(12.0).epsilon(1e-14));
    CHECK(j.grad(1) == doctest::Approx(8.0 * ln2).epsilon(1e-14));
    CHECK(j.hess(0, 0) == doctest::Approx(12.0).epsilon(1e-14));
    CHECK(j.hess(0, 1) == doctest::Approx(4.0 * (1.0 + 3.0 * ln2)).epsilon(1e-14));
    CHECK(j.hess(1, 1) == doctest::Approx(8.0 * ln2 * ln2).epsilon(1e-14));

    const double neg[] = {-1.0, 3.0};
    CHECK_THROWS_AS(eval_jet2(e, neg), EvalError); // negative base, variable exponent
}

TEST_CASE("integer powers of negative bases use the power rule") {
    const std::vector<std::string> x = {"x"};
    auto e = parse("x^3", x);
    const double pt[] = {-2.0};
    auto j = eval_jet2(e, pt);
    CHECK(j.value() == doctest::Approx(-8.0));
    CHECK(j.grad(0) == doctest::Approx(12.0));
    CHECK(j.hess(0, 0) == doctest::Approx(-12.0));

    auto inv = parse("x^-2", x);
    const double two[] = {2.0};
    auto k = eval_jet2(inv, two);
    CHECK(k.value() == doctest::Approx(0.25));
    CHECK(k.grad(0) == doctest::Approx(-0.25));
    CHECK(k.hess(0, 0) == doctest::Approx(0.375));
}

TEST_CASE("domain errors carry the offending subexpression offset") {
    const std::vector<std::string> x = {"x"};
    const double zero[] = {0.0};
    const double neg[] = {-1.0};

    CHECK_THROWS_AS(eval(parse("log(x)", x), neg), EvalError);
    CHECK_THROWS_AS(eval(parse("sqrt(x)", x), neg), EvalError);
    CHECK_THROWS_AS(eval(parse("1 / x", x), zero), EvalError);
    CHECK_THROWS_AS(eval(parse("x^-1", x), zero), EvalError);
    CHECK_THROWS_AS(eval(parse("x^0.5", x), neg), EvalError);
    CHECK_THROWS_AS(eval(parse("exp(x*1000)", x), std::array{1.0}), EvalError); // overflow

    // abs evaluates at 0 but is not differentiable there
    CHECK(eval(parse("abs(x)", x), zero) == doctest::Approx(0.0));
    CHECK_THROWS_AS(eval_jet2(parse("abs(x)", x), zero), EvalError);
    // sqrt evaluates at 0 but its derivative is singular
    CHECK(eval(parse("sqrt(x)", x), zero) == doctest::Approx(0.0));
    CHECK_THROWS_AS(eval_jet2(parse("sqrt(x)", x), zero), EvalError);

    try {
        eval(parse("1 + log(0 - x)", x), std::array{2.0});
        CHECK(false);
    } catch (const EvalError& err) {
        CHECK(err.offset == 4); // the log call
    }
}

TEST_CASE("point arity is checked at evaluation") {
    auto e = parse("x + y", kXY);
    const double p1[] = {1.0};
    CHECK_THROWS_AS(eval(e, p1), BindError);
}

TEST_CASE("rebind remaps coordinate axes by name") {
    auto e = parse("x - 2*y", kXY);
    const std::vector<std::string> product = {"t", "x", "y"};
    auto r = rebind(e, product);
    const double pt[] = {99.0, 5.0, 1.0};
    CHECK(eval(r, pt) == doctest::Approx(3.0));
    auto j = eval_jet2(r, pt);
    CHECK(j.grad(0) == doctest::Approx(0.0));
    CHECK(j.grad(1) == doctest::Approx(1.0));
    CHECK(j.grad(2) == doctest::Approx(-2.0));

    const std::vector<std::string> wrong = {"t", "x"};
    CHECK_THROWS_AS(rebind(e, wrong), BindError);
}

// ---- chain-rule exactness against an independent monomial oracle ---------

namespace {

struct Monomial {
    double coeff;
    std::array<int, 3> exps;
};

struct Poly {
    int dim;
    std::vector<Monomial> terms;

    double value(const double* p) const {
        double s = 0.0;
        for (const auto& m : terms) {
            double t = m.coeff;
            for (int i = 0; i < dim; ++i) t *= std::pow(p[i], m.exps[i]);
            s += t;
        }
        return s;
    }

    // Derivative computed straight from the coefficient representation —
    // independent of the jet propagation path.
    double deriv(const double* p, int a) const {
        double s = 0.0;
        for (const auto& m : terms) {
            if (m.exps[a] == 0) continue;
            double t = m.coeff * m.exps[a];
            for (int i = 0; i < dim; ++i) {
                const int e = m.exps[i] - (i == a ? 1 : 0);
                t *= std::pow(p[i], e);
            }
            s += t;
        }
        return s;
    }

    double deriv2(const double* p, int a, int b) const {
        double s = 0.0;
        for (const auto& m : terms) {
            const int ea = m.exps[a];
            const int eb = m.exps[b] - (a == b ? 1 : 0);
            if (ea == 0 || eb <= 0) continue;
            double t = m.coeff * ea * eb;
            for (int i = 0; i < dim; ++i) {
                int e = m.exps[i];
                if (i == a) --e;
                if (i == b) --e;
                t *= std::pow(p[i], e);
            }
            s += t;
        }
        return s;
    }

    std::string render(const std::vector<std::string>& coords) const {
        std::string out;
        for (const auto& m : terms) {
            if (!out.empty()) out += " + ";
            char buf[40];
            std::snprintf(buf, sizeof buf, "(%.17g)", m.coeff);
            out += buf;
            for (int i = 0; i < dim; ++i) {
                if (m.exps[i] == 0) continue;
                out += "*" + coords[static_cast<std::size_t>(i)];
                if (m.exps[i] > 1) out += "^" + std::to_string(m.exps[i]);
            }
        }
        return out.empty() ? "0" : out;
    }
};

Poly random_poly(std::mt19937_64& rng, int dim) {
    Poly p;
    p.dim = dim;
    const int nterms = 1 + static_cast<int>(rng() % 6);
    for (int t = 0; t < nterms; ++t) {
        Monomial m{};
        m.coeff = 4.0 * u01(rng) - 2.0;
        int budget = 4;
        for (int i = 0; i < dim; ++i) {
            const int e = static_cast<int>(rng() % static_cast<unsigned>(budget + 1));
            m.exps[static_cast<std::size_t>(i)] = e;
            budget -= e;
        }
        p.terms.push_back(m);
    }
    return p;
}

} // namespace

TEST_CASE("jets match the monomial oracle on 200 random polynomials") {
    std::mt19937_64 rng(0x5eed00d1u);
    int checked = 0;
    for (int iter = 0; iter < 200; ++iter) {
        const int dim = 1 + static_cast<int>(rng() % 3);
        const std::vector<std::string> coords(kXYZ.begin(), kXYZ.begin() + dim);
        Poly p = random_poly(rng, dim);
        auto e = parse(p.render(coords), coords);
        double pt[3];
        for (int i = 0; i < dim; ++i) pt[i] = 4.0 * u01(rng) - 2.0;

        auto j = eval_jet2(e, {pt, static_cast<std::size_t>(dim)});
        auto close = [](double got, double want) {
            return std::abs(got - want) <= 1e-12 * (1.0 + std::abs(want));
        };
        CHECK(close(j.value(), p.value(pt)));
        for (int a = 0; a < dim; ++a) CHECK(close(j.grad(a), p.deriv(pt, a)));
        for (int a = 0; a < dim; ++a)
            for (int b = a; b < dim; ++b) CHECK(close(j.hess(a, b), p.deriv2(pt, a, b)));
        ++checked;
    }
    CHECK(checked == 200);
}

TEST_CASE("jet evaluation is linear in the expression") {
    std::mt19937_64 rng(0x11aea12ull); // arbitrary fixed seed
    auto f = parse("sin(x)*cosh(y) + x^3", kXY);
    auto g = parse("exp(x/4) - y^2*x", kXY);
    const double a = 2.5, b = -1.25;
    auto combo = add(mul(constant_expr(a, kXY), f), mul(constant_expr(b, kXY), g));
    for (int iter = 0; iter < 50; ++iter) {
        const double pt[] = {4.0 * u01(rng) - 2.0, 4.0 * u01(rng) - 2.0};
        auto jf = eval_jet2(f, pt);
        auto jg = eval_jet2(g, pt);
        auto jc = eval_jet2(combo, pt);
        auto close = [](double got, double want) {
            return std::abs(got - want) <= 1e-12 * (1.0 + std::abs(want));
        };
        CHECK(close(jc.value(), a * jf.value() + b * jg.value()));
        for (int i = 0; i < 2; ++i) CHECK(close(jc.grad(i), a * jf.grad(i) + b * jg.grad(i)));
        for (int i = 0; i < 2; ++i)
            for (int j = i; j < 2; ++j)
                CHECK(close(jc.hess(i, j), a * jf.hess(i, j) + b * jg.hess(i, j)));
    }
}

// ---- print / parse round trip --------------------------------------------

namespace {

ScalarExpr random_tree(std::mt19937_64& rng, int depth) {
    const std::vector<std::string> params = {"a"};
    if (depth <= 0 || rng() % 4 == 0) {
        switch (rng() % 4) {
            case 0: return constant_expr(std::floor(100.0 * u01(rng)) / 8.0, kXY);
            case 1: return parse("x", kXY, params);
            case 2: return parse("y", kXY, params);
            default: return parse("a", kXY, params);
        }
    }
    switch (rng() % 8) {
        case 0: return combine(BinaryOp::Add, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 1: return combine(BinaryOp::Sub, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 2: return combine(BinaryOp::Mul, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 3: return combine(BinaryOp::Div, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 4: return combine(BinaryOp::Pow, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 5: return apply(UnaryOp::Neg, random_tree(rng, depth - 1));
        case 6: return apply(UnaryOp::Sin, random_tree(rng, depth - 1));
        default: return apply(UnaryOp::Cosh, random_tree(rng, depth - 1));
    }
}

} // namespace

TEST_CASE("print/parse round trip is structurally exact") {
    const std::vector<std::string> params = {"a"};
    for (const char* src : {"x^2 + y^2", "sin(x)^2", "-x^2", "x^-2", "2 ^ 3 ^ 2",
                            "x - (y - 1)", "x / y / 2", "-(x + y)", "-x * y",
                            "a*sqrt(x) - tanh(y)", "x^(y + 1)"}) {
        auto e = parse(src, kXY, params);
        auto r = parse(e.print(), kXY, params);
        CAPTURE(src);
        CAPTURE(e.print());
        CHECK(structurally_equal(e, r));
    }

    std::mt19937_64 rng(0x0ddba11u);
    for (int iter = 0; iter < 200; ++iter) {
        auto e = random_tree(rng, 4);
        auto r = parse(e.print(), kXY, params);
        CAPTURE(e.print());
        CHECK(structurally_equal(e, r));
    }
}
