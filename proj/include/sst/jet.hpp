#pragma once

#include <array>
#include <cassert>
#include <cmath>

namespace sst::expr {

// Charts are small (a handful of coordinates); jets use fixed inline storage
// so evaluation never allocates.
inline constexpr int kMaxDim = 6;
inline constexpr int kMaxTri = kMaxDim * (kMaxDim + 1) / 2;

// Index into a packed upper triangle of a dim x dim symmetric matrix, i <= j.
inline constexpr int tri_index(int dim, int i, int j) {
    return i * dim - i * (i - 1) / 2 + (j - i);
}
inline constexpr int tri_size(int dim) { return dim * (dim + 1) / 2; }

// Second-order Taylor coefficient of a scalar function at a point: value,
// gradient, and symmetric Hessian (packed upper triangle).  Arithmetic on
// jets propagates exact first and second derivatives — no finite differences
// anywhere downstream.
class Jet2 {
public:
    Jet2() : dim_(0), value_(0.0) { grad_.fill(0.0); hess_.fill(0.0); }

    explicit Jet2(int dim, double value = 0.0) : dim_(dim), value_(value) {
        assert(dim >= 0 && dim <= kMaxDim);
        grad_.fill(0.0);
        hess_.fill(0.0);
    }

    static Jet2 constant(int dim, double v) { return Jet2(dim, v); }

    // The coordinate function x_axis seeded at value v.
    static Jet2 variable(int dim, int axis, double v) {
        Jet2 j(dim, v);
        assert(axis >= 0 && axis < dim);
        j.grad_[static_cast<std::size_t>(axis)] = 1.0;
        return j;
    }

    int dim() const { return dim_; }
    double value() const { return value_; }
    double& value() { return value_; }

    double grad(int i) const { return grad_[static_cast<std::size_t>(i)]; }
    double& grad(int i) { return grad_[static_cast<std::size_t>(i)]; }

    // Symmetric access; (i, j) and (j, i) read the same slot.
    double hess(int i, int j) const {
        if (i > j) std::swap(i, j);
        return hess_[static_cast<std::size_t>(tri_index(dim_, i, j))];
    }
    double& hess(int i, int j) {
        if (i > j) std::swap(i, j);
        return hess_[static_cast<std::size_t>(tri_index(dim_, i, j))];
    }

    bool derivatives_are_zero() const {
        for (int i = 0; i < dim_; ++i)
            if (grad_[static_cast<std::size_t>(i)] != 0.0) return false;
        const int m = tri_size(dim_);
        for (int k = 0; k < m; ++k)
            if (hess_[static_cast<std::size_t>(k)] != 0.0) return false;
        return true;
    }

    bool finite() const {
        if (!std::isfinite(value_)) return false;
        for (int i = 0; i < dim_; ++i)
            if (!std::isfinite(grad_[static_cast<std::size_t>(i)])) return false;
        const int m = tri_size(dim_);
        for (int k = 0; k < m; ++k)
            if (!std::isfinite(hess_[static_cast<std::size_t>(k)])) return false;
        return true;
    }

private:
    int dim_;
    double value_;
    std::array<double, kMaxDim> grad_;
    std::array<double, kMaxTri> hess_;
};

// ---- arithmetic ----------------------------------------------------------

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
    assert(a.dim() == b.dim());
    Jet2 r(a.dim(), a.value() + b.value());
    for (int i = 0; i < a.dim(); ++i) r.grad(i) = a.grad(i) + b.grad(i);
    for (int i = 0; i < a.dim(); ++i)
        for (int j = i; j < a.dim(); ++j) r.hess(i, j) = a.hess(i, j) + b.hess(i, j);
    return r;
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
    assert(a.dim() == b.dim());
    Jet2 r(a.dim(), a.value() - b.value());
    for (int i = 0; i < a.dim(); ++i) r.grad(i) = a.grad(i) - b.grad(i);
    for (int i = 0; i < a.dim(); ++i)
        for (int j = i; j < a.dim(); ++j) r.hess(i, j) = a.hess(i, j) - b.hess(i, j);
    return r;
}

inline Jet2 operator-(const Jet2& a) {
    Jet2 r(a.dim(), -a.value());
    for (int i = 0; i < a.dim(); ++i) r.grad(i) = -a.grad(i);
    for (int i = 0; i < a.dim(); ++i)
        for (int j = i; j < a.dim(); ++j) r.hess(i, j) = -a.hess(i, j);
    return r;
}

// Product rule at second order: (ab)'' = a''b + a'b' + b'a' + ab''.
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
    assert(a.dim() == b.dim());
    Jet2 r(a.dim(), a.value() * b.value());
    for (int i = 0; i < a.dim(); ++i)
        r.grad(i) = a.grad(i) * b.value() + a.value() * b.grad(i);
    for (int i = 0; i < a.dim(); ++i)
        for (int j = i; j < a.dim(); ++j)
            r.hess(i, j) = a.hess(i, j) * b.value() + a.value() * b.hess(i, j) +
                           a.grad(i) * b.grad(j) + a.grad(j) * b.grad(i);
    return r;
}

inline Jet2 operator*(double s, const Jet2& a) {
    Jet2 r(a.dim(), s * a.value());
    for (int i = 0; i < a.dim(); ++i) r.grad(i) = s * a.grad(i);
    for (int i = 0; i < a.dim(); ++i)
        for (int j = i; j < a.dim(); ++j) r.hess(i, j) = s * a.hess(i, j);
    return r;
}
inline Jet2 operator*(const Jet2& a, double s) { return s * a; }

// Univariate chain rule: h = f(g) with supplied f(g), f'(g), f''(g).
inline Jet2 compose(const Jet2& g, double f, double df, double ddf) {
    Jet2 r(g.dim(), f);
    for (int i = 0; i < g.dim(); ++i) r.grad(i) = df * g.grad(i);
    for (int i = 0; i < g.dim(); ++i)
        for (int j = i; j < g.dim(); ++j)
            r.hess(i, j) = df * g.hess(i, j) + ddf * g.grad(i) * g.grad(j);
    return r;
}

// 1/b; caller guarantees b.value() != 0.
inline Jet2 recip(const Jet2& b) {
    const double v = b.value();
    return compose(b, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * recip(b); }

} // namespace sst::expr
