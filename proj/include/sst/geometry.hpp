#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "sst/errors.hpp"
#include "sst/expr.hpp"

namespace sst::geom {

// Small dense types with inline storage (no heap for dim <= kMaxDim).
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, expr::kMaxDim, expr::kMaxDim>;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, expr::kMaxDim, 1>;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// A single coordinate chart: ordered coordinate names, a closed sampling box
// per coordinate, and a singular margin.  Sampling shrinks each interval by
// the margin so coordinate singularities on the boundary (sphere poles, axis
// of polar coordinates) are never touched.
class Chart {
public:
    Chart() = default;
    Chart(std::vector<std::string> coords, std::vector<Interval> domain, double singular_margin);

    int dim() const { return static_cast<int>(coords_.size()); }
    const std::vector<std::string>& coords() const { return coords_; }
    const std::vector<Interval>& domain() const { return domain_; }
    double margin() const { return margin_; }

    // Margin-shrunk interval actually used for sampling.  A zero margin gets
    // a hair of extra inset so samples stay off the closed boundary.
    Interval sample_interval(int axis) const;
    bool in_sample_box(std::span<const double> p) const;

private:
    std::vector<std::string> coords_;
    std::vector<Interval> domain_;
    double margin_ = 0.0;
};

// Symmetric bilinear form at a point (metric value, Ricci, Hessian, ...).
// Stored as a packed upper triangle; (i,j) and (j,i) are the same slot.
class SymBilinear {
public:
    SymBilinear() = default;
    explicit SymBilinear(int dim, std::string label = {});

    int dim() const { return dim_; }
    const std::string& label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    double operator()(int i, int j) const {
        if (i > j) std::swap(i, j);
        return tri_[static_cast<std::size_t>(expr::tri_index(dim_, i, j))];
    }
    void set(int i, int j, double v) {
        if (i > j) std::swap(i, j);
        tri_[static_cast<std::size_t>(expr::tri_index(dim_, i, j))] = v;
    }
    void add(int i, int j, double v) {
        if (i > j) std::swap(i, j);
        tri_[static_cast<std::size_t>(expr::tri_index(dim_, i, j))] += v;
    }

    double apply(const Vec& v, const Vec& w) const;
    double max_abs() const;
    Mat matrix() const;
    static SymBilinear from_matrix(const Mat& m, std::string label = {});

private:
    int dim_ = 0;
    std::string label_;
    std::array<double, expr::kMaxTri> tri_{};
};

// Metric tensor as a field of expressions over a chart (packed upper
// triangle).  `signature_hint` is the expected number of negative
// eigenvalues at every sampled point (0 for Riemannian fibers, 1 for the
// assembled product metric).
class MetricField {
public:
    MetricField() = default;
    MetricField(Chart chart, std::vector<expr::ScalarExpr> upper_tri, int signature_hint);

    const Chart& chart() const { return chart_; }
    int dim() const { return chart_.dim(); }
    int signature_hint() const { return signature_hint_; }
    const expr::ScalarExpr& component(int i, int j) const {
        if (i > j) std::swap(i, j);
        return comps_[static_cast<std::size_t>(expr::tri_index(dim(), i, j))];
    }

private:
    Chart chart_;
    std::vector<expr::ScalarExpr> comps_;
    int signature_hint_ = 0;
};

// Vector field with one expression per component, bound to the chart frame.
struct VectorFieldExpr {
    std::vector<expr::ScalarExpr> comps;

    int dim() const { return static_cast<int>(comps.size()); }
};

VectorFieldExpr make_vector_field(const Chart& chart, const std::vector<std::string>& texts);

// First-order data of a vector field at a point: components and their raw
// coordinate partials (all the Lie derivative of the metric needs).
struct VectorJet1 {
    int dim = 0;
    Vec comp;
    Mat dcomp; // dcomp(k, i) = ∂_k X^i
};

VectorJet1 vector_jet(const VectorFieldExpr& X, std::span<const double> p);

struct Tensor3 {
    int dim = 0;
    std::vector<double> a; // Γ^k_ij at k*dim²+i*dim+j
    double at(int k, int i, int j) const {
        return a[static_cast<std::size_t>((k * dim + i) * dim + j)];
    }
};

struct Tensor4 {
    int dim = 0;
    std::vector<double> a; // R^l_ijk at ((l*dim+i)*dim+j)*dim+k
    double at(int l, int i, int j, int k) const {
        return a[static_cast<std::size_t>(((l * dim + i) * dim + j) * dim + k)];
    }
};

// Everything the curvature formulas need at one point, computed once: metric
// component jets, inverse, Christoffel symbols, and (on demand) their
// coordinate derivatives.  Throws GeometryError when |det g| falls below
// 1e-12 scaled by the largest metric entry.
class PointFrame {
public:
    PointFrame(const MetricField& M, std::span<const double> p);

    int dim() const { return dim_; }
    const Vec& point() const { return point_; }
    const Mat& g_matrix() const { return g_; }
    const Mat& ginv_matrix() const { return ginv_; }
    double det() const { return det_; }

    double g(int i, int j) const { return g_(i, j); }
    double ginv(int i, int j) const { return ginv_(i, j); }
    double dg(int k, int i, int j) const; // ∂_k g_ij
    double d2g(int k, int l, int i, int j) const;
    double gamma(int k, int i, int j) const {
        return gamma_[static_cast<std::size_t>((k * dim_ + i) * dim_ + j)];
    }
    double dgamma(int m, int k, int i, int j) const; // ∂_m Γ^k_ij

private:
    void ensure_dgamma() const;

    int dim_ = 0;
    Vec point_;
    std::vector<expr::Jet2> jets_; // packed upper triangle of metric components
    Mat g_, ginv_;
    double det_ = 0.0;
    std::vector<double> gamma_;
    mutable std::vector<double> dgamma_;
};

// ---- pointwise operations ------------------------------------------------

SymBilinear metric_at(const MetricField& M, std::span<const double> p);
Tensor3 christoffel(const MetricField& M, std::span<const double> p);
Vec grad(const MetricField& M, const expr::ScalarExpr& phi, std::span<const double> p);
SymBilinear hessian(const MetricField& M, const expr::ScalarExpr& phi, std::span<const double> p);
double laplacian(const MetricField& M, const expr::ScalarExpr& phi, std::span<const double> p);
Tensor4 riemann(const MetricField& M, std::span<const double> p);
SymBilinear ricci(const MetricField& M, std::span<const double> p);
double scalar_curv(const MetricField& M, std::span<const double> p);
SymBilinear lie_metric(const MetricField& M, const VectorFieldExpr& X, std::span<const double> p);

// Frame-level variants for batch loops that reuse one PointFrame.
Vec grad(const PointFrame& F, const expr::Jet2& phi);
SymBilinear hessian(const PointFrame& F, const expr::Jet2& phi);
double laplacian(const PointFrame& F, const expr::Jet2& phi);
Tensor4 riemann(const PointFrame& F);
SymBilinear ricci(const PointFrame& F);
double scalar_curv(const PointFrame& F);
SymBilinear lie_metric(const PointFrame& F, const VectorJet1& X);

// Number of negative eigenvalues of a symmetric matrix (signature checks).
int negative_eigen_count(const Mat& g, double tol = 1e-12);

} // namespace sst::geom
