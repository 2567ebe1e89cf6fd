#include "sst/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace sst::geom {

namespace {

std::string format_point(std::span<const double> p) {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out << ", ";
        out << p[i];
    }
    out << ')';
    return out.str();
}

} // namespace

// ---- Chart ---------------------------------------------------------------

Chart::Chart(std::vector<std::string> coords, std::vector<Interval> domain, double singular_margin)
    : coords_(std::move(coords)), domain_(std::move(domain)), margin_(singular_margin) {
    if (coords_.empty()) throw GeometryError("chart needs at least one coordinate");
    if (coords_.size() > static_cast<std::size_t>(expr::kMaxDim))
        throw GeometryError("chart dimension " + std::to_string(coords_.size()) +
                            " exceeds the cap of " + std::to_string(expr::kMaxDim));
    if (domain_.size() != coords_.size())
        throw GeometryError("chart has " + std::to_string(coords_.size()) + " coordinates but " +
                            std::to_string(domain_.size()) + " domain intervals");
    std::set<std::string> seen;
    for (const auto& c : coords_)
        if (!seen.insert(c).second) throw GeometryError("duplicate coordinate name '" + c + "'");
    if (margin_ < 0.0) throw GeometryError("singular margin must be non-negative");
    for (std::size_t i = 0; i < domain_.size(); ++i) {
        if (!(domain_[i].lo < domain_[i].hi))
            throw GeometryError("empty domain interval for coordinate '" + coords_[i] + "'");
        if (domain_[i].hi - domain_[i].lo <= 2.0 * margin_)
            throw GeometryError("domain interval for coordinate '" + coords_[i] +
                                "' is empty after the singular-margin shrink");
    }
}

Interval Chart::sample_interval(int axis) const {
    Interval iv = domain_[static_cast<std::size_t>(axis)];
    iv.lo += margin_;
    iv.hi -= margin_;
    if (margin_ == 0.0) {
        const double inset = 1e-9 * (iv.hi - iv.lo);
        iv.lo += inset;
        iv.hi -= inset;
    }
    return iv;
}

bool Chart::in_sample_box(std::span<const double> p) const {
    for (int i = 0; i < dim(); ++i) {
        const Interval iv = sample_interval(i);
        if (p[static_cast<std::size_t>(i)] < iv.lo || p[static_cast<std::size_t>(i)] > iv.hi)
            return false;
    }
    return true;
}

// ---- SymBilinear ---------------------------------------------------------

SymBilinear::SymBilinear(int dim, std::string label) : dim_(dim), label_(std::move(label)) {
    tri_.fill(0.0);
}

double SymBilinear::apply(const Vec& v, const Vec& w) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) s += (*this)(i, j) * v(i) * w(j);
    return s;
}

double SymBilinear::max_abs() const {
    double m = 0.0;
    for (int k = 0; k < expr::tri_size(dim_); ++k)
        m = std::max(m, std::abs(tri_[static_cast<std::size_t>(k)]));
    return m;
}

Mat SymBilinear::matrix() const {
    Mat m(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
    return m;
}

SymBilinear SymBilinear::from_matrix(const Mat& m, std::string label) {
    SymBilinear b(static_cast<int>(m.rows()), std::move(label));
    for (int i = 0; i < b.dim(); ++i)
        for (int j = i; j < b.dim(); ++j) b.set(i, j, 0.5 * (m(i, j) + m(j, i)));
    return b;
}

// ---- MetricField ---------------------------------------------------------

MetricField::MetricField(Chart chart, std::vector<expr::ScalarExpr> upper_tri, int signature_hint)
    : chart_(std::move(chart)), signature_hint_(signature_hint) {
    const int d = chart_.dim();
    if (upper_tri.size() != static_cast<std::size_t>(expr::tri_size(d)))
        throw BindError("metric needs " + std::to_string(expr::tri_size(d)) +
                        " components (packed upper triangle), got " +
                        std::to_string(upper_tri.size()));
    comps_.reserve(upper_tri.size());
    for (auto& e : upper_tri) comps_.push_back(expr::rebind(e, chart_.coords()));
}

VectorFieldExpr make_vector_field(const Chart& chart, const std::vector<std::string>& texts) {
    if (texts.size() != static_cast<std::size_t>(chart.dim()))
        throw BindError("vector field needs " + std::to_string(chart.dim()) +
                        " components, got " + std::to_string(texts.size()));
    VectorFieldExpr X;
    X.comps.reserve(texts.size());
    for (const auto& t : texts) X.comps.push_back(expr::parse(t, chart.coords()));
    return X;
}

VectorJet1 vector_jet(const VectorFieldExpr& X, std::span<const double> p) {
    VectorJet1 out;
    out.dim = X.dim();
    out.comp.resize(out.dim);
    out.dcomp.resize(out.dim, out.dim);
    for (int i = 0; i < out.dim; ++i) {
        const expr::Jet2 j = expr::eval_jet2(X.comps[static_cast<std::size_t>(i)], p);
        out.comp(i) = j.value();
        for (int k = 0; k < out.dim; ++k) out.dcomp(k, i) = j.grad(k);
    }
    return out;
}

// ---- PointFrame ----------------------------------------------------------

PointFrame::PointFrame(const MetricField& M, std::span<const double> p) : dim_(M.dim()) {
    if (static_cast<int>(p.size()) != dim_)
        throw BindError("point length " + std::to_string(p.size()) +
                        " does not match chart dimension " + std::to_string(dim_));
    point_.resize(dim_);
    for (int i = 0; i < dim_; ++i) point_(i) = p[static_cast<std::size_t>(i)];

    jets_.reserve(static_cast<std::size_t>(expr::tri_size(dim_)));
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) jets_.push_back(expr::eval_jet2(M.component(i, j), p));

    g_.resize(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) {
            const double v = jets_[static_cast<std::size_t>(expr::tri_index(dim_, i, j))].value();
            g_(i, j) = v;
            g_(j, i) = v;
        }

    det_ = g_.determinant();
    const double scale = std::max(1.0, g_.cwiseAbs().maxCoeff());
    if (std::abs(det_) < 1e-12 * scale)
        throw GeometryError("metric is degenerate at " + format_point(p) +
                            " (|det| = " + std::to_string(std::abs(det_)) + ")");
    ginv_ = g_.inverse();

    // Γ^k_ij = ½ g^{kl} (∂_i g_jl + ∂_j g_il − ∂_l g_ij)
    gamma_.assign(static_cast<std::size_t>(dim_ * dim_ * dim_), 0.0);
    for (int k = 0; k < dim_; ++k)
        for (int i = 0; i < dim_; ++i)
            for (int j = i; j < dim_; ++j) {
                double s = 0.0;
                for (int l = 0; l < dim_; ++l)
                    s += ginv_(k, l) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
                s *= 0.5;
                gamma_[static_cast<std::size_t>((k * dim_ + i) * dim_ + j)] = s;
                gamma_[static_cast<std::size_t>((k * dim_ + j) * dim_ + i)] = s;
            }
}

double PointFrame::dg(int k, int i, int j) const {
    if (i > j) std::swap(i, j);
    return jets_[static_cast<std::size_t>(expr::tri_index(dim_, i, j))].grad(k);
}

double PointFrame::d2g(int k, int l, int i, int j) const {
    if (i > j) std::swap(i, j);
    return jets_[static_cast<std::size_t>(expr::tri_index(dim_, i, j))].hess(k, l);
}

double PointFrame::dgamma(int m, int k, int i, int j) const {
    ensure_dgamma();
    return dgamma_[static_cast<std::size_t>(((m * dim_ + k) * dim_ + i) * dim_ + j)];
}

// ∂_m Γ^k_ij from the metric jets: the derivative of the inverse metric is
// −g^{ka} (∂_m g_ab) g^{bl}, the rest is the second-derivative part.  Only
// first and second metric derivatives appear — exactly what the jets carry.
void PointFrame::ensure_dgamma() const {
    if (!dgamma_.empty()) return;
    const int d = dim_;
    // dginv(m, k, l)
    std::vector<double> dginv(static_cast<std::size_t>(d * d * d), 0.0);
    for (int m = 0; m < d; ++m)
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) {
                double s = 0.0;
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b) s += ginv_(k, a) * dg(m, a, b) * ginv_(b, l);
                dginv[static_cast<std::size_t>((m * d + k) * d + l)] = -s;
            }

    dgamma_.assign(static_cast<std::size_t>(d * d * d * d), 0.0);
    for (int m = 0; m < d; ++m)
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = i; j < d; ++j) {
                    double s = 0.0;
                    for (int l = 0; l < d; ++l) {
                        s += dginv[static_cast<std::size_t>((m * d + k) * d + l)] *
                             (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
                        s += ginv_(k, l) *
                             (d2g(m, i, j, l) + d2g(m, j, i, l) - d2g(m, l, i, j));
                    }
                    s *= 0.5;
                    dgamma_[static_cast<std::size_t>(((m * d + k) * d + i) * d + j)] = s;
                    dgamma_[static_cast<std::size_t>(((m * d + k) * d + j) * d + i)] = s;
                }
}

// ---- curvature -----------------------------------------------------------

Tensor4 riemann(const PointFrame& F) {
    const int d = F.dim();
    Tensor4 R;
    R.dim = d;
    R.a.assign(static_cast<std::size_t>(d * d * d * d), 0.0);
    // R^l_ijk = ∂_j Γ^l_ki − ∂_k Γ^l_ji + Γ^l_jm Γ^m_ki − Γ^l_km Γ^m_ji
    for (int l = 0; l < d; ++l)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) {
                    double s = F.dgamma(j, l, k, i) - F.dgamma(k, l, j, i);
                    for (int m = 0; m < d; ++m)
                        s += F.gamma(l, j, m) * F.gamma(m, k, i) -
                             F.gamma(l, k, m) * F.gamma(m, j, i);
                    R.a[static_cast<std::size_t>(((l * d + i) * d + j) * d + k)] = s;
                }
    return R;
}

SymBilinear ricci(const PointFrame& F) {
    const int d = F.dim();
    SymBilinear out(d, "ricci");
    // Ric_jk = ∂_i Γ^i_kj − ∂_k Γ^i_ij + Γ^i_im Γ^m_kj − Γ^i_km Γ^m_ij
    for (int j = 0; j < d; ++j)
        for (int k = j; k < d; ++k) {
            double s = 0.0;
            for (int i = 0; i < d; ++i) {
                s += F.dgamma(i, i, k, j) - F.dgamma(k, i, i, j);
                for (int m = 0; m < d; ++m)
                    s += F.gamma(i, i, m) * F.gamma(m, k, j) -
                         F.gamma(i, k, m) * F.gamma(m, i, j);
            }
            out.set(j, k, s);
        }
    return out;
}

double scalar_curv(const PointFrame& F) {
    const SymBilinear ric = ricci(F);
    double s = 0.0;
    for (int i = 0; i < F.dim(); ++i)
        for (int j = 0; j < F.dim(); ++j) s += F.ginv(i, j) * ric(i, j);
    return s;
}

Vec grad(const PointFrame& F, const expr::Jet2& phi) {
    Vec v(F.dim());
    for (int i = 0; i < F.dim(); ++i) {
        double s = 0.0;
        for (int j = 0; j < F.dim(); ++j) s += F.ginv(i, j) * phi.grad(j);
        v(i) = s;
    }
    return v;
}

SymBilinear hessian(const PointFrame& F, const expr::Jet2& phi) {
    const int d = F.dim();
    SymBilinear H(d, "hessian");
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            double s = phi.hess(i, j);
            for (int k = 0; k < d; ++k) s -= F.gamma(k, i, j) * phi.grad(k);
            H.set(i, j, s);
        }
    return H;
}

double laplacian(const PointFrame& F, const expr::Jet2& phi) {
    const SymBilinear H = hessian(F, phi);
    double s = 0.0;
    for (int i = 0; i < F.dim(); ++i)
        for (int j = 0; j < F.dim(); ++j) s += F.ginv(i, j) * H(i, j);
    return s;
}

// (L_X g)_ij = X^k ∂_k g_ij + g_kj ∂_i X^k + g_ik ∂_j X^k
SymBilinear lie_metric(const PointFrame& F, const VectorJet1& X) {
    const int d = F.dim();
    if (X.dim != d) throw BindError("vector field dimension does not match the metric chart");
    SymBilinear L(d, "lie_metric");
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) {
                s += X.comp(k) * F.dg(k, i, j);
                s += F.g(k, j) * X.dcomp(i, k);
                s += F.g(i, k) * X.dcomp(j, k);
            }
            L.set(i, j, s);
        }
    return L;
}

// ---- field-level wrappers ------------------------------------------------

SymBilinear metric_at(const MetricField& M, std::span<const double> p) {
    PointFrame F(M, p);
    SymBilinear out = SymBilinear::from_matrix(F.g_matrix(), "metric");
    return out;
}

Tensor3 christoffel(const MetricField& M, std::span<const double> p) {
    PointFrame F(M, p);
    const int d = F.dim();
    Tensor3 out;
    out.dim = d;
    out.a.resize(static_cast<std::size_t>(d * d * d));
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                out.a[static_cast<std::size_t>((k * d + i) * d + j)] = F.gamma(k, i, j);
    return out;
}

Vec grad(const MetricField& M, const expr::ScalarExpr& phi, std::span<const double> p) {
    PointFrame F(M, p);
    return grad(F, expr::eval_jet2(phi, p));
}

SymBilinear hessian(const MetricField& M, const expr::ScalarExpr& phi, std::span<const double> p) {
    PointFrame F(M, p);
    return hessian(F, expr::eval_jet2(phi, p));
}

double laplacian(const MetricField& M, const expr::ScalarExpr& phi, std::span<const double> p) {
    PointFrame F(M, p);
    return laplacian(F, expr::eval_jet2(phi, p));
}

Tensor4 riemann(const MetricField& M, std::span<const double> p) {
    PointFrame F(M, p);
    return riemann(F);
}

SymBilinear ricci(const MetricField& M, std::span<const double> p) {
    PointFrame F(M, p);
    return ricci(F);
}

double scalar_curv(const MetricField& M, std::span<const double> p) {
    PointFrame F(M, p);
    return scalar_curv(F);
}

SymBilinear lie_metric(const MetricField& M, const VectorFieldExpr& X, std::span<const double> p) {
    PointFrame F(M, p);
    return lie_metric(F, vector_jet(X, p));
}

int negative_eigen_count(const Mat& g, double tol) {
    Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
    int count = 0;
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    for (int i = 0; i < g.rows(); ++i)
        if (es.eigenvalues()(i) < -tol * scale) ++count;
    return count;
}

} // namespace sst::geom
