#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sst/sampling.hpp"
#include "sst/warped.hpp"

namespace sst::killing {

enum class Verdict { Killing, Conformal, Neither };
std::string_view to_string(Verdict v);

// Pointwise Lie-derivative classification of a vector field.  The residual at
// a point is the largest singular value of g⁻¹·(L_X g), which is well defined
// for any signature; the conformal residual uses the trace-free part of the
// same matrix, and σ̂ = tr(g⁻¹ L_X g)/(2 dim) is the conformal factor.
struct FieldCheck {
    Verdict verdict = Verdict::Neither;
    double killing_residual = 0.0;
    double conformal_residual = 0.0;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    std::size_t points = 0;
};

FieldCheck classify_field(const geom::MetricField& M, const geom::VectorFieldExpr& X,
                          const PointList& pts, double tol);

// First-order data of W = f²·grad ψ at a point, assembled from the metric
// jets (no symbolic inverse metric needed).
geom::VectorJet1 f2_grad_jet(const geom::PointFrame& F, const expr::Jet2& f_jet,
                             const expr::Jet2& psi_jet);

// B = H^ψ + (1/f)(df ⊗ dψ + dψ ⊗ df).  L_{f²∇ψ} g = 2f²·B, so W is a fiber
// Killing field exactly when B vanishes.
geom::SymBilinear b_tensor(const geom::PointFrame& F, const expr::Jet2& f_jet,
                           const expr::Jet2& psi_jet);

// Candidates of the form K = h(t)·∂_t + V with V a fiber field.  Killing
// exactly when V is fiber Killing, V(ln f) is a pointwise constant c, and
// h' ≡ -c over the window.
struct StaticFormCheck {
    Verdict verdict = Verdict::Neither;
    double field_residual = 0.0; // fiber Killing residual of V
    double vlnf_mean = 0.0;      // fitted constant c = V(ln f)
    double vlnf_spread = 0.0;    // max deviation from the constant
    double h_residual = 0.0;     // max |h' + c| over the time grid
};

StaticFormCheck check_static_form(const warped::StaticSpacetime& S, const expr::ScalarExpr& h,
                                  const geom::VectorFieldExpr& V, const PointList& fiber_pts,
                                  const std::vector<double>& t_grid, double tol);

// K = h(t)·ψ(x)·∂_t + Σ_b φ^b(t)·K_b(x) with K_b a declared fiber Killing
// basis.  h and the φ^b are functions of t alone; ψ lives on the fiber.
struct StructuredCandidate {
    expr::ScalarExpr h;
    expr::ScalarExpr psi;
    std::vector<expr::ScalarExpr> phi;
};

// Outcome of the structure classification.  `case_label` is one of
//   "fiber-only"   h·ψ ≡ 0: K is a constant-coefficient fiber field
//   "constant-h"   h is a nonzero constant
//   "separable"    h varies; the full eigenvalue machinery ran
// When the separable machinery runs, ν is the constant in
// (f²∇ψ)(ln f) = ν·ψ and h must lie in the solution family of h'' = -ν h.
struct StructuredReport {
    std::string case_label;
    Verdict verdict = Verdict::Neither;
    bool nu_valid = false;
    double nu = 0.0;
    std::vector<double> tau;   // expansion of f²∇ψ in the basis
    std::vector<double> omega; // constant part of the φ coefficients
    double t0 = 0.0;           // reference time (arg max |h| on the grid)
    double worst_residual = 0.0;
    std::vector<std::string> notes;
};

StructuredReport classify_structured(const warped::StaticSpacetime& S,
                                     const StructuredCandidate& cand,
                                     const std::vector<geom::VectorFieldExpr>& basis,
                                     const PointList& fiber_pts, const std::vector<double>& t_grid,
                                     double tol);

// The same candidate as one vector field on the product chart, for the
// independent Lie-derivative check against the assembled metric.
geom::VectorFieldExpr assemble_candidate(const warped::StaticSpacetime& S,
                                         const StructuredCandidate& cand,
                                         const std::vector<geom::VectorFieldExpr>& basis);

// On a compact fiber the spacetime Killing fields reduce to c·∂_t plus the
// fiber Killing fields tangent to the level sets of f; this reports which
// basis elements satisfy K(f) ≡ 0.
struct CompactFilter {
    std::vector<int> survivors;  // indices into the basis
    std::vector<double> max_kf;  // max |K_b(f)| over the samples, per element
};

CompactFilter compact_filter(const warped::StaticSpacetime& S,
                             const std::vector<geom::VectorFieldExpr>& basis,
                             const PointList& fiber_pts, double tol);

} // namespace sst::killing
