#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sst/sampling.hpp"
#include "sst/warped.hpp"

namespace sst::causal {

// Sign class of a symmetric bilinear form measured against a Riemannian
// metric (generalized eigenvalues of T v = λ g v).
enum class Definiteness {
    Zero,
    PositiveDefinite,
    PositiveSemidefinite,
    NegativeDefinite,
    NegativeSemidefinite,
    Indefinite,
};
std::string_view to_string(Definiteness d);

Definiteness classify_form(const geom::SymBilinear& T, const geom::Mat& g, double tol);

// Pointwise sign flags AND-aggregated over a sample sweep; `overall()` maps
// the surviving flags back to the strongest class they support.
struct DefinitenessSummary {
    bool pd = true, psd = true, nd = true, nsd = true;
    std::size_t points = 0;

    void absorb(const geom::SymBilinear& T, const geom::Mat& g, double tol);
    Definiteness overall() const;
};

bool is_psd(Definiteness d);
bool is_nsd(Definiteness d);

// Sign data for the energy conditions: the classes of Ric_F and
// Q = Δf·g_F − H^f over the fiber, the convergence-condition verdicts they
// establish, and empirical minima of Ric(w,w) and 8πT(w,w) over a seeded
// sweep of causal vectors (u = ±λ‖V‖/f with λ ≥ 1).
struct EnergyReport {
    Definiteness ric_f_class = Definiteness::Indefinite;
    Definiteness q_class = Definiteness::Indefinite;
    bool timelike_convergence = false; // established: both forms psd
    bool null_convergence = false;
    bool reversed_convergence = false; // both forms nsd: Ric(w,w) ≤ 0 on causal w
    std::optional<bool> null_iff_q;    // Ricci-flat fiber: NCC ⟺ Q psd
    double min_tau_f = 0.0;            // static-observer energy density ∝ τ_F
    double min_lap_over_f = 0.0;       // static-observer Ricci Δf/f
    double min_ric_causal = 0.0;
    double max_ric_causal = 0.0;
    double min_stress_causal = 0.0;
    double max_stress_causal = 0.0;
    std::size_t causal_samples = 0;
    int fiber_dim = 0;
};

EnergyReport energy_report(const warped::StaticSpacetime& S, const PointList& fiber_pts,
                           int causal_samples, std::uint64_t seed, double tol);

enum class Hyperbolicity { TrivialPseudoDistance, ConformallyHyperbolic, Inconclusive };
std::string_view to_string(Hyperbolicity h);

struct HyperbolicityReport {
    Hyperbolicity verdict = Hyperbolicity::Inconclusive;
    std::vector<std::string> reasons;
};

// Decided from the energy classes and the declared fiber flags: a real line
// factor with both forms ≤ 0 on a compact (or complete, warp bounded away
// from zero) fiber collapses the pseudo-distance; Ric_F ≥ 0 with Q > 0 gives
// the conformally hyperbolic class.
HyperbolicityReport hyperbolicity_classify(const warped::StaticSpacetime& S,
                                           const EnergyReport& E);

// ---- geodesics -----------------------------------------------------------

struct GeodesicState {
    geom::Vec x, v;
};

struct GeodesicResult {
    std::vector<double> s;            // parameter values, s[0] = 0
    std::vector<double> length;       // running Lorentzian length ∫√|g(γ',γ')|
    std::vector<GeodesicState> states;
    bool truncated = false;           // stopped at the chart sampling box
    std::string note;
    double initial_norm = 0.0;        // g(γ', γ') at the start
    double max_norm_drift = 0.0;      // max |g(γ', γ') - initial| along the run
};

// Fixed-step fourth-order Runge–Kutta for x'' = -Γ(x)(x', x').  Works on any
// chart metric, fiber or product; stops early (flagging `truncated`) when the
// next state would leave the chart sampling box.
GeodesicResult integrate_geodesic(const geom::MetricField& M, std::span<const double> x0,
                                  std::span<const double> v0, double span_len, double step);

struct ConjugateReport {
    GeodesicResult path;
    bool degenerate_frame = false;        // null tangent: determinant test is void
    std::optional<double> first_conjugate;        // affine parameter
    std::optional<double> first_conjugate_length; // same point in Lorentzian length
    double final_determinant = 0.0;
};

// Integrates the n-1 Jacobi fields J(0) = 0, J'(0) = basis of γ'(0)^⊥ along
// the geodesic and locates the first sign change of
// D(s) = det[J_1 … J_{n-1}, γ'], bisected down to 1e-8 in s.
ConjugateReport jacobi_conjugate(const geom::MetricField& M, std::span<const double> x0,
                                 std::span<const double> v0, double span_len, double step);

// π·sqrt((n-1)/c) with c = min Δf/f over the fiber samples; empty when the
// sampled infimum is not positive beyond roundoff.
std::optional<double> timelike_diameter_bound(const warped::StaticSpacetime& S,
                                              const PointList& fiber_pts);

} // namespace sst::causal
