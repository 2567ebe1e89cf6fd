#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sst/killing.hpp"
#include "sst/warped.hpp"

namespace sst::manifest {

// Numeric knobs shared by every command; CLI flags override these.
struct Numerics {
    int samples = 200;          // random fiber samples on top of the lattice
    int causal_samples = 2000;  // causal-cone draws for the energy sweep
    std::uint64_t seed = 12345;
    double tol = 1e-8;
    double step = 1e-3;         // geodesic integrator step
};

// Geodesic request on the product chart (start and velocity ordered t first).
struct GeodesicSpec {
    std::vector<double> start;
    std::vector<double> velocity;
    double span = 1.0;
};

// A candidate K = h(t)·∂_t + V with V naming a declared fiber field.
struct StaticCandidate {
    expr::ScalarExpr h;
    std::string v;
};

// Fully validated manifest: every expression is compiled against its chart,
// every name resolves, unknown sections/keys are hard errors, and the warp
// positivity / Riemannian fiber signature were swept at load time.
struct Manifest {
    warped::StaticSpacetime spacetime;
    std::map<std::string, geom::VectorFieldExpr> vector_fields;
    std::map<std::string, expr::ScalarExpr> scalar_fields;
    std::vector<std::string> basis;                       // names of fiber Killing fields
    std::optional<std::string> check_field;               // field to classify
    std::optional<killing::StructuredCandidate> candidate; // h(t)ψ∂_t + Σ φ^b K_b
    std::optional<StaticCandidate> static_candidate;
    Numerics numerics;
    std::optional<GeodesicSpec> geodesic;
    std::string origin; // file path, or "<inline>" for in-memory text
    std::string source; // raw text; the report digest is taken over this
};

Manifest parse_manifest(std::string_view text, std::string_view origin);
Manifest load_manifest(const std::string& path);

// The declared basis names resolved to their vector fields, in basis order.
std::vector<geom::VectorFieldExpr> resolve_basis(const Manifest& m);

} // namespace sst::manifest
