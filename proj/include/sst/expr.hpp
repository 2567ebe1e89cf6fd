#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sst/errors.hpp"
#include "sst/jet.hpp"

namespace sst::expr {

enum class NodeKind : std::uint8_t { Constant, Coordinate, Parameter, Unary, Binary };
enum class UnaryOp : std::uint8_t { Neg, Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh, Abs };
enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div, Pow };

struct Node {
    NodeKind kind = NodeKind::Constant;
    UnaryOp uop = UnaryOp::Neg;
    BinaryOp bop = BinaryOp::Add;
    double constant = 0.0;
    int name = -1;   // index into the expression's name table (Coordinate / Parameter)
    int axis = -1;   // coordinate axis in the bound frame (Coordinate only)
    int lhs = -1;    // child indices into the node arena
    int rhs = -1;
    std::size_t offset = 0; // byte offset in the original source, for diagnostics
};

using ParamMap = std::map<std::string, double, std::less<>>;

// Immutable expression tree over named coordinates and parameters.  Nodes live
// in a flat arena in child-before-parent order, so evaluation is a single
// forward sweep.  An expression is bound to a coordinate frame (an ordered
// list of coordinate names); `rebind` re-resolves coordinate names against a
// different frame (e.g. a fiber expression reused on the product chart).
class ScalarExpr {
public:
    ScalarExpr() = default;

    int root() const { return root_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<std::string>& frame() const { return frame_; }
    int dim() const { return static_cast<int>(frame_.size()); }

    // True when no node references a coordinate (parameters allowed).
    bool coordinate_free() const;

    std::string print() const;

private:
    std::vector<Node> nodes_;
    std::vector<std::string> names_;
    std::vector<std::string> frame_;
    int root_ = -1;

    friend class Parser;
    friend ScalarExpr rebind(const ScalarExpr&, std::span<const std::string> frame);
    friend ScalarExpr combine(BinaryOp, const ScalarExpr&, const ScalarExpr&);
    friend ScalarExpr apply(UnaryOp, const ScalarExpr&);
    friend ScalarExpr constant_expr(double, std::span<const std::string> frame);
};

// Parse `source` against a coordinate frame.  Identifiers must name a
// coordinate, a declared parameter, or one of the built-in functions
// (sin cos tan exp log sqrt sinh cosh tanh abs); anything else is an
// "unknown identifier" ParseError.  Precedence: ^ over unary minus over
// */ over +-; ^ associates to the right; functions require parentheses.
ScalarExpr parse(std::string_view source, std::span<const std::string> coords,
                 std::span<const std::string> params = {});

// Value-only evaluation.  `point` is ordered like the bound frame.
double eval(const ScalarExpr& e, std::span<const double> point, const ParamMap& params = {});

// Value + exact gradient + exact symmetric Hessian via jet propagation.
Jet2 eval_jet2(const ScalarExpr& e, std::span<const double> point, const ParamMap& params = {});

// Re-resolve coordinate names against a new frame (every referenced
// coordinate must be present; throws BindError otherwise).
ScalarExpr rebind(const ScalarExpr& e, std::span<const std::string> frame);

// ---- structural combinators (used when assembling candidate fields) ------

ScalarExpr constant_expr(double v, std::span<const std::string> frame);
ScalarExpr combine(BinaryOp op, const ScalarExpr& a, const ScalarExpr& b); // same frame required
ScalarExpr apply(UnaryOp op, const ScalarExpr& a);

inline ScalarExpr add(const ScalarExpr& a, const ScalarExpr& b) { return combine(BinaryOp::Add, a, b); }
inline ScalarExpr mul(const ScalarExpr& a, const ScalarExpr& b) { return combine(BinaryOp::Mul, a, b); }
inline ScalarExpr negate(const ScalarExpr& a) { return apply(UnaryOp::Neg, a); }

bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b);

} // namespace sst::expr
