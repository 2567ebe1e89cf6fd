#include "sst/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace sst::expr {

namespace {

const std::map<std::string_view, UnaryOp> kFunctions = {
    {"sin", UnaryOp::Sin},   {"cos", UnaryOp::Cos},   {"tan", UnaryOp::Tan},
    {"exp", UnaryOp::Exp},   {"log", UnaryOp::Log},   {"sqrt", UnaryOp::Sqrt},
    {"sinh", UnaryOp::Sinh}, {"cosh", UnaryOp::Cosh}, {"tanh", UnaryOp::Tanh},
    {"abs", UnaryOp::Abs},
};

const char* function_name(UnaryOp op) {
    switch (op) {
        case UnaryOp::Neg: return "-";
        case UnaryOp::Sin: return "sin";
        case UnaryOp::Cos: return "cos";
        case UnaryOp::Tan: return "tan";
        case UnaryOp::Exp: return "exp";
        case UnaryOp::Log: return "log";
        case UnaryOp::Sqrt: return "sqrt";
        case UnaryOp::Sinh: return "sinh";
        case UnaryOp::Cosh: return "cosh";
        case UnaryOp::Tanh: return "tanh";
        case UnaryOp::Abs: return "abs";
    }
    return "?";
}

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind = Tok::End;
    double number = 0.0;
    std::string_view text;
    std::size_t offset = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        Token t;
        t.offset = pos_;
        if (pos_ >= src_.size()) { t.kind = Tok::End; return t; }
        const char c = src_[pos_];
        switch (c) {
            case '+': ++pos_; t.kind = Tok::Plus; return t;
            case '-': ++pos_; t.kind = Tok::Minus; return t;
            case '*': ++pos_; t.kind = Tok::Star; return t;
            case '/': ++pos_; t.kind = Tok::Slash; return t;
            case '^': ++pos_; t.kind = Tok::Caret; return t;
            case '(': ++pos_; t.kind = Tok::LParen; return t;
            case ')': ++pos_; t.kind = Tok::RParen; return t;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(t);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            t.kind = Tok::Ident;
            t.text = src_.substr(start, pos_ - start);
            return t;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " +
                             std::to_string(t.offset),
                         t.offset);
    }

private:
    Token lex_number(Token t) {
        const char* begin = src_.data() + pos_;
        const char* end = src_.data() + src_.size();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{} || ptr == begin)
            throw ParseError("malformed number at offset " + std::to_string(t.offset), t.offset);
        pos_ += static_cast<std::size_t>(ptr - begin);
        t.kind = Tok::Number;
        t.number = value;
        return t;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

} // namespace

// Recursive-descent parser over the token stream.  Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?          (right-associative)
//   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
class Parser {
public:
    Parser(std::string_view src, std::span<const std::string> coords,
           std::span<const std::string> params)
        : lexer_(src) {
        for (std::size_t i = 0; i < coords.size(); ++i)
            coord_axis_.emplace(coords[i], static_cast<int>(i));
        for (const auto& p : params) params_.insert(p);
        out_.frame_.assign(coords.begin(), coords.end());
        advance();
    }

    ScalarExpr run() {
        out_.root_ = parse_expr();
        if (cur_.kind != Tok::End)
            throw ParseError("unexpected trailing input at offset " + std::to_string(cur_.offset),
                             cur_.offset, {"operator", "end of input"});
        return std::move(out_);
    }

private:
    void advance() { cur_ = lexer_.next(); }

    int push(Node n) {
        out_.nodes_.push_back(n);
        return static_cast<int>(out_.nodes_.size() - 1);
    }

    int intern_name(std::string_view name) {
        auto it = name_index_.find(name);
        if (it != name_index_.end()) return it->second;
        out_.names_.emplace_back(name);
        int idx = static_cast<int>(out_.names_.size() - 1);
        name_index_.emplace(out_.names_.back(), idx);
        return idx;
    }

    int parse_expr() {
        int lhs = parse_term();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            Node n;
            n.kind = NodeKind::Binary;
            n.bop = cur_.kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
            n.offset = cur_.offset;
            advance();
            n.lhs = lhs;
            n.rhs = parse_term();
            lhs = push(n);
        }
        return lhs;
    }

    int parse_term() {
        int lhs = parse_factor();
        while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
            Node n;
            n.kind = NodeKind::Binary;
            n.bop = cur_.kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
            n.offset = cur_.offset;
            advance();
            n.lhs = lhs;
            n.rhs = parse_factor();
            lhs = push(n);
        }
        return lhs;
    }

    int parse_factor() {
        if (cur_.kind == Tok::Minus) {
            Node n;
            n.kind = NodeKind::Unary;
            n.uop = UnaryOp::Neg;
            n.offset = cur_.offset;
            advance();
            n.lhs = parse_factor();
            return push(n);
        }
        return parse_power();
    }

    int parse_power() {
        int base = parse_atom();
        if (cur_.kind == Tok::Caret) {
            Node n;
            n.kind = NodeKind::Binary;
            n.bop = BinaryOp::Pow;
            n.offset = cur_.offset;
            advance();
            n.lhs = base;
            n.rhs = parse_factor(); // exponent may carry unary minus / nested ^
            return push(n);
        }
        return base;
    }

    int parse_atom() {
        switch (cur_.kind) {
            case Tok::Number: {
                Node n;
                n.kind = NodeKind::Constant;
                n.constant = cur_.number;
                n.offset = cur_.offset;
                advance();
                return push(n);
            }
            case Tok::Ident: {
                Token ident = cur_;
                advance();
                if (cur_.kind == Tok::LParen) return parse_call(ident);
                return push_reference(ident);
            }
            case Tok::LParen: {
                advance();
                int inner = parse_expr();
                expect_rparen();
                return inner;
            }
            default:
                throw ParseError("expected a value at offset " + std::to_string(cur_.offset),
                                 cur_.offset, {"number", "identifier", "'('"});
        }
    }

    int parse_call(const Token& ident) {
        auto fn = kFunctions.find(ident.text);
        if (fn == kFunctions.end())
            throw ParseError("unknown function '" + std::string(ident.text) + "' at offset " +
                                 std::to_string(ident.offset),
                             ident.offset);
        advance(); // consume '('
        Node n;
        n.kind = NodeKind::Unary;
        n.uop = fn->second;
        n.offset = ident.offset;
        n.lhs = parse_expr();
        expect_rparen();
        return push(n);
    }

    int push_reference(const Token& ident) {
        Node n;
        n.offset = ident.offset;
        auto c = coord_axis_.find(ident.text);
        if (c != coord_axis_.end()) {
            n.kind = NodeKind::Coordinate;
            n.name = intern_name(ident.text);
            n.axis = c->second;
            return push(n);
        }
        if (params_.count(ident.text)) {
            n.kind = NodeKind::Parameter;
            n.name = intern_name(ident.text);
            return push(n);
        }
        throw ParseError("unknown identifier '" + std::string(ident.text) + "' at offset " +
                             std::to_string(ident.offset),
                         ident.offset);
    }

    void expect_rparen() {
        if (cur_.kind != Tok::RParen)
            throw ParseError("expected ')' at offset " + std::to_string(cur_.offset), cur_.offset,
                             {"')'"});
        advance();
    }

    Lexer lexer_;
    Token cur_;
    std::map<std::string, int, std::less<>> coord_axis_;
    std::set<std::string, std::less<>> params_;
    std::map<std::string_view, int> name_index_;
    ScalarExpr out_;
};

ScalarExpr parse(std::string_view source, std::span<const std::string> coords,
                 std::span<const std::string> params) {
    if (coords.size() > static_cast<std::size_t>(kMaxDim))
        throw BindError("chart dimension " + std::to_string(coords.size()) + " exceeds the cap of " +
                        std::to_string(kMaxDim));
    return Parser(source, coords, params).run();
}

bool ScalarExpr::coordinate_free() const {
    return std::none_of(nodes_.begin(), nodes_.end(),
                        [](const Node& n) { return n.kind == NodeKind::Coordinate; });
}

// ---- evaluation ----------------------------------------------------------

namespace {

[[noreturn]] void domain_error(const char* what, std::size_t offset) {
    throw EvalError(std::string(what) + " at offset " + std::to_string(offset), offset);
}

double pow_value(double a, double b, std::size_t offset) {
    const bool integer_exp = std::floor(b) == b && std::abs(b) < 1e15;
    if (integer_exp) {
        if (a == 0.0 && b < 0.0) domain_error("zero raised to a negative power", offset);
        return std::pow(a, b);
    }
    if (a > 0.0) return std::pow(a, b);
    if (a == 0.0) {
        if (b > 0.0) return 0.0;
        domain_error("zero raised to a non-positive power", offset);
    }
    domain_error("fractional power of a negative base", offset);
}

double unary_value(UnaryOp op, double v, std::size_t offset) {
    switch (op) {
        case UnaryOp::Neg: return -v;
        case UnaryOp::Sin: return std::sin(v);
        case UnaryOp::Cos: return std::cos(v);
        case UnaryOp::Tan: return std::tan(v);
        case UnaryOp::Exp: return std::exp(v);
        case UnaryOp::Log:
            if (v <= 0.0) domain_error("log of a non-positive value", offset);
            return std::log(v);
        case UnaryOp::Sqrt:
            if (v < 0.0) domain_error("sqrt of a negative value", offset);
            return std::sqrt(v);
        case UnaryOp::Sinh: return std::sinh(v);
        case UnaryOp::Cosh: return std::cosh(v);
        case UnaryOp::Tanh: return std::tanh(v);
        case UnaryOp::Abs: return std::abs(v);
    }
    return 0.0;
}

Jet2 unary_jet(UnaryOp op, const Jet2& g, std::size_t offset) {
    const double v = g.value();
    switch (op) {
        case UnaryOp::Neg: return -g;
        case UnaryOp::Sin: return compose(g, std::sin(v), std::cos(v), -std::sin(v));
        case UnaryOp::Cos: return compose(g, std::cos(v), -std::sin(v), -std::cos(v));
        case UnaryOp::Tan: {
            const double t = std::tan(v);
            const double s = 1.0 + t * t;
            return compose(g, t, s, 2.0 * t * s);
        }
        case UnaryOp::Exp: {
            const double e = std::exp(v);
            return compose(g, e, e, e);
        }
        case UnaryOp::Log:
            if (v <= 0.0) domain_error("log of a non-positive value", offset);
            return compose(g, std::log(v), 1.0 / v, -1.0 / (v * v));
        case UnaryOp::Sqrt: {
            if (v < 0.0) domain_error("sqrt of a negative value", offset);
            if (v == 0.0) domain_error("sqrt derivative is singular at 0", offset);
            const double s = std::sqrt(v);
            return compose(g, s, 0.5 / s, -0.25 / (s * v));
        }
        case UnaryOp::Sinh: return compose(g, std::sinh(v), std::cosh(v), std::sinh(v));
        case UnaryOp::Cosh: return compose(g, std::cosh(v), std::sinh(v), std::cosh(v));
        case UnaryOp::Tanh: {
            const double t = std::tanh(v);
            const double s = 1.0 - t * t;
            return compose(g, t, s, -2.0 * t * s);
        }
        case UnaryOp::Abs:
            if (v == 0.0) domain_error("abs is not differentiable at 0", offset);
            return v > 0.0 ? g : -g;
    }
    return g;
}

// a^b on jets.  A derivative-free exponent uses the power rule, which stays
// valid for negative bases with integer exponents; otherwise exp(b log a).
Jet2 pow_jet(const Jet2& a, const Jet2& b, std::size_t offset) {
    if (b.derivatives_are_zero()) {
        const double p = b.value();
        if (p == 0.0) return Jet2::constant(a.dim(), 1.0);
        if (p == 1.0) return a;
        const double v = a.value();
        const bool integer_exp = std::floor(p) == p && std::abs(p) < 1e15;
        if (v == 0.0) {
            if (p < 0.0) domain_error("zero raised to a negative power", offset);
            if (p < 2.0) domain_error("power derivative is singular at base 0", offset);
            const double ddf = (p == 2.0) ? 2.0 : 0.0;
            return compose(a, 0.0, 0.0, ddf);
        }
        if (v < 0.0 && !integer_exp)
            domain_error("fractional power of a negative base", offset);
        const double t = std::pow(v, p - 2.0); // v^p = t v^2 keeps negative bases exact
        return compose(a, t * v * v, p * t * v, p * (p - 1.0) * t);
    }
    if (a.value() <= 0.0)
        domain_error("variable exponent requires a positive base", offset);
    const double v = a.value();
    const Jet2 ln_a = compose(a, std::log(v), 1.0 / v, -1.0 / (v * v));
    const Jet2 e = b * ln_a;
    const double ev = std::exp(e.value());
    return compose(e, ev, ev, ev);
}

void check_point(const ScalarExpr& e, std::span<const double> point) {
    if (static_cast<int>(point.size()) != e.dim())
        throw BindError("point length " + std::to_string(point.size()) +
                        " does not match chart dimension " + std::to_string(e.dim()));
}

double param_value(const ScalarExpr& e, const Node& n, const ParamMap& params) {
    auto it = params.find(e.names()[static_cast<std::size_t>(n.name)]);
    if (it == params.end())
        throw EvalError("unbound parameter '" + e.names()[static_cast<std::size_t>(n.name)] +
                            "' at offset " + std::to_string(n.offset),
                        n.offset);
    return it->second;
}

} // namespace

double eval(const ScalarExpr& e, std::span<const double> point, const ParamMap& params) {
    check_point(e, point);
    std::vector<double> vals(e.nodes().size());
    for (std::size_t idx = 0; idx < e.nodes().size(); ++idx) {
        const Node& n = e.nodes()[idx];
        double v = 0.0;
        switch (n.kind) {
            case NodeKind::Constant: v = n.constant; break;
            case NodeKind::Coordinate: v = point[static_cast<std::size_t>(n.axis)]; break;
            case NodeKind::Parameter: v = param_value(e, n, params); break;
            case NodeKind::Unary:
                v = unary_value(n.uop, vals[static_cast<std::size_t>(n.lhs)], n.offset);
                break;
            case NodeKind::Binary: {
                const double a = vals[static_cast<std::size_t>(n.lhs)];
                const double b = vals[static_cast<std::size_t>(n.rhs)];
                switch (n.bop) {
                    case BinaryOp::Add: v = a + b; break;
                    case BinaryOp::Sub: v = a - b; break;
                    case BinaryOp::Mul: v = a * b; break;
                    case BinaryOp::Div:
                        if (b == 0.0) domain_error("division by zero", n.offset);
                        v = a / b;
                        break;
                    case BinaryOp::Pow: v = pow_value(a, b, n.offset); break;
                }
                break;
            }
        }
        if (!std::isfinite(v)) domain_error("non-finite result", n.offset);
        vals[idx] = v;
    }
    return vals[static_cast<std::size_t>(e.root())];
}

Jet2 eval_jet2(const ScalarExpr& e, std::span<const double> point, const ParamMap& params) {
    check_point(e, point);
    const int dim = e.dim();
    std::vector<Jet2> vals(e.nodes().size());
    for (std::size_t idx = 0; idx < e.nodes().size(); ++idx) {
        const Node& n = e.nodes()[idx];
        Jet2 v;
        switch (n.kind) {
            case NodeKind::Constant: v = Jet2::constant(dim, n.constant); break;
            case NodeKind::Coordinate:
                v = Jet2::variable(dim, n.axis, point[static_cast<std::size_t>(n.axis)]);
                break;
            case NodeKind::Parameter: v = Jet2::constant(dim, param_value(e, n, params)); break;
            case NodeKind::Unary:
                v = unary_jet(n.uop, vals[static_cast<std::size_t>(n.lhs)], n.offset);
                break;
            case NodeKind::Binary: {
                const Jet2& a = vals[static_cast<std::size_t>(n.lhs)];
                const Jet2& b = vals[static_cast<std::size_t>(n.rhs)];
                switch (n.bop) {
                    case BinaryOp::Add: v = a + b; break;
                    case BinaryOp::Sub: v = a - b; break;
                    case BinaryOp::Mul: v = a * b; break;
                    case BinaryOp::Div:
                        if (b.value() == 0.0) domain_error("division by zero", n.offset);
                        v = a / b;
                        break;
                    case BinaryOp::Pow: v = pow_jet(a, b, n.offset); break;
                }
                break;
            }
        }
        if (!v.finite()) domain_error("non-finite result", n.offset);
        vals[idx] = v;
    }
    return vals[static_cast<std::size_t>(e.root())];
}

// ---- printing ------------------------------------------------------------

namespace {

int level_of(const ScalarExpr& e, int idx) {
    const Node& n = e.nodes()[static_cast<std::size_t>(idx)];
    switch (n.kind) {
        case NodeKind::Constant:
        case NodeKind::Coordinate:
        case NodeKind::Parameter: return 5;
        case NodeKind::Unary: return n.uop == UnaryOp::Neg ? 3 : 5;
        case NodeKind::Binary:
            switch (n.bop) {
                case BinaryOp::Add:
                case BinaryOp::Sub: return 1;
                case BinaryOp::Mul:
                case BinaryOp::Div: return 2;
                case BinaryOp::Pow: return 4;
            }
    }
    return 5;
}

void format_number(std::ostringstream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

void print_node(const ScalarExpr& e, int idx, std::ostringstream& out);

void print_child(const ScalarExpr& e, int idx, std::ostringstream& out, bool parens) {
    if (parens) {
        out << '(';
        print_node(e, idx, out);
        out << ')';
    } else {
        print_node(e, idx, out);
    }
}

// Parenthesization chosen so that the printed text reparses to a structurally
// identical tree (exercised by the round-trip tests).
void print_node(const ScalarExpr& e, int idx, std::ostringstream& out) {
    const Node& n = e.nodes()[static_cast<std::size_t>(idx)];
    switch (n.kind) {
        case NodeKind::Constant: format_number(out, n.constant); return;
        case NodeKind::Coordinate:
        case NodeKind::Parameter:
            out << e.names()[static_cast<std::size_t>(n.name)];
            return;
        case NodeKind::Unary:
            if (n.uop == UnaryOp::Neg) {
                out << '-';
                print_child(e, n.lhs, out, level_of(e, n.lhs) < 3);
            } else {
                out << function_name(n.uop) << '(';
                print_node(e, n.lhs, out);
                out << ')';
            }
            return;
        case NodeKind::Binary: {
            const int lvl = level_of(e, idx);
            const char* op = nullptr;
            bool lhs_parens, rhs_parens;
            switch (n.bop) {
                case BinaryOp::Add: op = " + "; break;
                case BinaryOp::Sub: op = " - "; break;
                case BinaryOp::Mul: op = " * "; break;
                case BinaryOp::Div: op = " / "; break;
                case BinaryOp::Pow: op = "^"; break;
            }
            if (n.bop == BinaryOp::Pow) {
                lhs_parens = level_of(e, n.lhs) <= lvl; // ^ is right-associative
                rhs_parens = level_of(e, n.rhs) <= 2;   // exponent admits unary minus and ^
            } else {
                lhs_parens = level_of(e, n.lhs) < lvl;
                rhs_parens = level_of(e, n.rhs) <= lvl;
            }
            print_child(e, n.lhs, out, lhs_parens);
            out << op;
            print_child(e, n.rhs, out, rhs_parens);
            return;
        }
    }
}

} // namespace

std::string ScalarExpr::print() const {
    std::ostringstream out;
    print_node(*this, root_, out);
    return out.str();
}

// ---- rebinding and combinators -------------------------------------------

ScalarExpr rebind(const ScalarExpr& e, std::span<const std::string> frame) {
    if (frame.size() > static_cast<std::size_t>(kMaxDim))
        throw BindError("chart dimension " + std::to_string(frame.size()) + " exceeds the cap of " +
                        std::to_string(kMaxDim));
    ScalarExpr out = e;
    out.frame_.assign(frame.begin(), frame.end());
    for (Node& n : out.nodes_) {
        if (n.kind != NodeKind::Coordinate) continue;
        const std::string& name = out.names_[static_cast<std::size_t>(n.name)];
        auto it = std::find(frame.begin(), frame.end(), name);
        if (it == frame.end())
            throw BindError("coordinate '" + name + "' is not part of the target frame");
        n.axis = static_cast<int>(it - frame.begin());
    }
    return out;
}

ScalarExpr constant_expr(double v, std::span<const std::string> frame) {
    ScalarExpr out;
    out.frame_.assign(frame.begin(), frame.end());
    Node c;
    c.kind = NodeKind::Constant;
    c.constant = std::abs(v);
    out.nodes_.push_back(c);
    out.root_ = 0;
    if (v < 0.0) { // keep printed text reparseable to the same structure
        Node neg;
        neg.kind = NodeKind::Unary;
        neg.uop = UnaryOp::Neg;
        neg.lhs = 0;
        out.nodes_.push_back(neg);
        out.root_ = 1;
    }
    return out;
}

namespace {

// Append b's arena to out (which already holds a's nodes), remapping name
// indices through out's name table.  Returns b's root in the merged arena.
int merge_arena(ScalarExpr& out, const ScalarExpr& b) {
    std::map<int, int> name_map;
    for (std::size_t i = 0; i < b.names().size(); ++i) {
        const std::string& name = b.names()[i];
        auto it = std::find(out.names().begin(), out.names().end(), name);
        int idx;
        if (it == out.names().end()) {
            const_cast<std::vector<std::string>&>(out.names()).push_back(name);
            idx = static_cast<int>(out.names().size() - 1);
        } else {
            idx = static_cast<int>(it - out.names().begin());
        }
        name_map[static_cast<int>(i)] = idx;
    }
    const int shift = static_cast<int>(out.nodes().size());
    auto& nodes = const_cast<std::vector<Node>&>(out.nodes());
    for (const Node& n : b.nodes()) {
        Node m = n;
        if (m.lhs >= 0) m.lhs += shift;
        if (m.rhs >= 0) m.rhs += shift;
        if (m.name >= 0) m.name = name_map[m.name];
        nodes.push_back(m);
    }
    return shift + b.root();
}

} // namespace

ScalarExpr combine(BinaryOp op, const ScalarExpr& a, const ScalarExpr& b) {
    if (a.frame() != b.frame())
        throw BindError("cannot combine expressions bound to different frames");
    ScalarExpr out = a;
    const int rhs_root = merge_arena(out, b);
    Node n;
    n.kind = NodeKind::Binary;
    n.bop = op;
    n.lhs = out.root_;
    n.rhs = rhs_root;
    out.nodes_.push_back(n);
    out.root_ = static_cast<int>(out.nodes_.size() - 1);
    return out;
}

ScalarExpr apply(UnaryOp op, const ScalarExpr& a) {
    ScalarExpr out = a;
    Node n;
    n.kind = NodeKind::Unary;
    n.uop = op;
    n.lhs = out.root_;
    out.nodes_.push_back(n);
    out.root_ = static_cast<int>(out.nodes_.size() - 1);
    return out;
}

namespace {

bool nodes_equal(const ScalarExpr& a, int ia, const ScalarExpr& b, int ib) {
    const Node& na = a.nodes()[static_cast<std::size_t>(ia)];
    const Node& nb = b.nodes()[static_cast<std::size_t>(ib)];
    if (na.kind != nb.kind) return false;
    switch (na.kind) {
        case NodeKind::Constant: return na.constant == nb.constant;
        case NodeKind::Coordinate:
        case NodeKind::Parameter:
            return a.names()[static_cast<std::size_t>(na.name)] ==
                   b.names()[static_cast<std::size_t>(nb.name)];
        case NodeKind::Unary:
            return na.uop == nb.uop && nodes_equal(a, na.lhs, b, nb.lhs);
        case NodeKind::Binary:
            return na.bop == nb.bop && nodes_equal(a, na.lhs, b, nb.lhs) &&
                   nodes_equal(a, na.rhs, b, nb.rhs);
    }
    return false;
}

} // namespace

bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.root() < 0 || b.root() < 0) return a.root() == b.root();
    return nodes_equal(a, a.root(), b, b.root());
}

} // namespace sst::expr
