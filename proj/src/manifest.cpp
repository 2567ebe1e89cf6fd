#include "sst/manifest.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "sst/sampling.hpp"

namespace sst::manifest {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};
using Section = std::map<std::string, Entry>;

const std::set<std::string> kSections = {"fiber", "warp", "fields", "killing", "numerics",
                                         "geodesic"};

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

[[noreturn]] void fail(std::string_view origin, int line, const std::string& msg) {
    std::ostringstream os;
    os << origin;
    if (line > 0) os << ":" << line;
    os << ": " << msg;
    throw ValidationError(os.str());
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

std::vector<std::string> split_list(std::string_view origin, const Entry& e,
                                    const std::string& key) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(e.value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(origin, e.line, "empty item in list '" + key + "'");
        out.push_back(std::move(item));
    }
    if (out.empty()) fail(origin, e.line, "empty list '" + key + "'");
    return out;
}

double to_double(std::string_view origin, const Entry& e, const std::string& key,
                 bool allow_inf = false) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(e.value, &pos);
    } catch (const std::exception&) {
        fail(origin, e.line, "'" + key + "' is not a number: '" + e.value + "'");
    }
    if (pos != e.value.size())
        fail(origin, e.line, "trailing characters in '" + key + "': '" + e.value + "'");
    if (std::isnan(v)) fail(origin, e.line, "'" + key + "' is NaN");
    if (!allow_inf && std::isinf(v))
        fail(origin, e.line, "'" + key + "' must be finite (got '" + e.value + "')");
    return v;
}

long long to_int(std::string_view origin, const Entry& e, const std::string& key) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(e.value, &pos);
    } catch (const std::exception&) {
        fail(origin, e.line, "'" + key + "' is not an integer: '" + e.value + "'");
    }
    if (pos != e.value.size())
        fail(origin, e.line, "trailing characters in '" + key + "': '" + e.value + "'");
    return v;
}

std::uint64_t to_seed(std::string_view origin, const Entry& e, const std::string& key) {
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(e.value, &pos);
    } catch (const std::exception&) {
        fail(origin, e.line, "'" + key + "' is not an unsigned integer: '" + e.value + "'");
    }
    if (pos != e.value.size())
        fail(origin, e.line, "trailing characters in '" + key + "': '" + e.value + "'");
    return v;
}

bool to_bool(std::string_view origin, const Entry& e, const std::string& key) {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    fail(origin, e.line, "'" + key + "' must be 'true' or 'false' (got '" + e.value + "')");
}

std::vector<double> to_doubles(std::string_view origin, const Entry& e, const std::string& key) {
    std::vector<double> out;
    for (const std::string& item : split_list(origin, e, key)) {
        Entry tmp{item, e.line};
        out.push_back(to_double(origin, tmp, key));
    }
    return out;
}

// Parse an expression against a coordinate frame, rethrowing with location.
expr::ScalarExpr parse_expr(std::string_view origin, const Entry& e, const std::string& key,
                            std::span<const std::string> coords) {
    try {
        return expr::parse(e.value, coords);
    } catch (const ParseError& pe) {
        fail(origin, e.line, "in '" + key + "': " + pe.what());
    } catch (const BindError& be) {
        fail(origin, e.line, "in '" + key + "': " + be.what());
    }
}

std::string point_string(std::span<const double> p) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ")";
    return os.str();
}

class Ini {
public:
    Ini(std::string_view text, std::string_view origin) : origin_(origin) {
        std::istringstream in{std::string(text)};
        std::string raw, cur;
        int lineno = 0;
        while (std::getline(in, raw)) {
            ++lineno;
            const std::string line = trim(raw);
            if (line.empty() || line[0] == '#') continue;
            if (line.front() == '[') {
                if (line.back() != ']') fail(origin_, lineno, "unterminated section header");
                cur = trim(std::string_view(line).substr(1, line.size() - 2));
                if (!kSections.contains(cur))
                    fail(origin_, lineno, "unknown section [" + cur + "]");
                sections_[cur];
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) fail(origin_, lineno, "expected 'key = value'");
            if (cur.empty()) fail(origin_, lineno, "key before any [section] header");
            std::string key = trim(std::string_view(line).substr(0, eq));
            std::string val = trim(std::string_view(line).substr(eq + 1));
            if (key.empty()) fail(origin_, lineno, "empty key");
            if (val.empty()) fail(origin_, lineno, "empty value for '" + key + "'");
            const auto [it, fresh] = sections_[cur].emplace(key, Entry{std::move(val), lineno});
            if (!fresh)
                fail(origin_, lineno,
                     "duplicate key '" + key + "' (first at line " +
                         std::to_string(it->second.line) + ")");
        }
    }

    Entry* take(const std::string& sec, const std::string& key) {
        const auto s = sections_.find(sec);
        if (s == sections_.end()) return nullptr;
        const auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.used = true;
        return &k->second;
    }

    Entry& need(const std::string& sec, const std::string& key) {
        Entry* e = take(sec, key);
        if (!e)
            fail(origin_, 0, "missing required key '" + key + "' in [" + sec + "]");
        return *e;
    }

    bool has_section(const std::string& sec) const { return sections_.contains(sec); }

    Section* section(const std::string& sec) {
        const auto s = sections_.find(sec);
        return s == sections_.end() ? nullptr : &s->second;
    }

    // every key must have been consumed: unknown keys are hard errors
    void finish() const {
        for (const auto& [sec, entries] : sections_)
            for (const auto& [key, e] : entries)
                if (!e.used) fail(origin_, e.line, "unknown key '" + key + "' in [" + sec + "]");
    }

private:
    std::string origin_;
    std::map<std::string, Section> sections_;
};

Numerics read_numerics(Ini& ini, std::string_view origin) {
    Numerics n;
    if (Entry* e = ini.take("numerics", "samples")) {
        const long long v = to_int(origin, *e, "samples");
        if (v < 0 || v > 1000000) fail(origin, e->line, "'samples' out of range");
        n.samples = static_cast<int>(v);
    }
    if (Entry* e = ini.take("numerics", "causal_samples")) {
        const long long v = to_int(origin, *e, "causal_samples");
        if (v < 0 || v > 10000000) fail(origin, e->line, "'causal_samples' out of range");
        n.causal_samples = static_cast<int>(v);
    }
    if (Entry* e = ini.take("numerics", "seed")) n.seed = to_seed(origin, *e, "seed");
    if (Entry* e = ini.take("numerics", "tol")) {
        n.tol = to_double(origin, *e, "tol");
        if (!(n.tol > 0.0)) fail(origin, e->line, "'tol' must be positive");
    }
    if (Entry* e = ini.take("numerics", "step")) {
        n.step = to_double(origin, *e, "step");
        if (!(n.step > 0.0)) fail(origin, e->line, "'step' must be positive");
    }
    return n;
}

warped::StaticSpacetime read_spacetime(Ini& ini, std::string_view origin) {
    if (!ini.has_section("fiber")) fail(origin, 0, "missing [fiber] section");
    if (!ini.has_section("warp")) fail(origin, 0, "missing [warp] section");

    const Entry& ce = ini.need("fiber", "coords");
    const std::vector<std::string> coords = split_list(origin, ce, "coords");
    if (coords.size() > 5)
        fail(origin, ce.line, "fiber dimension must be at most 5 (the product chart adds t)");
    for (const std::string& c : coords) {
        if (!valid_name(c)) fail(origin, ce.line, "invalid coordinate name '" + c + "'");
        if (c == "t") fail(origin, ce.line, "fiber coordinate may not be named 't'");
    }

    std::vector<geom::Interval> domain;
    for (const std::string& c : coords) {
        const Entry& e = ini.need("fiber", "domain." + c);
        const std::vector<double> iv = to_doubles(origin, e, "domain." + c);
        if (iv.size() != 2) fail(origin, e.line, "'domain." + c + "' needs exactly 'lo, hi'");
        if (!(iv[0] < iv[1]))
            fail(origin, e.line, "'domain." + c + "': lo must be less than hi");
        domain.push_back({iv[0], iv[1]});
    }

    double margin = 0.0;
    if (Entry* e = ini.take("fiber", "singular_margin")) {
        margin = to_double(origin, *e, "singular_margin");
        if (margin < 0.0) fail(origin, e->line, "'singular_margin' must be nonnegative");
    }
    const geom::Chart chart(coords, domain, margin);

    std::vector<expr::ScalarExpr> comps;
    for (std::size_t i = 0; i < coords.size(); ++i)
        for (std::size_t j = i; j < coords.size(); ++j) {
            const std::string key = "g." + coords[i] + "." + coords[j];
            const Entry& e = ini.need("fiber", key);
            comps.push_back(parse_expr(origin, e, key, chart.coords()));
        }
    geom::MetricField metric(chart, std::move(comps), 0);

    warped::Flags flags;
    if (Entry* e = ini.take("fiber", "compact")) flags.compact = to_bool(origin, *e, "compact");
    if (Entry* e = ini.take("fiber", "complete"))
        flags.complete = to_bool(origin, *e, "complete");
    if (Entry* e = ini.take("fiber", "ricci_flat"))
        flags.ricci_flat = to_bool(origin, *e, "ricci_flat");

    std::optional<double> inf_f, sup_f;
    if (Entry* e = ini.take("fiber", "inf_f")) inf_f = to_double(origin, *e, "inf_f");
    if (Entry* e = ini.take("fiber", "sup_f")) sup_f = to_double(origin, *e, "sup_f");

    const Entry& fe = ini.need("warp", "f");
    expr::ScalarExpr warp = parse_expr(origin, fe, "f", chart.coords());

    double t1 = -std::numeric_limits<double>::infinity();
    double t2 = std::numeric_limits<double>::infinity();
    if (Entry* e = ini.take("warp", "t1")) t1 = to_double(origin, *e, "t1", true);
    if (Entry* e = ini.take("warp", "t2")) t2 = to_double(origin, *e, "t2", true);
    double t_window = 5.0;
    if (Entry* e = ini.take("warp", "t_window")) {
        t_window = to_double(origin, *e, "t_window");
        if (!(t_window > 0.0)) fail(origin, e->line, "'t_window' must be positive");
    }

    return warped::StaticSpacetime(t1, t2, chart, std::move(metric), std::move(warp), flags,
                                   inf_f, sup_f, t_window);
}

// Load-time sweep: f > 0 and a Riemannian fiber metric at every sample point.
void validate_sweep(const warped::StaticSpacetime& S, std::uint64_t seed,
                    std::string_view origin) {
    const PointList pts = sample_points(S.fiber_chart(), 32, seed, "manifest-validate");
    for (std::size_t n = 0; n < pts.size(); ++n) {
        const auto p = pts.at(n);
        try {
            (void)S.warp_at(p);
        } catch (const GeometryError&) {
            fail(origin, 0, "warp is nonpositive at sampled fiber point " + point_string(p));
        } catch (const EvalError& e) {
            fail(origin, 0,
                 "warp failed to evaluate at sampled fiber point " + point_string(p) + ": " +
                     e.what());
        }
        try {
            const geom::SymBilinear g = geom::metric_at(S.fiber_metric(), p);
            if (geom::negative_eigen_count(g.matrix()) != 0)
                fail(origin, 0,
                     "fiber metric is not Riemannian at sampled point " + point_string(p));
        } catch (const GeometryError& e) {
            fail(origin, 0,
                 "fiber metric is degenerate at sampled point " + point_string(p) + ": " +
                     e.what());
        } catch (const EvalError& e) {
            fail(origin, 0,
                 "fiber metric failed to evaluate at sampled point " + point_string(p) + ": " +
                     e.what());
        }
    }
}

} // namespace

Manifest parse_manifest(std::string_view text, std::string_view origin) {
    Ini ini(text, origin);

    const Numerics numerics = read_numerics(ini, origin);
    warped::StaticSpacetime spacetime = read_spacetime(ini, origin);
    validate_sweep(spacetime, numerics.seed, origin);

    Manifest m{.spacetime = std::move(spacetime),
               .vector_fields = {},
               .scalar_fields = {},
               .basis = {},
               .check_field = {},
               .candidate = {},
               .static_candidate = {},
               .numerics = numerics,
               .geodesic = {},
               .origin = std::string(origin),
               .source = std::string(text)};

    const geom::Chart& fiber = m.spacetime.fiber_chart();

    if (Section* fields = ini.section("fields")) {
        for (auto& [key, e] : *fields) {
            e.used = true;
            if (key.starts_with("vector.")) {
                const std::string name = key.substr(7);
                if (!valid_name(name)) fail(origin, e.line, "invalid field name '" + name + "'");
                const std::vector<std::string> texts = split_list(origin, e, key);
                if (texts.size() != static_cast<std::size_t>(fiber.dim()))
                    fail(origin, e.line,
                         "'" + key + "' needs " + std::to_string(fiber.dim()) +
                             " components, got " + std::to_string(texts.size()));
                try {
                    m.vector_fields.emplace(name, geom::make_vector_field(fiber, texts));
                } catch (const ParseError& pe) {
                    fail(origin, e.line, "in '" + key + "': " + pe.what());
                } catch (const BindError& be) {
                    fail(origin, e.line, "in '" + key + "': " + be.what());
                }
            } else if (key.starts_with("scalar.")) {
                const std::string name = key.substr(7);
                if (!valid_name(name)) fail(origin, e.line, "invalid field name '" + name + "'");
                m.scalar_fields.emplace(name, parse_expr(origin, e, key, fiber.coords()));
            } else {
                fail(origin, e.line,
                     "keys in [fields] must start with 'vector.' or 'scalar.' (got '" + key +
                         "')");
            }
        }
    }

    if (Entry* e = ini.take("killing", "basis")) {
        m.basis = split_list(origin, *e, "basis");
        std::set<std::string> seen;
        for (const std::string& name : m.basis) {
            if (!m.vector_fields.contains(name))
                fail(origin, e->line, "basis field '" + name + "' is not declared in [fields]");
            if (!seen.insert(name).second)
                fail(origin, e->line, "basis lists '" + name + "' twice");
        }
    }
    if (Entry* e = ini.take("killing", "check")) {
        if (!m.vector_fields.contains(e->value))
            fail(origin, e->line, "check field '" + e->value + "' is not declared in [fields]");
        m.check_field = e->value;
    }

    const std::vector<std::string> t_frame = {"t"};
    Entry* ch = ini.take("killing", "candidate.h");
    Entry* cpsi = ini.take("killing", "candidate.psi");
    Entry* cphi = ini.take("killing", "candidate.phi");
    Entry* cv = ini.take("killing", "candidate.v");
    if (cv && (cpsi || cphi))
        fail(origin, cv->line,
             "candidate.v (static form) and candidate.psi/candidate.phi (structured form) are "
             "mutually exclusive");
    if (cv) {
        if (!ch) fail(origin, cv->line, "candidate.v needs candidate.h");
        if (!m.vector_fields.contains(cv->value))
            fail(origin, cv->line,
                 "candidate field '" + cv->value + "' is not declared in [fields]");
        m.static_candidate =
            StaticCandidate{parse_expr(origin, *ch, "candidate.h", t_frame), cv->value};
    } else if (ch || cpsi || cphi) {
        if (!(ch && cpsi))
            fail(origin, (ch ? ch : cpsi ? cpsi : cphi)->line,
                 "a structured candidate needs candidate.h and candidate.psi");
        std::vector<expr::ScalarExpr> phi;
        if (cphi)
            for (const std::string& text : split_list(origin, *cphi, "candidate.phi")) {
                Entry tmp{text, cphi->line};
                phi.push_back(parse_expr(origin, tmp, "candidate.phi", t_frame));
            }
        if (phi.size() != m.basis.size())
            fail(origin, cphi ? cphi->line : ch->line,
                 "candidate.phi has " + std::to_string(phi.size()) +
                     " coefficients but the basis has " + std::to_string(m.basis.size()));
        m.candidate = killing::StructuredCandidate{
            parse_expr(origin, *ch, "candidate.h", t_frame),
            parse_expr(origin, *cpsi, "candidate.psi", fiber.coords()), std::move(phi)};
    }

    if (ini.has_section("geodesic")) {
        GeodesicSpec g;
        const Entry& se = ini.need("geodesic", "start");
        g.start = to_doubles(origin, se, "start");
        const Entry& ve = ini.need("geodesic", "velocity");
        g.velocity = to_doubles(origin, ve, "velocity");
        const auto dim = static_cast<std::size_t>(m.spacetime.dim());
        if (g.start.size() != dim)
            fail(origin, se.line,
                 "'start' needs " + std::to_string(dim) + " components (t first)");
        if (g.velocity.size() != dim)
            fail(origin, ve.line, "'velocity' needs " + std::to_string(dim) + " components");
        if (Entry* e = ini.take("geodesic", "span")) {
            g.span = to_double(origin, *e, "span");
            if (!(g.span > 0.0)) fail(origin, e->line, "'span' must be positive");
        }
        m.geodesic = std::move(g);
    }

    ini.finish();
    return m;
}

Manifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open manifest '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str(), path);
}

std::vector<geom::VectorFieldExpr> resolve_basis(const Manifest& m) {
    std::vector<geom::VectorFieldExpr> out;
    out.reserve(m.basis.size());
    for (const std::string& name : m.basis) out.push_back(m.vector_fields.at(name));
    return out;
}

} // namespace sst::manifest
