#include "toricding/polytope.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

namespace toric {

namespace {

VecZ to_int_vec(const VecQ& v) {
    VecZ out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (denominator(v[i]) != 1) throw PolytopeError("expected integer coordinate");
        out[i] = numerator(v[i]).convert_to<long long>();
    }
    return out;
}

Facet integral_facet(const HalfspaceQ& h) {
    BigInt l = 1;
    for (const auto& c : h.normal) l = lcm(l, denominator(c));
    l = lcm(l, denominator(h.offset));
    VecZ normal(h.normal.size());
    BigInt g = 0;
    std::vector<BigInt> scaled(h.normal.size());
    for (std::size_t i = 0; i < h.normal.size(); ++i) {
        scaled[i] = numerator(h.normal[i] * Rational(l));
        g = gcd(g, scaled[i]);
    }
    if (g == 0) throw PolytopeError("zero facet normal");
    BigInt off = numerator(h.offset * Rational(l));
    for (std::size_t i = 0; i < normal.size(); ++i)
        normal[i] = BigInt(scaled[i] / g).convert_to<long long>();
    // offset stays integral: the hyperplane passes through lattice points
    return Facet{normal, BigInt(off / g).convert_to<long long>()};
}

long long dot_zz(const VecZ& a, const VecZ& b) {
    long long s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

Polytope Polytope::from_vertices(std::vector<VecZ> vertices, bool raw_mode) {
    if (vertices.empty()) throw PolytopeError("no vertices");
    Polytope p;
    p.raw_ = raw_mode;
    p.dim_ = vertices[0].size();
    if (p.dim_ == 0) throw PolytopeError("zero-dimensional input");
    for (const auto& v : vertices)
        if (v.size() != p.dim_) throw PolytopeError("inconsistent vertex dimension");

    MatQ q;
    q.reserve(vertices.size());
    for (const auto& v : vertices) q.push_back(to_rational(v));
    try {
        p.body_ = ConvexBody::from_vertices(std::move(q));
    } catch (const std::invalid_argument& e) {
        throw PolytopeError(std::string("degenerate hull: ") + e.what());
    }
    p.vertices_.clear();
    for (const auto& v : p.body_.vertices()) p.vertices_.push_back(to_int_vec(v));
    if (p.vertices_.size() != vertices.size())
        throw PolytopeError("duplicate vertices in input");
    for (const auto& h : p.body_.facets()) p.facets_.push_back(integral_facet(h));

    p.report_ = validate(p);
    if (!raw_mode && !p.report_.origin_interior)
        throw PolytopeError("origin is not strictly interior");
    return p;
}

VecQ Polytope::vertex_q(std::size_t i) const { return to_rational(vertices_[i]); }

std::vector<std::size_t> Polytope::facets_at_vertex(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < facets_.size(); ++f)
        if (dot_zz(facets_[f].normal, vertices_[i]) == -facets_[f].offset) out.push_back(f);
    return out;
}

bool Polytope::contains(const VecQ& x, bool strict) const { return body_.contains(x, strict); }

ValidationReport validate(const Polytope& p) {
    ValidationReport r;
    const std::size_t n = p.dim();

    r.origin_interior = true;
    for (const auto& f : p.facets())
        if (f.offset <= 0) r.origin_interior = false;

    r.reflexive = true;
    for (std::size_t i = 0; i < p.facets().size(); ++i) {
        if (p.facets()[i].offset != 1) {
            r.reflexive = false;
            r.nonreflexive_facets.push_back(i);
        }
    }

    r.delzant_smooth = true;
    for (std::size_t v = 0; v < p.vertices().size(); ++v) {
        auto active = p.facets_at_vertex(v);
        bool ok = active.size() == n;
        if (ok) {
            MatQ m;
            for (auto f : active) m.push_back(to_rational(p.facets()[f].normal));
            Rational d = determinant(m);
            ok = (d == 1 || d == -1);
        }
        if (!ok) {
            r.delzant_smooth = false;
            r.nonsmooth_vertices.push_back(v);
        }
    }

    // round trip: vertices recovered from the facet presentation
    try {
        std::vector<HalfspaceQ> hs;
        for (const auto& f : p.facets())
            hs.push_back({to_rational(f.normal), Rational(f.offset)});
        ConvexBody back = ConvexBody::from_halfspaces(hs, n);
        r.roundtrip_ok = back.vertices() == p.body().vertices();
    } catch (const std::exception&) {
        r.roundtrip_ok = false;
    }
    if (!r.roundtrip_ok) r.notes.push_back("facet presentation does not recover the vertex set");

    r.interior_lattice_points = interior_lattice_points(p);
    if (r.reflexive) {
        bool unique_origin = r.interior_lattice_points.size() == 1;
        if (unique_origin)
            for (auto c : r.interior_lattice_points[0]) unique_origin = unique_origin && c == 0;
        if (!unique_origin)
            r.notes.push_back("offset-1 facets but interior lattice point is not unique origin");
    }
    return r;
}

std::vector<VecZ> interior_lattice_points(const Polytope& p) {
    const std::size_t n = p.dim();
    VecZ lo(n), hi(n);
    for (std::size_t j = 0; j < n; ++j) {
        lo[j] = p.vertices()[0][j];
        hi[j] = p.vertices()[0][j];
        for (const auto& v : p.vertices()) {
            lo[j] = std::min(lo[j], v[j]);
            hi[j] = std::max(hi[j], v[j]);
        }
    }
    unsigned long long cells = 1;
    for (std::size_t j = 0; j < n; ++j) {
        cells *= static_cast<unsigned long long>(hi[j] - lo[j] + 1);
        if (cells > 20'000'000ULL) throw PolytopeError("lattice point scan too large");
    }
    std::vector<VecZ> out;
    VecZ x = lo;
    while (true) {
        bool inside = true;
        for (const auto& f : p.facets()) {
            if (dot_zz(f.normal, x) <= -f.offset) {
                inside = false;
                break;
            }
        }
        if (inside) out.push_back(x);
        std::size_t j = 0;
        while (j < n) {
            if (x[j] < hi[j]) {
                ++x[j];
                break;
            }
            x[j] = lo[j];
            ++j;
        }
        if (j == n) break;
    }
    return out;
}

std::vector<SimplexQ> triangulate(const Polytope& p) { return p.body().triangulate(); }

MomentData moments(const Polytope& p) {
    MomentData md;
    md.volume = 0;
    md.first.assign(p.dim(), Rational(0));
    md.second.assign(p.dim(), VecQ(p.dim(), Rational(0)));
    for (const auto& s : triangulate(p)) s.accumulate_moments(md.volume, md.first, md.second);
    if (md.volume <= 0) throw PolytopeError("non-positive volume");
    if (!md.gram_positive_definite()) throw PolytopeError("moment Gram matrix not positive definite");
    return md;
}

MatQ MomentData::gram() const {
    const std::size_t n = first.size();
    MatQ g(n + 1, VecQ(n + 1));
    g[0][0] = volume;
    for (std::size_t i = 0; i < n; ++i) {
        g[0][i + 1] = first[i];
        g[i + 1][0] = first[i];
        for (std::size_t j = 0; j < n; ++j) g[i + 1][j + 1] = second[i][j];
    }
    return g;
}

bool MomentData::gram_positive_definite() const {
    MatQ g = gram();
    for (std::size_t k = 1; k <= g.size(); ++k) {
        MatQ minor(k, VecQ(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) minor[i][j] = g[i][j];
        if (determinant(minor) <= 0) return false;
    }
    return true;
}

Polytope parse_polytope(const std::string& text, bool raw_mode) {
    std::string stripped;
    stripped.reserve(text.size());
    bool in_comment = false;
    for (char c : text) {
        if (c == '#') in_comment = true;
        if (c == '\n') in_comment = false;
        if (!in_comment) stripped.push_back(c);
    }
    std::size_t first = stripped.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw PolytopeError("empty polytope description");

    std::vector<VecZ> vertices;
    if (stripped[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(stripped);
        } catch (const nlohmann::json::exception& e) {
            throw PolytopeError(std::string("bad polytope JSON: ") + e.what());
        }
        if (!j.contains("dim") || !j.contains("vertices"))
            throw PolytopeError("polytope JSON needs dim and vertices");
        std::size_t n = j["dim"].get<std::size_t>();
        for (const auto& row : j["vertices"]) {
            VecZ v = row.get<VecZ>();
            if (v.size() != n) throw PolytopeError("vertex dimension mismatch in JSON");
            vertices.push_back(std::move(v));
        }
    } else {
        std::istringstream in(stripped);
        long long n = 0, k = 0;
        if (!(in >> n >> k) || n <= 0 || k <= 0) throw PolytopeError("bad polytope header");
        vertices.assign(k, VecZ(n));
        for (long long i = 0; i < k; ++i)
            for (long long j = 0; j < n; ++j)
                if (!(in >> vertices[i][j])) throw PolytopeError("truncated vertex list");
        long long extra;
        if (in >> extra) throw PolytopeError("trailing tokens after vertex list");
    }
    return Polytope::from_vertices(std::move(vertices), raw_mode);
}

std::string serialize_polytope(const Polytope& p) {
    std::ostringstream out;
    out << p.dim() << " " << p.vertices().size() << "\n";
    for (const auto& v : p.vertices()) {  // already canonical sorted order
        for (std::size_t j = 0; j < v.size(); ++j) out << (j ? " " : "") << v[j];
        out << "\n";
    }
    return out.str();
}

}  // namespace toric
