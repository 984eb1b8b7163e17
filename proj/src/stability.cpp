#include "toricding/stability.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace toric {

Rational AffineDensity::eval(const VecQ& x) const { return a0 + dot(a, x); }
Rational AffineDensity::eval(const VecZ& x) const { return eval(to_rational(x)); }

std::string to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::UniformStable: return "UNIFORM_STABLE";
        case StabilityClass::SemistableBoundary: return "SEMISTABLE_BOUNDARY";
        case StabilityClass::Unstable: return "UNSTABLE";
    }
    return "?";
}

AffineDensity solve_l(const MomentData& md) {
    const std::size_t n = md.first.size();
    MatQ g = md.gram();
    VecQ rhs(n + 1, Rational(0));
    rhs[0] = 1;
    auto sol = solve_linear(g, rhs);
    if (!sol) throw PolytopeError("singular moment Gram matrix");
    AffineDensity l;
    l.a0 = (*sol)[0];
    l.a.assign(sol->begin() + 1, sol->end());
    // residuals must vanish identically
    Rational r0 = l.a0 * md.volume + dot(l.a, md.first) - 1;
    if (r0 != 0) throw PolytopeError("affine density residual nonzero");
    for (std::size_t i = 0; i < n; ++i) {
        Rational ri = l.a0 * md.first[i] + dot(md.second[i], l.a);
        if (ri != 0) throw PolytopeError("affine density residual nonzero");
    }
    return l;
}

StabilityReport alpha_invariant(const Polytope& p, const AffineDensity& l, const std::string& id) {
    StabilityReport rep;
    rep.polytope_id = id;
    rep.dim = p.dim();
    MomentData md = moments(p);
    rep.volume = md.volume;
    rep.l = l;
    bool first = true;
    for (const auto& v : p.vertices()) {
        Rational value = 1 - md.volume * l.eval(v);
        rep.vertex_values.emplace_back(v, value);
        if (first || value > rep.alpha) rep.alpha = value;
        first = false;
    }
    if (rep.alpha < 1) {
        rep.cls = StabilityClass::UniformStable;
        rep.lambda_bound = (1 - rep.alpha) / md.volume;
    } else if (rep.alpha == 1) {
        rep.cls = StabilityClass::SemistableBoundary;
    } else {
        rep.cls = StabilityClass::Unstable;
    }
    return rep;
}

Rational PiecewiseLinearConvex::eval(const VecQ& x) const {
    if (pieces.empty()) throw std::invalid_argument("piecewise linear function has no pieces");
    Rational best = pieces[0].c0 + dot(pieces[0].c, x);
    for (std::size_t k = 1; k < pieces.size(); ++k) {
        Rational v = pieces[k].c0 + dot(pieces[k].c, x);
        if (v > best) best = v;
    }
    return best;
}

PiecewiseLinearConvex PiecewiseLinearConvex::scaled_add(const Rational& s,
                                                        const PiecewiseLinearConvex& w) const {
    // max_j a_j + s*max_k b_k = max_{j,k} (a_j + s*b_k) for s >= 0
    if (s < 0) throw std::invalid_argument("scaled_add needs s >= 0");
    PiecewiseLinearConvex out;
    for (const auto& p : pieces) {
        for (const auto& q : w.pieces) {
            Piece r;
            r.c0 = p.c0 + s * q.c0;
            r.c = add(p.c, scale(q.c, s));
            out.pieces.push_back(std::move(r));
        }
    }
    return out;
}

namespace {

struct Region {
    ConvexBody body;
    PiecewiseLinearConvex::Piece piece;
};

std::vector<PiecewiseLinearConvex::Piece> dedupe_pieces(const PiecewiseLinearConvex& u) {
    std::vector<PiecewiseLinearConvex::Piece> out;
    for (const auto& p : u.pieces) {
        bool dup = false;
        for (const auto& q : out)
            if (q.c0 == p.c0 && q.c == p.c) dup = true;
        if (!dup) out.push_back(p);
    }
    return out;
}

// Active-piece cells of u inside the polytope. Lower-dimensional and empty
// cells are dropped; interiors are pairwise disjoint.
std::vector<Region> active_regions(const Polytope& p, const PiecewiseLinearConvex& u) {
    auto pieces = dedupe_pieces(u);
    if (pieces.empty()) throw std::invalid_argument("piecewise linear function has no pieces");
    std::vector<Region> regions;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        std::vector<HalfspaceQ> hs;
        for (const auto& f : p.facets())
            hs.push_back({to_rational(f.normal), Rational(f.offset)});
        for (std::size_t j = 0; j < pieces.size(); ++j) {
            if (j == k) continue;
            // piece k >= piece j  <=>  <c_k - c_j, x> >= c0_j - c0_k
            hs.push_back({sub(pieces[k].c, pieces[j].c), pieces[k].c0 - pieces[j].c0});
        }
        try {
            regions.push_back({ConvexBody::from_halfspaces(hs, p.dim()), pieces[k]});
        } catch (const std::invalid_argument&) {
            // piece never strictly active: measure-zero region
        }
    }
    return regions;
}

// integral over a simplex of (a0 + <a,x>)(b0 + <b,x>) from its moments
Rational integrate_quadratic(const SimplexQ& s, const Rational& a0, const VecQ& a,
                             const Rational& b0, const VecQ& b) {
    Rational vol = 0;
    const std::size_t n = a.size();
    VecQ first(n, Rational(0));
    MatQ second(n, VecQ(n, Rational(0)));
    s.accumulate_moments(vol, first, second);
    Rational total = a0 * b0 * vol + a0 * dot(b, first) + b0 * dot(a, first);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) total += a[i] * b[j] * second[i][j];
    return total;
}

}  // namespace

Rational integrate_pl_affine(const Polytope& p, const PiecewiseLinearConvex& u,
                             const Rational& b0, const VecQ& b) {
    Rational total = 0;
    for (const auto& region : active_regions(p, u))
        for (const auto& s : region.body.triangulate())
            total += integrate_quadratic(s, region.piece.c0, region.piece.c, b0, b);
    return total;
}

Rational integrate_pl(const Polytope& p, const PiecewiseLinearConvex& u) {
    return integrate_pl_affine(p, u, Rational(1), VecQ(p.dim(), Rational(0)));
}

Rational ding_futaki(const Polytope& p, const AffineDensity& l, const PiecewiseLinearConvex& u) {
    VecQ origin(p.dim(), Rational(0));
    return -u.eval(origin) + integrate_pl_affine(p, u, l.a0, l.a);
}

bool pl_is_normalized(const Polytope& p, const PiecewiseLinearConvex& u) {
    VecQ origin(p.dim(), Rational(0));
    if (u.eval(origin) != 0) return false;
    // a convex PL function attains its minimum at a vertex of its active
    // subdivision
    for (const auto& region : active_regions(p, u))
        for (const auto& v : region.body.vertices())
            if (u.eval(v) < 0) return false;
    return true;
}

UniformBoundWitness uniform_bound_check(const Polytope& p, const StabilityReport& report,
                                        const PiecewiseLinearConvex& u) {
    if (!pl_is_normalized(p, u))
        throw std::invalid_argument("uniform_bound_check: u is not normalized");
    if (!report.lambda_bound)
        throw std::invalid_argument("uniform_bound_check needs alpha < 1");
    UniformBoundWitness w;
    w.lhs = ding_futaki(p, report.l, u);
    w.rhs = *report.lambda_bound * integrate_pl(p, u);
    w.holds = w.lhs >= w.rhs;
    return w;
}

std::string StabilityReport::to_json() const {
    nlohmann::json j;
    j["polytope_id"] = polytope_id;
    j["dim"] = dim;
    j["volume"] = rational_to_string(volume);
    j["l"]["a0"] = rational_to_string(l.a0);
    std::vector<std::string> coeffs;
    for (const auto& c : l.a) coeffs.push_back(rational_to_string(c));
    j["l"]["a"] = coeffs;
    j["alpha"] = rational_to_string(alpha);
    j["class"] = to_string(cls);
    if (lambda_bound) j["lambda_bound"] = rational_to_string(*lambda_bound);
    nlohmann::json vv = nlohmann::json::array();
    for (const auto& [v, value] : vertex_values) {
        nlohmann::json e;
        e["vertex"] = v;
        e["value"] = rational_to_string(value);
        vv.push_back(e);
    }
    j["vertex_values"] = vv;
    return j.dump(2);
}

std::string StabilityReport::csv_header(std::size_t dim) {
    std::string h = "polytope_id,dim,volume,l_a0";
    for (std::size_t i = 0; i < dim; ++i) h += ",l_a" + std::to_string(i + 1);
    return h + ",alpha,class";
}

std::string StabilityReport::to_csv_row() const {
    std::ostringstream out;
    out << polytope_id << "," << dim << "," << rational_to_string(volume) << ","
        << rational_to_string(l.a0);
    for (const auto& c : l.a) out << "," << rational_to_string(c);
    out << "," << rational_to_string(alpha) << "," << to_string(cls);
    return out.str();
}

}  // namespace toric
