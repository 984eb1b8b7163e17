#include "toricding/body.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace toric {

bool lex_less(const VecQ& a, const VecQ& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return a.size() < b.size();
}

Rational SimplexQ::volume() const {
    const std::size_t n = vertices.size() - 1;
    MatQ edges;
    edges.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) edges.push_back(sub(vertices[i], vertices[0]));
    Rational d = determinant(edges);
    if (d < 0) d = -d;
    Rational fact = 1;
    for (std::size_t i = 2; i <= n; ++i) fact *= static_cast<int>(i);
    return d / fact;
}

void SimplexQ::accumulate_moments(Rational& vol, VecQ& first, MatQ& second) const {
    const std::size_t n = vertices.size() - 1;
    Rational v = volume();
    if (v == 0) return;
    vol += v;
    VecQ s(n, Rational(0));
    for (const auto& p : vertices)
        for (std::size_t i = 0; i < n; ++i) s[i] += p[i];
    Rational np1 = static_cast<int>(n + 1);
    for (std::size_t i = 0; i < n; ++i) first[i] += v * s[i] / np1;
    // integral of x_i x_j over a simplex: vol/((n+1)(n+2)) * (sum_k v_ki v_kj + S_i S_j)
    Rational denom = np1 * Rational(static_cast<int>(n + 2));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Rational q = s[i] * s[j];
            for (const auto& p : vertices) q += p[i] * p[j];
            second[i][j] += v * q / denom;
        }
    }
}

namespace {

MatQ sorted_unique(MatQ pts) {
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

std::size_t affine_rank(const MatQ& pts) {
    if (pts.size() <= 1) return 0;
    MatQ edges;
    for (std::size_t i = 1; i < pts.size(); ++i) edges.push_back(sub(pts[i], pts[0]));
    return rank(edges);
}

// Enumerates all k-subsets of [0, m) invoking fn on each.
template <typename Fn>
void for_subsets(std::size_t m, std::size_t k, Fn&& fn) {
    if (k > m) return;
    if (k == 0) {
        std::vector<std::size_t> empty;
        fn(empty);
        return;
    }
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (idx[i] != i + m - k) break;
            if (i == 0) return;
        }
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

ConvexBody ConvexBody::from_vertices(MatQ vertices) {
    if (vertices.empty()) throw std::invalid_argument("convex body needs vertices");
    ConvexBody b;
    b.dim_ = vertices[0].size();
    b.vertices_ = sorted_unique(std::move(vertices));
    if (affine_rank(b.vertices_) != b.dim_)
        throw std::invalid_argument("point set is not full-dimensional");
    b.compute_facets();
    // every input point must be extreme: active facets span the whole space
    for (const auto& v : b.vertices_) {
        MatQ active;
        for (const auto& f : b.facets_)
            if (dot(f.normal, v) == -f.offset) active.push_back(f.normal);
        if (rank(active) != b.dim_)
            throw std::invalid_argument("point set contains a non-extreme point");
    }
    return b;
}

ConvexBody ConvexBody::hull_of(MatQ points) {
    points = sorted_unique(std::move(points));
    if (points.empty()) throw std::invalid_argument("empty point set");
    const std::size_t n = points[0].size();
    if (affine_rank(points) != n) throw std::invalid_argument("point set is not full-dimensional");
    ConvexBody probe;
    probe.dim_ = n;
    probe.vertices_ = points;
    probe.compute_facets();
    MatQ extreme;
    for (const auto& v : points) {
        MatQ active;
        for (const auto& f : probe.facets_)
            if (dot(f.normal, v) == -f.offset) active.push_back(f.normal);
        if (rank(active) == n) extreme.push_back(v);
    }
    ConvexBody b;
    b.dim_ = n;
    b.vertices_ = std::move(extreme);
    b.facets_ = std::move(probe.facets_);
    return b;
}

void ConvexBody::compute_facets() {
    const std::size_t n = dim_;
    const std::size_t k = vertices_.size();
    std::map<std::pair<VecQ, Rational>, bool> seen;
    facets_.clear();
    if (n == 1) {
        // two facets: x >= min and -x >= -max
        Rational lo = vertices_.front()[0], hi = vertices_.back()[0];
        facets_.push_back({VecQ{Rational(1)}, -lo});
        facets_.push_back({VecQ{Rational(-1)}, hi});
        return;
    }
    for_subsets(k, n, [&](const std::vector<std::size_t>& idx) {
        MatQ edges;
        for (std::size_t i = 1; i < n; ++i)
            edges.push_back(sub(vertices_[idx[i]], vertices_[idx[0]]));
        VecQ normal = cross_generalized(edges, n);
        bool zero = true;
        for (const auto& c : normal)
            if (c != 0) zero = false;
        if (zero) return;
        Rational level = dot(normal, vertices_[idx[0]]);
        bool above = false, below = false;
        for (const auto& v : vertices_) {
            Rational d = dot(normal, v) - level;
            if (d > 0) above = true;
            if (d < 0) below = true;
            if (above && below) return;
        }
        if (below) {
            for (auto& c : normal) c = -c;
            level = -level;
        }
        // normalize scale: first nonzero coefficient +1 keeps the key canonical
        Rational pivot = 0;
        for (const auto& c : normal)
            if (c != 0) {
                pivot = c;
                break;
            }
        if (pivot < 0) pivot = -pivot;  // sign already fixed by orientation
        for (auto& c : normal) c /= pivot;
        level /= pivot;
        auto key = std::make_pair(normal, level);
        if (seen.emplace(key, true).second) facets_.push_back({normal, -level});
    });
    if (facets_.size() < n + 1) throw std::invalid_argument("degenerate hull");
}

ConvexBody ConvexBody::from_halfspaces(const std::vector<HalfspaceQ>& hs, std::size_t dim) {
    MatQ points;
    for_subsets(hs.size(), dim, [&](const std::vector<std::size_t>& idx) {
        MatQ m;
        VecQ rhs;
        for (auto i : idx) {
            m.push_back(hs[i].normal);
            rhs.push_back(-hs[i].offset);
        }
        auto x = solve_linear(std::move(m), std::move(rhs));
        if (!x) return;
        for (const auto& h : hs)
            if (dot(h.normal, *x) < -h.offset) return;
        points.push_back(std::move(*x));
    });
    if (points.empty()) throw std::invalid_argument("empty halfspace intersection");
    return hull_of(std::move(points));
}

bool ConvexBody::contains(const VecQ& x, bool strict) const {
    for (const auto& f : facets_) {
        Rational d = dot(f.normal, x) + f.offset;
        if (strict ? d <= 0 : d < 0) return false;
    }
    return true;
}

Rational ConvexBody::support(const VecQ& d) const {
    Rational best = dot(d, vertices_[0]);
    for (std::size_t i = 1; i < vertices_.size(); ++i) {
        Rational v = dot(d, vertices_[i]);
        if (v > best) best = v;
    }
    return best;
}

std::optional<ConvexBody> ConvexBody::clip(const HalfspaceQ& h) const {
    std::vector<HalfspaceQ> hs = facets_;
    hs.push_back(h);
    MatQ points;
    for (const auto& v : vertices_)
        if (dot(h.normal, v) >= -h.offset) points.push_back(v);
    // new vertices: intersections of the cut hyperplane with edges; brute
    // force over (dim-1)-subsets of the old facets plus the cut.
    for_subsets(facets_.size(), dim_ - 1, [&](const std::vector<std::size_t>& idx) {
        MatQ m{h.normal};
        VecQ rhs{-h.offset};
        for (auto i : idx) {
            m.push_back(facets_[i].normal);
            rhs.push_back(-facets_[i].offset);
        }
        auto x = solve_linear(std::move(m), std::move(rhs));
        if (!x) return;
        if (!contains(*x)) return;
        points.push_back(std::move(*x));
    });
    if (points.empty()) return std::nullopt;
    points = sorted_unique(std::move(points));
    if (affine_rank(points) != dim_) return std::nullopt;
    return hull_of(std::move(points));
}

std::vector<std::size_t> ConvexBody::facet_vertices(const HalfspaceQ& f) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (dot(f.normal, vertices_[i]) == -f.offset) out.push_back(i);
    return out;
}

std::vector<MatQ> ConvexBody::triangulate_face(const MatQ& face_vertices) const {
    const std::size_t d = affine_rank(face_vertices);
    if (face_vertices.size() == d + 1) return {face_vertices};
    const VecQ& apex = face_vertices[0];  // callers keep faces lex-sorted
    std::set<MatQ> seen;
    std::vector<MatQ> out;
    for (const auto& f : facets_) {
        MatQ sub;
        for (const auto& v : face_vertices)
            if (dot(f.normal, v) == -f.offset) sub.push_back(v);
        if (sub.size() == face_vertices.size()) continue;  // facet contains the face
        if (sub.empty() || affine_rank(sub) != d - 1) continue;
        bool has_apex = std::find(sub.begin(), sub.end(), apex) != sub.end();
        if (has_apex) continue;
        if (!seen.insert(sub).second) continue;
        for (auto& simplex : triangulate_face(sub)) {
            simplex.push_back(apex);
            std::sort(simplex.begin(), simplex.end(), lex_less);
            out.push_back(std::move(simplex));
        }
    }
    return out;
}

std::vector<SimplexQ> ConvexBody::triangulate() const {
    std::vector<SimplexQ> out;
    for (auto& m : triangulate_face(vertices_)) out.push_back(SimplexQ{std::move(m)});
    return out;
}

std::vector<SimplexQ> ConvexBody::star_triangulate(const VecQ& apex) const {
    if (!contains(apex)) throw std::invalid_argument("star apex outside body");
    std::vector<SimplexQ> out;
    for (const auto& f : facets_) {
        if (dot(f.normal, apex) == -f.offset) continue;  // apex on this facet
        MatQ face;
        for (auto i : facet_vertices(f)) face.push_back(vertices_[i]);
        std::sort(face.begin(), face.end(), lex_less);
        for (auto& simplex : triangulate_face(face)) {
            simplex.push_back(apex);
            out.push_back(SimplexQ{std::move(simplex)});
        }
    }
    return out;
}

void ConvexBody::moments(Rational& vol, VecQ& first, MatQ& second) const {
    vol = 0;
    first.assign(dim_, Rational(0));
    second.assign(dim_, VecQ(dim_, Rational(0)));
    for (const auto& s : triangulate()) s.accumulate_moments(vol, first, second);
}

Rational ConvexBody::volume() const {
    Rational vol = 0;
    for (const auto& s : triangulate()) vol += s.volume();
    return vol;
}

}  // namespace toric
