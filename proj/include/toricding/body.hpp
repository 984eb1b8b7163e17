#ifndef TORICDING_BODY_HPP
#define TORICDING_BODY_HPP

#include <vector>

#include "toricding/linalg.hpp"
#include "toricding/rational.hpp"

namespace toric {

/// Closed halfspace <normal, x> >= -offset.
struct HalfspaceQ {
    VecQ normal;
    Rational offset;
};

/// Non-degenerate simplex given by n+1 rational points in R^n.
struct SimplexQ {
    MatQ vertices;  // (n+1) rows of length n

    Rational volume() const;
    /// (volume, first moments, second moments) of the simplex.
    void accumulate_moments(Rational& vol, VecQ& first, MatQ& second) const;
};

/// A full-dimensional bounded convex body with exact rational vertices and
/// facets. Both presentations are kept in canonical sorted order, so equal
/// bodies compare equal member-wise.
class ConvexBody {
  public:
    ConvexBody() = default;

    /// Builds from extreme points. Throws if the points are not full
    /// dimensional or some point is not a vertex of the hull.
    static ConvexBody from_vertices(MatQ vertices);

    /// Builds from an arbitrary finite point set: non-extreme points are
    /// discarded first.
    static ConvexBody hull_of(MatQ points);

    /// Vertex enumeration of {x : <n_i,x> >= -c_i for all i}. Throws if the
    /// region is unbounded or empty or not full-dimensional.
    static ConvexBody from_halfspaces(const std::vector<HalfspaceQ>& hs, std::size_t dim);

    std::size_t dim() const { return dim_; }
    const MatQ& vertices() const { return vertices_; }
    const std::vector<HalfspaceQ>& facets() const { return facets_; }

    bool contains(const VecQ& x, bool strict = false) const;

    /// max_{x in body} <d, x>.
    Rational support(const VecQ& d) const;

    /// Intersection with a halfspace. Empty or lower-dimensional results
    /// come back as nullopt.
    std::optional<ConvexBody> clip(const HalfspaceQ& h) const;

    /// Deterministic pulling triangulation (recursive fan from the
    /// lexicographically least vertex of every face). A simplex body
    /// triangulates to itself.
    std::vector<SimplexQ> triangulate() const;

    /// Cone-over-boundary triangulation from an interior apex: one simplex
    /// per facet simplex, apex adjoined. Facets through the apex are skipped.
    std::vector<SimplexQ> star_triangulate(const VecQ& apex) const;

    void moments(Rational& vol, VecQ& first, MatQ& second) const;
    Rational volume() const;

    /// Vertex indices lying on the facet hyperplane.
    std::vector<std::size_t> facet_vertices(const HalfspaceQ& f) const;

  private:
    std::size_t dim_ = 0;
    MatQ vertices_;
    std::vector<HalfspaceQ> facets_;

    void compute_facets();
    std::vector<MatQ> triangulate_face(const MatQ& face_vertices) const;
};

bool lex_less(const VecQ& a, const VecQ& b);

}  // namespace toric

#endif
