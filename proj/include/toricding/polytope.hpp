#ifndef TORICDING_POLYTOPE_HPP
#define TORICDING_POLYTOPE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "toricding/body.hpp"
#include "toricding/rational.hpp"

namespace toric {

class PolytopeError : public std::runtime_error {
  public:
    explicit PolytopeError(const std::string& what) : std::runtime_error(what) {}
};

/// Lattice facet <normal, x> >= -offset with primitive integer normal.
struct Facet {
    VecZ normal;
    long long offset = 0;
};

struct ValidationReport {
    bool reflexive = false;
    bool delzant_smooth = false;
    bool origin_interior = false;
    bool roundtrip_ok = false;
    std::vector<VecZ> interior_lattice_points;
    std::vector<std::size_t> nonreflexive_facets;  // offset != 1
    std::vector<std::size_t> nonsmooth_vertices;
    std::vector<std::string> notes;
};

/// Full-dimensional lattice polytope with both vertex and facet
/// presentations. raw_mode admits bodies that are not reflexive or do not
/// contain the origin, so the invariant machinery stays unit-testable on
/// hand-computable inputs.
class Polytope {
  public:
    static Polytope from_vertices(std::vector<VecZ> vertices, bool raw_mode = false);

    std::size_t dim() const { return dim_; }
    const std::vector<VecZ>& vertices() const { return vertices_; }
    const std::vector<Facet>& facets() const { return facets_; }
    bool raw_mode() const { return raw_; }
    bool reflexive() const { return report_.reflexive; }
    bool delzant_smooth() const { return report_.delzant_smooth; }
    bool origin_interior() const { return report_.origin_interior; }
    const ValidationReport& validation() const { return report_; }

    const ConvexBody& body() const { return body_; }

    VecQ vertex_q(std::size_t i) const;
    /// Indices of facets active at vertex i.
    std::vector<std::size_t> facets_at_vertex(std::size_t i) const;

    /// Strict interiority test for a rational point.
    bool contains(const VecQ& x, bool strict = false) const;

  private:
    std::size_t dim_ = 0;
    bool raw_ = false;
    std::vector<VecZ> vertices_;
    std::vector<Facet> facets_;
    ConvexBody body_;
    ValidationReport report_;
};

struct MomentData {
    Rational volume;
    VecQ first;   // integral of x_i
    MatQ second;  // integral of x_i x_j

    /// (n+1)x(n+1) Gram matrix of {1, x_1, ..., x_n} in L^2.
    MatQ gram() const;
    bool gram_positive_definite() const;
};

Polytope parse_polytope(const std::string& text, bool raw_mode = false);
std::string serialize_polytope(const Polytope& p);

ValidationReport validate(const Polytope& p);

/// All lattice points strictly inside the polytope.
std::vector<VecZ> interior_lattice_points(const Polytope& p);

std::vector<SimplexQ> triangulate(const Polytope& p);

MomentData moments(const Polytope& p);

}  // namespace toric

#endif
