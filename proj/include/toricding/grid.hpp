#ifndef TORICDING_GRID_HPP
#define TORICDING_GRID_HPP

#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "toricding/polytope.hpp"
#include "toricding/stability.hpp"

namespace toric {

struct GridSpec {
    Rational h;   // spacing; the origin is always a node
    VecZ lo, hi;  // inclusive multi-index range per axis
};

/// Regular grid over the bounding box of a polytope, restricted to nodes
/// inside the closed polytope, plus exact quadrature weights for
/// integrating piecewise linear interpolants of node values.
///
/// Cells are simplex-split (anti-diagonal in 2-d) so that the facet lines
/// of the bundled polytopes are unions of simplex edges; on such aligned
/// grids the weights tile the polytope exactly.
class GridContext {
  public:
    GridContext(Polytope p, const Rational& h);

    const Polytope& polytope() const { return poly_; }
    const GridSpec& spec() const { return spec_; }
    std::size_t dim() const { return poly_.dim(); }
    std::size_t node_count() const { return nodes_.size(); }
    const std::vector<VecZ>& node_indices() const { return nodes_; }
    const std::vector<std::vector<double>>& node_coords() const { return coords_; }
    VecQ node_coord_q(std::size_t i) const;
    std::optional<std::size_t> node_at(const VecZ& idx) const;
    std::size_t origin_node() const;

    Rational volume() const { return volume_; }
    /// True when the simplex cover integrates exactly over the polytope
    /// (sum of weights equals the volume).
    bool exact_cover() const { return exact_cover_; }

    const VecQ& volume_weights() const { return w_volume_; }
    const std::vector<double>& volume_weights_d() const { return w_volume_d_; }
    /// Exact weights for integral of lambda_i * (b0 + <b,x>).
    VecQ affine_weights(const Rational& b0, const VecQ& b) const;

    double max_vertex_norm() const;

    struct CoveredSimplex {
        std::vector<std::size_t> nodes;  // n+1 node ids
        SimplexQ geometry;
    };
    const std::vector<CoveredSimplex>& covered() const { return covered_; }

  private:
    Polytope poly_;
    GridSpec spec_;
    std::vector<VecZ> nodes_;
    std::vector<std::vector<double>> coords_;
    std::unordered_map<long long, std::size_t> index_;
    std::vector<CoveredSimplex> covered_;
    VecQ w_volume_;
    std::vector<double> w_volume_d_;
    Rational volume_;
    bool exact_cover_ = false;

    long long pack(const VecZ& idx) const;
};

struct DiscretePotential {
    std::shared_ptr<const GridContext> ctx;
    std::vector<double> values;
    bool normalized = false;

    double at_origin() const;
    /// Largest axis-direction difference quotient; a grid Lipschitz bound.
    double lipschitz_bound() const;
    DiscretePotential scaled(double s) const;
    DiscretePotential plus(const DiscretePotential& other, double s = 1.0) const;

    static DiscretePotential zero(std::shared_ptr<const GridContext> ctx);
    static DiscretePotential from_function(std::shared_ptr<const GridContext> ctx,
                                           const std::function<double(const std::vector<double>&)>& f);
    static DiscretePotential from_pl(std::shared_ptr<const GridContext> ctx,
                                     const PiecewiseLinearConvex& u);
};

/// Integral over the polytope of the PL interpolant of node values.
double integrate_grid(const DiscretePotential& u);

/// Lower convex envelope of node values: exact chain construction in 1-d,
/// double Legendre projection over a finite slope grid in higher dimension.
/// span == 0 derives the slope range from the data; pass an explicit span to
/// make repeated projections idempotent.
std::vector<double> lower_convex_envelope(const GridContext& ctx, const std::vector<double>& values,
                                          int slopes_per_axis = 65, double span = 0.0);

/// Line-convexity along axes and diagonals; a cheap necessary condition.
bool is_discretely_convex(const GridContext& ctx, const std::vector<double>& values,
                          double tol = 1e-9);

/// Moves u into the normalized class: subtracts u(0) and an exact
/// supporting slope at the origin computed by a small rational LP, so the
/// result is >= 0 with value 0 at the origin. Throws when no supporting
/// slope exists within tolerance (input not convex at the origin).
DiscretePotential normalize(const DiscretePotential& u, double tol = 1e-9);

}  // namespace toric

#endif
