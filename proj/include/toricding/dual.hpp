#ifndef TORICDING_DUAL_HPP
#define TORICDING_DUAL_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "toricding/grid.hpp"

namespace toric {

/// Symmetric dual-variable box [-R, R]^n with nodes at j*R/nhalf. The
/// radius is kept rational so the exact cone decomposition of the tail can
/// clip against the box.
struct DualGridSpec {
    Rational radius;
    long long nhalf = 0;

    double spacing_d() const { return to_double(radius) / static_cast<double>(nhalf); }
    long long nodes_per_axis() const { return 2 * nhalf + 1; }
};

/// Box rule: max vertex norm * grid Lipschitz bound + margin.
DualGridSpec auto_dual_spec(const DiscretePotential& u, double margin = 24.0, long long nhalf = 0);

/// Discrete Legendre transform max_x(<x,xi> - u(x)) sampled on the dual
/// grid, with the attaining node recorded per dual node.
struct DualPotential {
    DualGridSpec spec;
    std::size_t dim = 0;
    std::vector<double> values;        // row-major over the dual box
    std::vector<std::int32_t> argmax;  // attaining primal node id
    bool covers_gradients = true;      // false when the box misses grid slopes

    double min_value() const;
    std::size_t flat(const VecZ& j) const;
    std::vector<double> coord(const VecZ& j) const;
};

DualPotential legendre_transform(const DiscretePotential& u, const DualGridSpec& spec);

/// Dual of the dual restricted to the primal grid: max_xi(<x,xi> - phi).
std::vector<double> legendre_back_transform(const DualPotential& phi, const GridContext& ctx);

/// Divided difference of exp at k+1 points (Opitz matrix form for k >= 3,
/// series/ratio hybrids below). Always positive.
double dd_exp(const double* x, int k);

struct NonlinearOptions {
    double scale = 1.0;                 // integrand exp(-scale * phi)
    std::optional<DualGridSpec> spec;   // default: auto_dual_spec(u, margin, nhalf)
    bool richardson = true;             // one h -> h/2 extrapolation of the box part
    double margin = 24.0;
    long long nhalf = 0;                // 0: dimension-dependent default
};

struct NonlinearBreakdown {
    double value = 0;  // -log(box + tail)
    double box = 0;
    double tail = 0;
    DualGridSpec spec;
    bool covers_gradients = true;
};

/// -log integral over R^n of exp(-scale*phi), phi the discrete Legendre
/// dual of u: closed-form integration of the PL interpolant over the box
/// plus the exact support-function tail over the complement.
NonlinearBreakdown nonlinear_term(const DiscretePotential& u, const NonlinearOptions& opts = {});

/// Gradient data of the box integral: mass deposited on each primal node,
/// normalized by the full integral. Summing over nodes gives
/// scale * box/(box+tail). Uses the plain (non-extrapolated) box rule.
std::vector<double> dual_mass_deposit(const DiscretePotential& u, const NonlinearOptions& opts,
                                      double* total_integral = nullptr);

/// Exact integral over R^n of exp(-scale * h) for the support function h of
/// the polytope, by simplicial decomposition of the vertex normal cones.
double cone_integral_total(const Polytope& p, double scale);

/// Same integrand over the box only.
double cone_integral_box(const Polytope& p, double scale, const DualGridSpec& spec);

/// Cell-exact backend (dimensions 1 and 2): integrates exp(-scale * phi)
/// for the true max-affine conjugate of the samples over the box, by
/// decomposing the box into per-node dominance cells. The integrand's
/// exponent is jointly convex along potential mixes, so values computed this
/// way are convex along mixes and the mass vector is the exact gradient.
struct ExactNonlinear {
    double value = 0;  // -log(box + tail)
    double box = 0;
    double tail = 0;
    Rational radius;
    std::vector<double> mass;  // scale * cell integral / (box + tail), per node
};

ExactNonlinear nonlinear_term_exact(const DiscretePotential& u, double scale,
                                    const Rational& radius);

}  // namespace toric

#endif
