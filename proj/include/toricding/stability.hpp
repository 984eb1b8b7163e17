#ifndef TORICDING_STABILITY_HPP
#define TORICDING_STABILITY_HPP

#include <optional>
#include <string>
#include <vector>

#include "toricding/polytope.hpp"

namespace toric {

/// The normalizing affine density l(x) = a0 + <a, x>, defined by
/// -u(0) + integral(u*l) = 0 for every affine u. Equivalently l solves the
/// moment system a0*|D| + <a,m> = 1, a0*m + M a = 0.
struct AffineDensity {
    Rational a0;
    VecQ a;

    Rational eval(const VecQ& x) const;
    Rational eval(const VecZ& x) const;
};

enum class StabilityClass { UniformStable, SemistableBoundary, Unstable };

std::string to_string(StabilityClass c);

struct StabilityReport {
    std::string polytope_id;
    std::size_t dim = 0;
    Rational volume;
    AffineDensity l;
    Rational alpha;
    StabilityClass cls = StabilityClass::UniformStable;
    std::vector<std::pair<VecZ, Rational>> vertex_values;  // (vertex, 1 - |D| l(v))
    std::optional<Rational> lambda_bound;                  // (1-alpha)/|D| when alpha < 1

    std::string to_json() const;
    std::string to_csv_row() const;
    static std::string csv_header(std::size_t dim);
};

/// Convex piecewise linear function u(x) = max_k (c0_k + <c_k, x>) on the
/// closed polytope.
struct PiecewiseLinearConvex {
    struct Piece {
        Rational c0;
        VecQ c;
    };
    std::vector<Piece> pieces;

    Rational eval(const VecQ& x) const;
    PiecewiseLinearConvex scaled_add(const Rational& s, const PiecewiseLinearConvex& w) const;
};

AffineDensity solve_l(const MomentData& md);

StabilityReport alpha_invariant(const Polytope& p, const AffineDensity& l,
                                const std::string& id = "");

/// Exact integral over the polytope of u * (b0 + <b, x>) computed by
/// decomposing the domain into the active regions of u's pieces.
Rational integrate_pl_affine(const Polytope& p, const PiecewiseLinearConvex& u,
                             const Rational& b0, const VecQ& b);

/// Integral of u itself.
Rational integrate_pl(const Polytope& p, const PiecewiseLinearConvex& u);

/// Relative Ding-Futaki invariant I(u) = -u(0) + integral(u*l), exact.
Rational ding_futaki(const Polytope& p, const AffineDensity& l, const PiecewiseLinearConvex& u);

/// Exact check that u(0) = 0 and u >= 0 on the polytope.
bool pl_is_normalized(const Polytope& p, const PiecewiseLinearConvex& u);

struct UniformBoundWitness {
    Rational lhs;  // I(u)
    Rational rhs;  // lambda * integral(u)
    bool holds = false;
};

/// Verifies I(u) >= ((1-alpha)/|D|) * integral(u) for normalized u. Throws
/// if u is not normalized or alpha >= 1.
UniformBoundWitness uniform_bound_check(const Polytope& p, const StabilityReport& report,
                                        const PiecewiseLinearConvex& u);

}  // namespace toric

#endif
