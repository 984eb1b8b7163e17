#ifndef TORICDING_FUNCTIONAL_HPP
#define TORICDING_FUNCTIONAL_HPP

#include "toricding/dual.hpp"
#include "toricding/grid.hpp"
#include "toricding/guillemin.hpp"
#include "toricding/stability.hpp"

namespace toric {

/// Every tolerance used by the evaluation layer, in one place.
struct Tolerances {
    double envelope = 1e-9;          // inf phi = -u(0), normalization slack
    double convexity = 1e-12;        // grid values vs their envelope after projection
    double backend_rel = 1e-4;       // dual-grid vs change-of-variables agreement
    double scaling_identity = 1e-6;  // the n log(eps) shift identity
    double ricci_mass = 1e-3;        // total mass of the Ricci density
    double descent_step = 1e-6;      // accepted-step monotonicity slack
    double quadrature_rel = 1e-7;    // adaptive quadrature target
    double probe_abs = 1e-6;         // probe running-max stabilization
    double probe_rel = 1e-3;
};

const Tolerances& default_tolerances();

/// (1/|D|) integral of u over the polytope.
double j_toric(const DiscretePotential& u);

/// Quadrature of integral(u * l) using exact PL weights.
double linear_term(const DiscretePotential& u, const AffineDensity& l);

/// D(u) = nonlinear_term(u) - u(0) + integral(u*l).
double modified_ding(const DiscretePotential& u, const AffineDensity& l,
                     const NonlinearOptions& opts = {});

/// Same with the linear part computed exactly from the PL description of u
/// (the grid samples still drive the nonlinear term).
double modified_ding(const DiscretePotential& u, const AffineDensity& l,
                     const PiecewiseLinearConvex& pl, const NonlinearOptions& opts);

/// Positive density on the polytope whose pairing makes the reference
/// potential the exact critical point of the comparison functional: the
/// node masses are the exact gradient of the discrete nonlinear term
/// (cell-exact backend in dimensions 1 and 2).
struct RicciDensity {
    std::vector<double> values;  // density per node (mass / node volume)
    std::vector<double> mass;    // cell mass per node; sums to ~1
    double total_mass = 0;
    Rational radius;             // dual box the density was computed on
    double scale = 1.0;
};

RicciDensity ricci_density(const DiscretePotential& v0, const NonlinearOptions& opts = {});

/// D_A(u) = nonlinear_term(u) - u(0) + integral(u*A). Evaluated with the
/// cell-exact backend on the same dual box as A, so the reference potential
/// is the exact discrete minimizer and convexity along mixes is exact.
double d_A(const DiscretePotential& u, const RicciDensity& a);

/// Change-of-variables backend: integral over the polytope of
/// exp(u - <x, grad u>) det(hess u) computed from closed-form derivatives by
/// adaptive simplex quadrature. Returns -log of the integral.
double nonlinear_term_change_of_variables(const AnalyticConvex& u, const Polytope& p,
                                          double rel_tol = 1e-7);

/// Same formula from grid samples with finite-difference derivatives
/// (diagnostic quality: interior stencils only).
double nonlinear_term_change_of_variables_grid(const DiscretePotential& u);

}  // namespace toric

#endif
