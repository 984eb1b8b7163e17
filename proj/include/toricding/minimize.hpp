#ifndef TORICDING_MINIMIZE_HPP
#define TORICDING_MINIMIZE_HPP

#include <vector>

#include "toricding/functional.hpp"

namespace toric {

struct MinimizeOptions {
    int max_steps = 120;
    double step_size = 0.5;
    int max_halvings = 25;
    double tol_step = 1e-6;       // accepted steps may not increase D beyond this
    double stall_decrease = 1e-9; // stop when accepted improvement falls below
    NonlinearOptions nl;
    int envelope_slopes = 81;
};

struct MinimizeResult {
    DiscretePotential minimizer;
    std::vector<double> trace;  // D after the initial point and each accepted step
    bool converged = false;
    int accepted = 0;
    int rejected = 0;
};

/// Projected subgradient descent on grid values: closed-form gradient of the
/// discrete functional, convex-envelope projection, renormalization into the
/// normalized class, and halving line search. The trace is non-increasing up
/// to tol_step by construction.
MinimizeResult minimize_ding(const DiscretePotential& init, const AffineDensity& l,
                             const MinimizeOptions& opts = {});

}  // namespace toric

#endif
