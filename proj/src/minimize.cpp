#include "toricding/minimize.hpp"

#include <cmath>

namespace toric {

MinimizeResult minimize_ding(const DiscretePotential& init, const AffineDensity& l,
                             const MinimizeOptions& opts) {
    const auto& ctx = *init.ctx;
    const bool exact = ctx.dim() <= 2;
    NonlinearOptions nl = opts.nl;
    nl.richardson = false;  // gradient and value must be the same discrete functional
    DiscretePotential u = init;
    const double span = init.lipschitz_bound() + 4.0;  // fixed across the run
    if (!u.normalized) {
        u.values = lower_convex_envelope(ctx, u.values, opts.envelope_slopes, span);
        u = normalize(u, 1e-6);
    }
    if (!nl.spec) nl.spec = auto_dual_spec(u, nl.margin + 8, nl.nhalf);
    const Rational radius = nl.spec->radius;

    VecQ lw = ctx.affine_weights(l.a0, l.a);
    std::vector<double> lwd(lw.size());
    for (std::size_t i = 0; i < lw.size(); ++i) lwd[i] = to_double(lw[i]);
    const std::size_t origin = ctx.origin_node();

    auto lin_part = [&](const DiscretePotential& w) {
        double lin = -w.values[origin];
        for (std::size_t i = 0; i < lwd.size(); ++i) lin += lwd[i] * w.values[i];
        return lin;
    };
    auto eval = [&](const DiscretePotential& w) {
        double nlv = exact ? nonlinear_term_exact(w, 1.0, radius).value
                           : nonlinear_term(w, nl).value;
        return nlv + lin_part(w);
    };
    auto gradient = [&](const DiscretePotential& w) {
        std::vector<double> mass =
            exact ? nonlinear_term_exact(w, 1.0, radius).mass : dual_mass_deposit(w, nl);
        std::vector<double> g(mass.size());
        for (std::size_t i = 0; i < mass.size(); ++i) g[i] = -mass[i] + lwd[i];
        g[origin] -= 1.0;
        return g;
    };

    MinimizeResult res;
    double current = eval(u);
    res.trace.push_back(current);
    double step = opts.step_size;

    for (int it = 0; it < opts.max_steps; ++it) {
        std::vector<double> grad = gradient(u);
        double gnorm = 0;
        for (double g : grad) gnorm = std::max(gnorm, std::abs(g));
        if (gnorm == 0) {
            res.converged = true;
            break;
        }

        bool accepted = false;
        for (int half = 0; half < opts.max_halvings; ++half) {
            DiscretePotential trial = u;
            for (std::size_t i = 0; i < grad.size(); ++i) trial.values[i] -= step * grad[i];
            trial.values = lower_convex_envelope(ctx, trial.values, opts.envelope_slopes, span);
            trial.normalized = false;
            try {
                trial = normalize(trial, 1e-6);
            } catch (const std::invalid_argument&) {
                step *= 0.5;
                ++res.rejected;
                continue;
            }
            double next = eval(trial);
            if (next <= current + opts.tol_step) {
                double improvement = current - next;
                u = std::move(trial);
                current = next;
                res.trace.push_back(current);
                ++res.accepted;
                accepted = true;
                if (improvement >= 0) step *= 1.2;
                if (improvement < opts.stall_decrease && it > 4) {
                    res.converged = true;
                    res.minimizer = std::move(u);
                    return res;
                }
                break;
            }
            step *= 0.5;
            ++res.rejected;
        }
        if (!accepted) {  // line search exhausted: stationary up to tolerance
            res.converged = true;
            break;
        }
    }
    res.minimizer = std::move(u);
    return res;
}

}  // namespace toric
