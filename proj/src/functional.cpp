#include "toricding/functional.hpp"

#include <cmath>
#include <stdexcept>

namespace toric {

const Tolerances& default_tolerances() {
    static const Tolerances t;
    return t;
}

double j_toric(const DiscretePotential& u) {
    return integrate_grid(u) / to_double(u.ctx->volume());
}

double linear_term(const DiscretePotential& u, const AffineDensity& l) {
    VecQ w = u.ctx->affine_weights(l.a0, l.a);
    double s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) s += to_double(w[i]) * u.values[i];
    return s;
}

double modified_ding(const DiscretePotential& u, const AffineDensity& l,
                     const NonlinearOptions& opts) {
    return nonlinear_term(u, opts).value - u.at_origin() + linear_term(u, l);
}

double modified_ding(const DiscretePotential& u, const AffineDensity& l,
                     const PiecewiseLinearConvex& pl, const NonlinearOptions& opts) {
    Rational ding_linear = ding_futaki(u.ctx->polytope(), l, pl);
    return nonlinear_term(u, opts).value + to_double(ding_linear);
}

RicciDensity ricci_density(const DiscretePotential& v0, const NonlinearOptions& opts) {
    NonlinearOptions o = opts;
    if (!o.spec) o.spec = auto_dual_spec(v0, o.margin, o.nhalf);
    RicciDensity a;
    a.radius = o.spec->radius;
    a.scale = o.scale;
    if (v0.ctx->dim() <= 2) {
        a.mass = nonlinear_term_exact(v0, o.scale, a.radius).mass;
    } else {
        o.richardson = false;  // the deposit differentiates the plain box rule
        a.mass = dual_mass_deposit(v0, o);
    }
    a.total_mass = 0;
    for (double m : a.mass) a.total_mass += m;
    a.values.resize(a.mass.size());
    const auto& w = v0.ctx->volume_weights_d();
    for (std::size_t i = 0; i < a.mass.size(); ++i)
        a.values[i] = w[i] > 0 ? a.mass[i] / w[i] : 0.0;
    return a;
}

double d_A(const DiscretePotential& u, const RicciDensity& a) {
    if (u.values.size() != a.mass.size())
        throw std::invalid_argument("d_A: density computed on a different grid");
    double pairing = 0;
    for (std::size_t i = 0; i < a.mass.size(); ++i) pairing += u.values[i] * a.mass[i];
    double nl;
    if (u.ctx->dim() <= 2) {
        nl = nonlinear_term_exact(u, a.scale, a.radius).value;
    } else {
        NonlinearOptions o;
        o.spec = DualGridSpec{a.radius, 24};
        o.scale = a.scale;
        o.richardson = false;
        nl = nonlinear_term(u, o).value;
    }
    return nl - u.at_origin() + pairing;
}

namespace {

struct CovIntegrand {
    const AnalyticConvex* u;
    double operator()(const std::vector<double>& x) const {
        double val = u->value(x);
        std::vector<double> g;
        std::vector<std::vector<double>> h;
        try {
            g = u->gradient(x);
            h = u->hessian(x);
        } catch (const std::domain_error&) {
            return 0.0;  // boundary: the integrand extends by zero
        }
        double xg = 0;
        for (std::size_t j = 0; j < x.size(); ++j) xg += x[j] * g[j];
        double det;
        if (x.size() == 1) {
            det = h[0][0];
        } else if (x.size() == 2) {
            det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        } else {
            // small LU determinant
            auto m = h;
            det = 1;
            for (std::size_t c = 0; c < m.size(); ++c) {
                std::size_t p = c;
                for (std::size_t r = c + 1; r < m.size(); ++r)
                    if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
                if (m[p][c] == 0) return 0;
                if (p != c) {
                    std::swap(m[p], m[c]);
                    det = -det;
                }
                det *= m[c][c];
                for (std::size_t r = c + 1; r < m.size(); ++r) {
                    double f = m[r][c] / m[c][c];
                    for (std::size_t cc = c; cc < m.size(); ++cc) m[r][cc] -= f * m[c][cc];
                }
            }
        }
        return std::exp(val - xg) * std::max(det, 0.0);
    }
};

// degree-2 midpoint rule on a simplex
template <typename F>
double midpoint_rule(const std::vector<std::vector<double>>& v, double vol, const F& f) {
    const std::size_t n = v[0].size();
    double s = 0;
    std::size_t pairs = 0;
    std::vector<double> mid(n);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            for (std::size_t k = 0; k < n; ++k) mid[k] = 0.5 * (v[i][k] + v[j][k]);
            s += f(mid);
            ++pairs;
        }
    return vol * s / static_cast<double>(pairs);
}

template <typename F>
double adaptive_simplex(const std::vector<std::vector<double>>& v, double vol, const F& f,
                        double tol, int depth) {
    double coarse = midpoint_rule(v, vol, f);
    // split at the longest edge
    std::size_t bi = 0, bj = 1;
    double best = -1;
    const std::size_t n = v[0].size();
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            double d = 0;
            for (std::size_t k = 0; k < n; ++k) d += (v[i][k] - v[j][k]) * (v[i][k] - v[j][k]);
            if (d > best) {
                best = d;
                bi = i;
                bj = j;
            }
        }
    std::vector<double> mid(n);
    for (std::size_t k = 0; k < n; ++k) mid[k] = 0.5 * (v[bi][k] + v[bj][k]);
    auto left = v, right = v;
    left[bj] = mid;
    right[bi] = mid;
    double fine = midpoint_rule(left, vol / 2, f) + midpoint_rule(right, vol / 2, f);
    if (depth <= 0 || std::abs(fine - coarse) <= tol)
        return fine + (fine - coarse);  // one extrapolation step
    return adaptive_simplex(left, vol / 2, f, tol / 2, depth - 1) +
           adaptive_simplex(right, vol / 2, f, tol / 2, depth - 1);
}

}  // namespace

double nonlinear_term_change_of_variables(const AnalyticConvex& u, const Polytope& p,
                                          double rel_tol) {
    CovIntegrand f{&u};
    double total = 0;
    auto tris = p.body().triangulate();
    // first sweep for a magnitude estimate, then refine against it
    double rough = 0;
    for (const auto& s : tris) {
        std::vector<std::vector<double>> v;
        for (const auto& q : s.vertices) v.push_back(to_double(q));
        rough += std::abs(midpoint_rule(v, to_double(s.volume()), f));
    }
    double budget = std::max(rough, 1e-300) * rel_tol;
    for (const auto& s : tris) {
        std::vector<std::vector<double>> v;
        for (const auto& q : s.vertices) v.push_back(to_double(q));
        total += adaptive_simplex(v, to_double(s.volume()), f,
                                  budget * to_double(s.volume() / p.body().volume()), 22);
    }
    return -std::log(total);
}

double nonlinear_term_change_of_variables_grid(const DiscretePotential& u) {
    const auto& ctx = *u.ctx;
    const std::size_t n = ctx.dim();
    const double h = to_double(ctx.spec().h);
    double total = 0;
    for (std::size_t i = 0; i < ctx.node_count(); ++i) {
        // central stencils only; boundary nodes are skipped
        std::vector<double> g(n);
        std::vector<std::vector<double>> hess(n, std::vector<double>(n));
        bool ok = true;
        for (std::size_t a = 0; a < n && ok; ++a) {
            VecZ fwd = ctx.node_indices()[i], bwd = ctx.node_indices()[i];
            ++fwd[a];
            --bwd[a];
            auto fn = ctx.node_at(fwd), bn = ctx.node_at(bwd);
            if (!fn || !bn) {
                ok = false;
                break;
            }
            g[a] = (u.values[*fn] - u.values[*bn]) / (2 * h);
            hess[a][a] = (u.values[*fn] + u.values[*bn] - 2 * u.values[i]) / (h * h);
            for (std::size_t b = a + 1; b < n; ++b) {
                VecZ pp = ctx.node_indices()[i], pm = pp, mp = pp, mm = pp;
                ++pp[a], ++pp[b];
                ++pm[a], --pm[b];
                --mp[a], ++mp[b];
                --mm[a], --mm[b];
                auto npp = ctx.node_at(pp), npm = ctx.node_at(pm), nmp = ctx.node_at(mp),
                     nmm = ctx.node_at(mm);
                if (!npp || !npm || !nmp || !nmm) {
                    ok = false;
                    break;
                }
                hess[a][b] = hess[b][a] = (u.values[*npp] - u.values[*npm] - u.values[*nmp] +
                                           u.values[*nmm]) /
                                          (4 * h * h);
            }
        }
        if (!ok) continue;
        double det;
        if (n == 1)
            det = hess[0][0];
        else if (n == 2)
            det = hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0];
        else {
            det = 1;
            auto m = hess;
            for (std::size_t c = 0; c < n; ++c) {
                std::size_t p = c;
                for (std::size_t r = c + 1; r < n; ++r)
                    if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
                if (m[p][c] == 0) {
                    det = 0;
                    break;
                }
                if (p != c) {
                    std::swap(m[p], m[c]);
                    det = -det;
                }
                det *= m[c][c];
                for (std::size_t r = c + 1; r < n; ++r) {
                    double f = m[r][c] / m[c][c];
                    for (std::size_t cc = c; cc < n; ++cc) m[r][cc] -= f * m[c][cc];
                }
            }
        }
        if (det <= 0) continue;
        double xg = 0;
        for (std::size_t a = 0; a < n; ++a) xg += ctx.node_coords()[i][a] * g[a];
        total += ctx.volume_weights_d()[i] * std::exp(u.values[i] - xg) * det;
    }
    return -std::log(total);
}

}  // namespace toric
