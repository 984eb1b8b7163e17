#include "toricding/dual.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

namespace toric {

// ---------------------------------------------------------------------------
// divided differences of exp
// ---------------------------------------------------------------------------

namespace {

// dd[exp](a,b) = exp(mean) * sinh(d)/d with d = (b-a)/2
inline double dd1(double a, double b) {
    double m = 0.5 * (a + b), d = 0.5 * (b - a);
    double s;
    double d2 = d * d;
    if (std::abs(d) < 1e-4)
        s = 1.0 + d2 / 6.0 * (1.0 + d2 / 20.0 * (1.0 + d2 / 42.0));
    else
        s = std::sinh(d) / d;
    return std::exp(m) * s;
}

// complete homogeneous symmetric series: dd^k[exp](x) = e^m sum_j h_j(x-m)/(k+j)!
inline double dd_series(const double* x, int k) {
    double m = 0;
    for (int i = 0; i <= k; ++i) m += x[i];
    m /= (k + 1);
    double y[6];
    for (int i = 0; i <= k; ++i) y[i] = x[i] - m;
    const int J = 16;
    double h[J + 1];
    for (int j = 0; j <= J; ++j) h[j] = (j == 0) ? 1.0 : h[j - 1] * y[0];
    for (int v = 1; v <= k; ++v)
        for (int j = 1; j <= J; ++j) h[j] += y[v] * h[j - 1];
    double fact = 1;
    for (int i = 2; i <= k; ++i) fact *= i;
    double total = 0, term_denom = fact;
    for (int j = 0; j <= J; ++j) {
        if (j > 0) term_denom *= (k + j);
        total += h[j] / term_denom;
    }
    return std::exp(m) * total;
}

inline double dd2(double a, double b, double c) {
    double v[3] = {a, b, c};
    std::sort(v, v + 3);
    double spread = v[2] - v[0];
    if (spread <= 1.0) return dd_series(v, 2);
    return (dd1(v[1], v[2]) - dd1(v[0], v[1])) / spread;
}

inline double dd3(double a, double b, double c, double d) {
    double v[4] = {a, b, c, d};
    std::sort(v, v + 4);
    double spread = v[3] - v[0];
    if (spread <= 1.5) return dd_series(v, 3);
    return (dd2(v[1], v[2], v[3]) - dd2(v[0], v[1], v[2])) / spread;
}

// Opitz form for higher orders: dd table is the first row of exp of the
// bidiagonal matrix with the nodes on the diagonal.
double dd_opitz(const double* x, int k) {
    const int n = k + 1;
    double m = 0;
    for (int i = 0; i < n; ++i) m += x[i];
    m /= n;
    double norm = 1;
    for (int i = 0; i < n; ++i) norm = std::max(norm, std::abs(x[i] - m) + 1);
    int s = 0;
    while (norm > 0.5) {
        norm *= 0.5;
        ++s;
    }
    double t = std::ldexp(1.0, -s);
    // A = t*(Z - m I), upper triangular (n x n), stored dense
    std::vector<double> a(n * n, 0.0);
    for (int i = 0; i < n; ++i) a[i * n + i] = t * (x[i] - m);
    for (int i = 0; i + 1 < n; ++i) a[i * n + i + 1] = t;
    // exp(A) by Taylor
    std::vector<double> e(n * n, 0.0), term(n * n, 0.0), tmp(n * n, 0.0);
    for (int i = 0; i < n; ++i) {
        e[i * n + i] = 1.0;
        term[i * n + i] = 1.0;
    }
    for (int it = 1; it < 24; ++it) {
        std::fill(tmp.begin(), tmp.end(), 0.0);
        for (int i = 0; i < n; ++i)
            for (int l = i; l < n; ++l) {
                double tv = term[i * n + l];
                if (tv == 0) continue;
                for (int j = l; j < n; ++j) tmp[i * n + j] += tv * a[l * n + j];
            }
        double scale = 1.0 / it;
        double maxt = 0;
        for (int i = 0; i < n * n; ++i) {
            term[i] = tmp[i] * scale;
            e[i] += term[i];
            maxt = std::max(maxt, std::abs(term[i]));
        }
        if (maxt < 1e-19) break;
    }
    // square back s times
    for (int q = 0; q < s; ++q) {
        std::fill(tmp.begin(), tmp.end(), 0.0);
        for (int i = 0; i < n; ++i)
            for (int l = i; l < n; ++l) {
                double ev = e[i * n + l];
                if (ev == 0) continue;
                for (int j = l; j < n; ++j) tmp[i * n + j] += ev * e[l * n + j];
            }
        e.swap(tmp);
    }
    return std::exp(m) * e[n - 1];
}

}  // namespace

double dd_exp(const double* x, int k) {
    switch (k) {
        case 0: return std::exp(x[0]);
        case 1: return dd1(x[0], x[1]);
        case 2: return dd2(x[0], x[1], x[2]);
        case 3: return dd3(x[0], x[1], x[2], x[3]);
        default: return dd_opitz(x, k);
    }
}

// ---------------------------------------------------------------------------
// dual grid and transform
// ---------------------------------------------------------------------------

DualGridSpec auto_dual_spec(const DiscretePotential& u, double margin, long long nhalf) {
    if (nhalf <= 0) nhalf = u.ctx->dim() == 1 ? 1024 : (u.ctx->dim() == 2 ? 192 : 24);
    double r = u.ctx->max_vertex_norm() * u.lipschitz_bound() + margin;
    DualGridSpec spec;
    spec.radius = Rational(static_cast<long long>(std::ceil(r * 8)), 8);
    spec.nhalf = nhalf;
    return spec;
}

std::size_t DualPotential::flat(const VecZ& j) const {
    std::size_t idx = 0;
    long long m = 2 * spec.nhalf + 1;
    for (std::size_t k = 0; k < j.size(); ++k) idx = idx * m + static_cast<std::size_t>(j[k] + spec.nhalf);
    return idx;
}

std::vector<double> DualPotential::coord(const VecZ& j) const {
    std::vector<double> xi(j.size());
    double h = spec.spacing_d();
    for (std::size_t k = 0; k < j.size(); ++k) xi[k] = h * static_cast<double>(j[k]);
    return xi;
}

double DualPotential::min_value() const {
    double m = values[0];
    for (double v : values) m = std::min(m, v);
    return m;
}

DualPotential legendre_transform(const DiscretePotential& u, const DualGridSpec& spec) {
    const auto& ctx = *u.ctx;
    const std::size_t n = ctx.dim();
    const long long m = 2 * spec.nhalf + 1;
    DualPotential out;
    out.spec = spec;
    out.dim = n;
    const double hxi = spec.spacing_d();
    const double lip = u.lipschitz_bound();
    out.covers_gradients = to_double(spec.radius) >= lip;

    const std::size_t total = static_cast<std::size_t>(std::pow(static_cast<double>(m), n) + 0.5);
    out.values.assign(total, 0.0);
    out.argmax.assign(total, -1);

    if (n == 1) {
        for (long long j = -spec.nhalf; j <= spec.nhalf; ++j) {
            double xi = hxi * static_cast<double>(j);
            double best = -1e300;
            std::int32_t arg = -1;
            for (std::size_t i = 0; i < ctx.node_count(); ++i) {
                double v = ctx.node_coords()[i][0] * xi - u.values[i];
                if (v > best) {
                    best = v;
                    arg = static_cast<std::int32_t>(i);
                }
            }
            std::size_t f = static_cast<std::size_t>(j + spec.nhalf);
            out.values[f] = best;
            out.argmax[f] = arg;
        }
        return out;
    }
    if (n == 2) {
        // stage 1: per x2-row, conjugate along x1
        std::map<long long, std::vector<std::size_t>> rows;
        for (std::size_t i = 0; i < ctx.node_count(); ++i) rows[ctx.node_indices()[i][1]].push_back(i);
        const std::size_t nrows = rows.size();
        std::vector<double> x2(nrows);
        std::vector<std::vector<double>> g(nrows, std::vector<double>(m));
        std::vector<std::vector<std::int32_t>> garg(nrows, std::vector<std::int32_t>(m));
        std::size_t r = 0;
        for (const auto& [i2, ids] : rows) {
            x2[r] = to_double(Rational(i2) * ctx.spec().h);
            for (long long j1 = -spec.nhalf; j1 <= spec.nhalf; ++j1) {
                double xi1 = hxi * static_cast<double>(j1);
                double best = -1e300;
                std::int32_t arg = -1;
                for (auto i : ids) {
                    double v = ctx.node_coords()[i][0] * xi1 - u.values[i];
                    if (v > best) {
                        best = v;
                        arg = static_cast<std::int32_t>(i);
                    }
                }
                g[r][static_cast<std::size_t>(j1 + spec.nhalf)] = best;
                garg[r][static_cast<std::size_t>(j1 + spec.nhalf)] = arg;
            }
            ++r;
        }
        // stage 2: conjugate across rows along x2
        for (long long j1 = -spec.nhalf; j1 <= spec.nhalf; ++j1) {
            std::size_t c1 = static_cast<std::size_t>(j1 + spec.nhalf);
            for (long long j2 = -spec.nhalf; j2 <= spec.nhalf; ++j2) {
                double xi2 = hxi * static_cast<double>(j2);
                double best = -1e300;
                std::int32_t arg = -1;
                for (std::size_t rr = 0; rr < nrows; ++rr) {
                    double v = x2[rr] * xi2 + g[rr][c1];
                    if (v > best) {
                        best = v;
                        arg = garg[rr][c1];
                    }
                }
                std::size_t f = c1 * static_cast<std::size_t>(m) + static_cast<std::size_t>(j2 + spec.nhalf);
                out.values[f] = best;
                out.argmax[f] = arg;
            }
        }
        return out;
    }
    // general dimension: brute force per dual node
    VecZ j(n, -spec.nhalf);
    while (true) {
        std::vector<double> xi(n);
        for (std::size_t k = 0; k < n; ++k) xi[k] = hxi * static_cast<double>(j[k]);
        double best = -1e300;
        std::int32_t arg = -1;
        for (std::size_t i = 0; i < ctx.node_count(); ++i) {
            double v = -u.values[i];
            for (std::size_t k = 0; k < n; ++k) v += ctx.node_coords()[i][k] * xi[k];
            if (v > best) {
                best = v;
                arg = static_cast<std::int32_t>(i);
            }
        }
        std::size_t f = out.flat(j);
        out.values[f] = best;
        out.argmax[f] = arg;
        std::size_t k = n;
        while (k > 0) {
            --k;
            if (j[k] < spec.nhalf) {
                ++j[k];
                break;
            }
            j[k] = -spec.nhalf;
            if (k == 0) {
                k = n;
                break;
            }
        }
        if (k == n) break;
    }
    return out;
}

std::vector<double> legendre_back_transform(const DualPotential& phi, const GridContext& ctx) {
    const std::size_t n = ctx.dim();
    const long long m = 2 * phi.spec.nhalf + 1;
    const double hxi = phi.spec.spacing_d();
    std::vector<double> out(ctx.node_count(), -1e300);
    // brute force; used for double-dual diagnostics only
    std::vector<std::vector<double>> coords(phi.values.size(), std::vector<double>(n));
    VecZ j(n, -phi.spec.nhalf);
    std::size_t f = 0;
    while (true) {
        for (std::size_t k = 0; k < n; ++k) coords[f][k] = hxi * static_cast<double>(j[k]);
        ++f;
        std::size_t k = n;
        while (k > 0) {
            --k;
            if (j[k] < phi.spec.nhalf) {
                ++j[k];
                break;
            }
            j[k] = -phi.spec.nhalf;
            if (k == 0) {
                k = n;
                break;
            }
        }
        if (k == n) break;
    }
    (void)m;
    for (std::size_t i = 0; i < ctx.node_count(); ++i) {
        const auto& x = ctx.node_coords()[i];
        double best = -1e300;
        for (std::size_t s = 0; s < phi.values.size(); ++s) {
            double v = -phi.values[s];
            for (std::size_t k = 0; k < n; ++k) v += x[k] * coords[s][k];
            best = std::max(best, v);
        }
        out[i] = best;
    }
    return out;
}

// ---------------------------------------------------------------------------
// box integration of exp(-scale * PL[phi])
// ---------------------------------------------------------------------------

namespace {

// cell simplex corner offsets for the dual box; main-diagonal split in 2-d
// (the slanted normal-fan rays of the bundled polygons point along (1,1))
std::vector<std::vector<VecZ>> dual_cell_splits(std::size_t n) {
    if (n == 1) return {{{0}, {1}}};
    if (n == 2) return {{{0, 0}, {1, 1}, {1, 0}}, {{0, 0}, {1, 1}, {0, 1}}};
    std::vector<std::vector<VecZ>> splits;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    do {
        std::vector<VecZ> simplex{VecZ(n, 0)};
        VecZ cur(n, 0);
        for (auto k : perm) {
            cur[k] = 1;
            simplex.push_back(cur);
        }
        splits.push_back(simplex);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return splits;
}

struct BoxIntegral {
    double value = 0;
};

// deposit != nullptr: accumulate d(box)/d(u_i) = scale * sum over simplex
// corners attaining the max, via the repeated-node divided difference.
double integrate_box(const DualPotential& phi, double scale, std::vector<double>* deposit) {
    const std::size_t n = phi.dim;
    const long long m = 2 * phi.spec.nhalf + 1;
    const double hxi = phi.spec.spacing_d();
    const auto splits = dual_cell_splits(n);
    const double cutoff = scale * phi.min_value() + 45.0;

    double cellvol = 1.0;
    for (std::size_t k = 0; k < n; ++k) cellvol *= hxi;  // h^n; each simplex piece is h^n/n!

    double total = 0;
    VecZ cell(n, -phi.spec.nhalf);
    std::vector<std::size_t> flat(n + 1);
    double f[6];
    double fx[7];
    while (true) {
        for (const auto& split : splits) {
            bool skip_all = true;
            for (std::size_t k = 0; k <= n; ++k) {
                VecZ corner(n);
                for (std::size_t j = 0; j < n; ++j) corner[j] = cell[j] + split[k][j];
                flat[k] = phi.flat(corner);
                f[k] = scale * phi.values[flat[k]];
                if (f[k] < cutoff) skip_all = false;
            }
            if (skip_all) continue;
            for (std::size_t k = 0; k <= n; ++k) fx[k] = -f[k];
            double dd = dd_exp(fx, static_cast<int>(n));
            total += cellvol * dd;  // n! * (h^n/n!) * dd
            if (deposit) {
                for (std::size_t k = 0; k <= n; ++k) {
                    fx[n + 1] = -f[k];
                    double ddk = dd_exp(fx, static_cast<int>(n + 1));
                    std::int32_t arg = phi.argmax[flat[k]];
                    if (arg >= 0) (*deposit)[static_cast<std::size_t>(arg)] += scale * cellvol * ddk;
                }
            }
        }
        std::size_t k = n;
        while (k > 0) {
            --k;
            if (cell[k] < phi.spec.nhalf - 1) {
                ++cell[k];
                break;
            }
            cell[k] = -phi.spec.nhalf;
            if (k == 0) {
                k = n;
                break;
            }
        }
        if (k == n) break;
    }
    (void)m;
    return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// exact support-function integrals over normal cones
// ---------------------------------------------------------------------------

namespace {

struct SimplicialCone {
    VecQ vertex;    // polytope vertex v
    MatQ rays;      // n rays spanning the cone
};

std::vector<SimplicialCone> normal_cone_decomposition(const Polytope& p) {
    const std::size_t n = p.dim();
    std::vector<SimplicialCone> cones;
    for (std::size_t vi = 0; vi < p.vertices().size(); ++vi) {
        VecQ v = p.vertex_q(vi);
        auto active = p.facets_at_vertex(vi);
        MatQ rays;
        for (auto fi : active) {
            VecQ r(n);
            for (std::size_t j = 0; j < n; ++j) r[j] = -Rational(p.facets()[fi].normal[j]);
            rays.push_back(std::move(r));  // outward facet normal
        }
        if (rank(rays) != n)
            throw std::invalid_argument("normal cone at vertex is not full-dimensional");
        if (rays.size() == n) {
            cones.push_back({v, rays});
            continue;
        }
        // non-simple vertex: triangulate the cross-section <v, xi> = 1
        // (rays pair positively with v since the origin is interior)
        MatQ section;
        for (const auto& r : rays) {
            Rational t = dot(v, r);
            if (t <= 0) throw std::invalid_argument("normal cone ray pairs nonpositively");
            section.push_back(scale(r, 1 / t));
        }
        // project out the coordinate with the largest |v_j|
        std::size_t drop = 0;
        Rational best = 0;
        for (std::size_t j = 0; j < n; ++j) {
            Rational m = v[j] < 0 ? Rational(-v[j]) : v[j];
            if (m > best) {
                best = m;
                drop = j;
            }
        }
        MatQ proj;
        for (const auto& s : section) {
            VecQ q;
            for (std::size_t j = 0; j < n; ++j)
                if (j != drop) q.push_back(s[j]);
            proj.push_back(std::move(q));
        }
        ConvexBody cross = ConvexBody::hull_of(proj);
        for (const auto& s : cross.triangulate()) {
            MatQ lifted;
            for (const auto& q : s.vertices) {
                VecQ full(n);
                Rational acc = 1;
                std::size_t t = 0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == drop) continue;
                    full[j] = q[t++];
                    acc -= v[j] * full[j];
                }
                full[drop] = acc / v[drop];
                lifted.push_back(std::move(full));
            }
            cones.push_back({v, lifted});
        }
    }
    return cones;
}

}  // namespace

double cone_integral_total(const Polytope& p, double scale) {
    const std::size_t n = p.dim();
    double total = 0;
    for (const auto& cone : normal_cone_decomposition(p)) {
        MatQ m = cone.rays;
        Rational det = determinant(m);
        if (det < 0) det = -det;
        if (det == 0) continue;
        double prod = 1;
        for (const auto& r : cone.rays) prod *= scale * to_double(dot(cone.vertex, r));
        total += to_double(det) / prod;
    }
    (void)n;
    return total;
}

double cone_integral_box(const Polytope& p, double scale, const DualGridSpec& spec) {
    const std::size_t n = p.dim();
    double total = 0;
    std::vector<HalfspaceQ> box;
    for (std::size_t j = 0; j < n; ++j) {
        VecQ e(n, Rational(0));
        e[j] = 1;
        box.push_back({e, spec.radius});  // xi_j >= -R
        VecQ me(n, Rational(0));
        me[j] = -1;
        box.push_back({me, spec.radius});  // xi_j <= R
    }
    for (const auto& cone : normal_cone_decomposition(p)) {
        // cone membership: rows of rays^{-1} applied to xi must be >= 0
        MatQ m = cone.rays;  // rows are rays; solve r^T t = xi -> use transpose
        // we need constraints c_i . xi >= 0 such that cone = {sum t_i rays_i, t>=0}:
        // c_i = rows of (R^T)^{-1}, R columns = rays. Build R^T = rays as rows.
        std::vector<HalfspaceQ> hs = box;
        // invert m^T: solve for each unit vector
        MatQ mt(n, VecQ(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) mt[i][j] = m[j][i];
        for (std::size_t i = 0; i < n; ++i) {
            VecQ e(n, Rational(0));
            e[i] = 1;
            // row i of inverse of mt: solve mt^T y = e  (mt^T = m)
            auto y = solve_linear(m, e);
            if (!y) throw std::invalid_argument("degenerate cone rays");
            hs.push_back({*y, Rational(0)});  // <y, xi> >= 0
        }
        ConvexBody piece = ConvexBody::from_halfspaces(hs, n);
        for (const auto& s : piece.triangulate()) {
            double f[6];
            for (std::size_t k = 0; k <= n; ++k)
                f[k] = -scale * to_double(dot(cone.vertex, s.vertices[k]));
            total += to_double(s.volume()) * std::tgamma(static_cast<double>(n + 1)) *
                     dd_exp(f, static_cast<int>(n));
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// the nonlinear term
// ---------------------------------------------------------------------------

NonlinearBreakdown nonlinear_term(const DiscretePotential& u, const NonlinearOptions& opts) {
    DualGridSpec spec = opts.spec ? *opts.spec : auto_dual_spec(u, opts.margin, opts.nhalf);
    NonlinearBreakdown out;
    out.spec = spec;
    DualPotential phi = legendre_transform(u, spec);
    out.covers_gradients = phi.covers_gradients;
    double box = integrate_box(phi, opts.scale, nullptr);
    if (opts.richardson) {
        DualGridSpec fine{spec.radius, 2 * spec.nhalf};
        DualPotential phi2 = legendre_transform(u, fine);
        double box2 = integrate_box(phi2, opts.scale, nullptr);
        box = (4.0 * box2 - box) / 3.0;
    }
    double tail = cone_integral_total(u.ctx->polytope(), opts.scale) -
                  cone_integral_box(u.ctx->polytope(), opts.scale, spec);
    out.box = box;
    out.tail = tail;
    out.value = -std::log(box + tail);
    return out;
}

namespace {

// Sutherland-Hodgman clip of a convex polygon against <d, xi> >= c.
void clip_polygon(std::vector<std::array<double, 2>>& poly, double dx, double dy, double c) {
    if (poly.empty()) return;
    std::vector<std::array<double, 2>> out;
    out.reserve(poly.size() + 1);
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % n];
        double da = dx * a[0] + dy * a[1] - c;
        double db = dx * b[0] + dy * b[1] - c;
        if (da >= 0) out.push_back(a);
        if ((da > 0 && db < 0) || (da < 0 && db > 0)) {
            double t = da / (da - db);
            out.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
        }
    }
    poly = std::move(out);
}

}  // namespace

ExactNonlinear nonlinear_term_exact(const DiscretePotential& u, double scale,
                                    const Rational& radius) {
    const auto& ctx = *u.ctx;
    const std::size_t n = ctx.dim();
    const double r = to_double(radius);
    ExactNonlinear out;
    out.radius = radius;
    out.mass.assign(ctx.node_count(), 0.0);

    if (n == 1) {
        // active slope intervals come from the lower hull of (x_i, u_i)
        std::vector<std::size_t> hull;
        const auto& c = ctx.node_coords();
        for (std::size_t i = 0; i < ctx.node_count(); ++i) {
            while (hull.size() >= 2) {
                std::size_t a = hull[hull.size() - 2], b = hull[hull.size() - 1];
                if ((u.values[b] - u.values[a]) * (c[i][0] - c[a][0]) >=
                    (u.values[i] - u.values[a]) * (c[b][0] - c[a][0]))
                    hull.pop_back();
                else
                    break;
            }
            hull.push_back(i);
        }
        for (std::size_t k = 0; k < hull.size(); ++k) {
            std::size_t i = hull[k];
            double lo = -r, hi = r;
            if (k > 0) {
                std::size_t p = hull[k - 1];
                lo = std::max(lo, (u.values[i] - u.values[p]) / (c[i][0] - c[p][0]));
            }
            if (k + 1 < hull.size()) {
                std::size_t q = hull[k + 1];
                hi = std::min(hi, (u.values[q] - u.values[i]) / (c[q][0] - c[i][0]));
            }
            if (hi <= lo) continue;
            double f0 = scale * (c[i][0] * lo - u.values[i]);
            double f1 = scale * (c[i][0] * hi - u.values[i]);
            double fx[2] = {-f0, -f1};
            double piece = (hi - lo) * dd_exp(fx, 1);
            out.box += piece;
            out.mass[i] += scale * piece;
        }
    } else if (n == 2) {
        const auto& c = ctx.node_coords();
        for (std::size_t i = 0; i < ctx.node_count(); ++i) {
            std::vector<std::array<double, 2>> poly{{-r, -r}, {r, -r}, {r, r}, {-r, r}};
            for (std::size_t j = 0; j < ctx.node_count() && !poly.empty(); ++j) {
                if (j == i) continue;
                clip_polygon(poly, c[i][0] - c[j][0], c[i][1] - c[j][1],
                             u.values[i] - u.values[j]);
            }
            if (poly.size() < 3) continue;
            double cell = 0;
            for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
                const auto& a = poly[0];
                const auto& b = poly[k];
                const auto& d = poly[k + 1];
                double area2 = (b[0] - a[0]) * (d[1] - a[1]) - (d[0] - a[0]) * (b[1] - a[1]);
                if (area2 < 0) area2 = -area2;
                double fx[3] = {-scale * (c[i][0] * a[0] + c[i][1] * a[1] - u.values[i]),
                                -scale * (c[i][0] * b[0] + c[i][1] * b[1] - u.values[i]),
                                -scale * (c[i][0] * d[0] + c[i][1] * d[1] - u.values[i])};
                cell += area2 * dd_exp(fx, 2);
            }
            out.box += cell;
            out.mass[i] += scale * cell;
        }
    } else {
        throw std::invalid_argument("nonlinear_term_exact supports dimensions 1 and 2");
    }

    DualGridSpec spec{radius, 1};
    out.tail = cone_integral_total(ctx.polytope(), scale) -
               cone_integral_box(ctx.polytope(), scale, spec);
    double total = out.box + out.tail;
    out.value = -std::log(total);
    for (auto& m : out.mass) m /= total;
    return out;
}

std::vector<double> dual_mass_deposit(const DiscretePotential& u, const NonlinearOptions& opts,
                                      double* total_integral) {
    DualGridSpec spec = opts.spec ? *opts.spec : auto_dual_spec(u, opts.margin, opts.nhalf);
    DualPotential phi = legendre_transform(u, spec);
    std::vector<double> deposit(u.ctx->node_count(), 0.0);
    double box = integrate_box(phi, opts.scale, &deposit);
    double tail = cone_integral_total(u.ctx->polytope(), opts.scale) -
                  cone_integral_box(u.ctx->polytope(), opts.scale, spec);
    double total = box + tail;
    for (auto& d : deposit) d /= total;
    if (total_integral) *total_integral = total;
    return deposit;
}

}  // namespace toric
