#include "toricding/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace toric {

namespace {

long long ceil_div(const Rational& q) {
    BigInt n = numerator(q), d = denominator(q);
    BigInt c = n / d;
    if (c * d < n) ++c;
    return c.convert_to<long long>();
}

long long floor_div(const Rational& q) {
    BigInt n = numerator(q), d = denominator(q);
    BigInt c = n / d;
    if (c * d > n) --c;
    return c.convert_to<long long>();
}

}  // namespace

long long GridContext::pack(const VecZ& idx) const {
    long long key = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
        long long span = spec_.hi[j] - spec_.lo[j] + 1;
        key = key * span + (idx[j] - spec_.lo[j]);
    }
    return key;
}

GridContext::GridContext(Polytope p, const Rational& h) : poly_(std::move(p)) {
    if (h <= 0) throw std::invalid_argument("grid spacing must be positive");
    const std::size_t n = poly_.dim();
    spec_.h = h;
    spec_.lo.resize(n);
    spec_.hi.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        long long lo = poly_.vertices()[0][j], hi = lo;
        for (const auto& v : poly_.vertices()) {
            lo = std::min(lo, v[j]);
            hi = std::max(hi, v[j]);
        }
        spec_.lo[j] = ceil_div(Rational(lo) / h);
        spec_.hi[j] = floor_div(Rational(hi) / h);
    }

    // nodes: grid points inside the closed polytope, lex order over indices
    VecZ idx = spec_.lo;
    while (true) {
        VecQ x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = Rational(idx[j]) * h;
        if (poly_.contains(x)) {
            index_[pack(idx)] = nodes_.size();
            nodes_.push_back(idx);
            coords_.push_back(to_double(x));
        }
        std::size_t j = n;
        while (j > 0) {
            --j;
            if (idx[j] < spec_.hi[j]) {
                ++idx[j];
                break;
            }
            idx[j] = spec_.lo[j];
            if (j == 0) {
                j = n;
                break;
            }
        }
        if (j == n) break;
    }
    if (nodes_.empty()) throw std::invalid_argument("no grid nodes inside polytope");

    // simplex splits of the unit cell, as corner offsets
    std::vector<std::vector<VecZ>> splits;
    if (n == 1) {
        splits = {{{0}, {1}}};
    } else if (n == 2) {
        // anti-diagonal split matches the slanted facets of reflexive polygons
        splits = {{{0, 0}, {1, 0}, {0, 1}}, {{1, 0}, {1, 1}, {0, 1}}};
    } else {
        // Kuhn decomposition: one simplex per coordinate permutation
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            std::vector<VecZ> simplex{VecZ(n, 0)};
            VecZ cur(n, 0);
            for (auto k : perm) {
                cur[k] = 1;
                simplex.push_back(cur);
            }
            splits.push_back(simplex);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    bool any_cell = true;
    for (std::size_t j = 0; j < n; ++j)
        if (spec_.hi[j] <= spec_.lo[j]) any_cell = false;
    VecZ cell = spec_.lo;
    while (any_cell) {
        for (const auto& split : splits) {
            CoveredSimplex cs;
            bool ok = true;
            MatQ verts;
            for (const auto& off : split) {
                VecZ corner(n);
                for (std::size_t j = 0; j < n; ++j) corner[j] = cell[j] + off[j];
                auto node = node_at(corner);
                if (!node) {
                    ok = false;
                    break;
                }
                cs.nodes.push_back(*node);
                VecQ x(n);
                for (std::size_t j = 0; j < n; ++j) x[j] = Rational(corner[j]) * h;
                verts.push_back(std::move(x));
            }
            if (!ok) continue;
            cs.geometry = SimplexQ{std::move(verts)};
            covered_.push_back(std::move(cs));
        }
        std::size_t j = n;
        while (j > 0) {
            --j;
            if (cell[j] < spec_.hi[j] - 1) {
                ++cell[j];
                break;
            }
            cell[j] = spec_.lo[j];
            if (j == 0) {
                j = n;
                break;
            }
        }
        if (j == n) break;
    }

    // exact volume weights
    w_volume_.assign(nodes_.size(), Rational(0));
    Rational np1 = static_cast<int>(n + 1);
    for (const auto& cs : covered_) {
        Rational v = cs.geometry.volume();
        for (auto id : cs.nodes) w_volume_[id] += v / np1;
    }
    volume_ = moments(poly_).volume;
    Rational wsum = 0;
    for (const auto& w : w_volume_) wsum += w;
    exact_cover_ = (wsum == volume_);
    w_volume_d_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) w_volume_d_[i] = to_double(w_volume_[i]);
}

VecQ GridContext::node_coord_q(std::size_t i) const {
    VecQ x(dim());
    for (std::size_t j = 0; j < dim(); ++j) x[j] = Rational(nodes_[i][j]) * spec_.h;
    return x;
}

std::optional<std::size_t> GridContext::node_at(const VecZ& idx) const {
    for (std::size_t j = 0; j < idx.size(); ++j)
        if (idx[j] < spec_.lo[j] || idx[j] > spec_.hi[j]) return std::nullopt;
    auto it = index_.find(pack(idx));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t GridContext::origin_node() const {
    auto node = node_at(VecZ(dim(), 0));
    if (!node) throw std::invalid_argument("origin is not a grid node inside the polytope");
    return *node;
}

VecQ GridContext::affine_weights(const Rational& b0, const VecQ& b) const {
    const std::size_t n = dim();
    VecQ w(nodes_.size(), Rational(0));
    Rational np1 = static_cast<int>(n + 1);
    Rational denom = np1 * Rational(static_cast<int>(n + 2));
    for (const auto& cs : covered_) {
        Rational vol = cs.geometry.volume();
        VecQ s(n, Rational(0));
        for (const auto& p : cs.geometry.vertices)
            for (std::size_t j = 0; j < n; ++j) s[j] += p[j];
        for (std::size_t k = 0; k < cs.nodes.size(); ++k) {
            // integral of lambda_k * (b0 + <b,x>) over the simplex
            Rational acc = b0 * vol / np1;
            for (std::size_t j = 0; j < n; ++j)
                acc += b[j] * vol * (s[j] + cs.geometry.vertices[k][j]) / denom;
            w[cs.nodes[k]] += acc;
        }
    }
    return w;
}

double GridContext::max_vertex_norm() const {
    double best = 0;
    for (const auto& v : poly_.vertices()) {
        double s = 0;
        for (auto c : v) s += static_cast<double>(c) * static_cast<double>(c);
        best = std::max(best, std::sqrt(s));
    }
    return best;
}

double DiscretePotential::at_origin() const { return values[ctx->origin_node()]; }

double DiscretePotential::lipschitz_bound() const {
    double h = to_double(ctx->spec().h);
    double best = 0;
    const auto& nodes = ctx->node_indices();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = 0; j < ctx->dim(); ++j) {
            VecZ nb = nodes[i];
            ++nb[j];
            if (auto other = ctx->node_at(nb))
                best = std::max(best, std::abs(values[*other] - values[i]) / h);
        }
    }
    return best;
}

DiscretePotential DiscretePotential::scaled(double s) const {
    DiscretePotential out = *this;
    for (auto& v : out.values) v *= s;
    out.normalized = normalized && s >= 0;
    return out;
}

DiscretePotential DiscretePotential::plus(const DiscretePotential& other, double s) const {
    if (other.ctx != ctx) throw std::invalid_argument("potentials on different grids");
    DiscretePotential out = *this;
    for (std::size_t i = 0; i < values.size(); ++i) out.values[i] += s * other.values[i];
    out.normalized = false;
    return out;
}

DiscretePotential DiscretePotential::zero(std::shared_ptr<const GridContext> ctx) {
    DiscretePotential u;
    u.values.assign(ctx->node_count(), 0.0);
    u.ctx = std::move(ctx);
    u.normalized = true;
    return u;
}

DiscretePotential DiscretePotential::from_function(
    std::shared_ptr<const GridContext> ctx,
    const std::function<double(const std::vector<double>&)>& f) {
    DiscretePotential u;
    u.values.resize(ctx->node_count());
    for (std::size_t i = 0; i < ctx->node_count(); ++i) u.values[i] = f(ctx->node_coords()[i]);
    u.ctx = std::move(ctx);
    return u;
}

DiscretePotential DiscretePotential::from_pl(std::shared_ptr<const GridContext> ctx,
                                             const PiecewiseLinearConvex& pl) {
    DiscretePotential u;
    u.values.resize(ctx->node_count());
    for (std::size_t i = 0; i < ctx->node_count(); ++i)
        u.values[i] = to_double(pl.eval(ctx->node_coord_q(i)));
    u.ctx = std::move(ctx);
    return u;
}

double integrate_grid(const DiscretePotential& u) {
    const auto& w = u.ctx->volume_weights_d();
    double s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * u.values[i];
    return s;
}

namespace {

// exact 1-d lower hull of (x_i, v_i); nodes are consecutive on the axis
std::vector<double> envelope_1d(const GridContext& ctx, const std::vector<double>& v) {
    const std::size_t n = ctx.node_count();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = ctx.node_coords()[i][0];
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < n; ++i) {
        while (hull.size() >= 2) {
            std::size_t a = hull[hull.size() - 2], b = hull[hull.size() - 1];
            if ((v[b] - v[a]) * (x[i] - x[a]) >= (v[i] - v[a]) * (x[b] - x[a]))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(i);
    }
    std::vector<double> env(n);
    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (seg + 1 < hull.size() && x[hull[seg + 1]] <= x[i]) ++seg;
        if (seg + 1 == hull.size()) {
            env[i] = v[hull[seg]];
        } else {
            std::size_t a = hull[seg], b = hull[seg + 1];
            double t = (x[i] - x[a]) / (x[b] - x[a]);
            env[i] = v[a] + t * (v[b] - v[a]);
        }
    }
    return env;
}

}  // namespace

std::vector<double> lower_convex_envelope(const GridContext& ctx, const std::vector<double>& values,
                                          int slopes_per_axis, double span) {
    if (ctx.dim() == 1) return envelope_1d(ctx, values);
    const std::size_t n = ctx.dim();
    if (span <= 0) {
        double h = to_double(ctx.spec().h);
        double lip = 0;
        for (std::size_t i = 0; i < ctx.node_count(); ++i)
            for (std::size_t j = 0; j < n; ++j) {
                VecZ nb = ctx.node_indices()[i];
                ++nb[j];
                if (auto other = ctx.node_at(nb))
                    lip = std::max(lip, std::abs(values[*other] - values[i]) / h);
            }
        span = lip + 1.0;
    }
    const int m = std::max(slopes_per_axis, 3);
    std::vector<std::vector<double>> slopes;
    std::vector<int> s_idx(n, 0);
    while (true) {
        std::vector<double> g(n);
        for (std::size_t j = 0; j < n; ++j) g[j] = -span + 2 * span * s_idx[j] / (m - 1);
        slopes.push_back(std::move(g));
        std::size_t j = 0;
        for (; j < n; ++j) {
            if (++s_idx[j] < m) break;
            s_idx[j] = 0;
        }
        if (j == n) break;
    }
    std::vector<double> phi(slopes.size(), -1e300);
    for (std::size_t s = 0; s < slopes.size(); ++s) {
        for (std::size_t i = 0; i < ctx.node_count(); ++i) {
            double dot = 0;
            for (std::size_t j = 0; j < n; ++j) dot += slopes[s][j] * ctx.node_coords()[i][j];
            phi[s] = std::max(phi[s], dot - values[i]);
        }
    }
    std::vector<double> env(ctx.node_count(), -1e300);
    for (std::size_t i = 0; i < ctx.node_count(); ++i) {
        for (std::size_t s = 0; s < slopes.size(); ++s) {
            double dot = 0;
            for (std::size_t j = 0; j < n; ++j) dot += slopes[s][j] * ctx.node_coords()[i][j];
            env[i] = std::max(env[i], dot - phi[s]);
        }
    }
    return env;
}

bool is_discretely_convex(const GridContext& ctx, const std::vector<double>& values, double tol) {
    const std::size_t n = ctx.dim();
    std::vector<VecZ> dirs;
    for (std::size_t j = 0; j < n; ++j) {
        VecZ d(n, 0);
        d[j] = 1;
        dirs.push_back(d);
    }
    if (n == 2) {
        dirs.push_back({1, 1});
        dirs.push_back({1, -1});
    }
    for (const auto& d : dirs) {
        for (std::size_t i = 0; i < ctx.node_count(); ++i) {
            VecZ fwd = ctx.node_indices()[i], bwd = ctx.node_indices()[i];
            for (std::size_t j = 0; j < n; ++j) {
                fwd[j] += d[j];
                bwd[j] -= d[j];
            }
            auto f = ctx.node_at(fwd), b = ctx.node_at(bwd);
            if (f && b && values[*f] + values[*b] - 2 * values[i] < -tol) return false;
        }
    }
    return true;
}

namespace {

// Seidel-style exact LP: minimize c.z over {A z <= b} within [-bound, bound]^d.
// Deterministically shuffled; throws on infeasibility.
class TinyLp {
  public:
    TinyLp(MatQ a, VecQ b, VecQ c, Rational bound)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), bound_(bound) {}

    VecQ solve() {
        std::vector<std::size_t> order(a_.size());
        std::iota(order.begin(), order.end(), 0);
        std::mt19937_64 rng(0x5eede1u);
        std::shuffle(order.begin(), order.end(), rng);
        MatQ a;
        VecQ b;
        for (auto i : order) {
            a.push_back(a_[i]);
            b.push_back(b_[i]);
        }
        return solve_rec(a, b, c_);
    }

  private:
    MatQ a_;
    VecQ b_;
    VecQ c_;
    Rational bound_;

    VecQ solve_rec(const MatQ& a, const VecQ& b, const VecQ& c) {
        const std::size_t d = c.size();
        if (d == 1) {
            Rational lo = -bound_, hi = bound_;
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i][0] > 0)
                    hi = std::min(hi, Rational(b[i] / a[i][0]));
                else if (a[i][0] < 0)
                    lo = std::max(lo, Rational(b[i] / a[i][0]));
                else if (b[i] < 0)
                    throw std::runtime_error("lp infeasible");
            }
            if (lo > hi) throw std::runtime_error("lp infeasible");
            return {c[0] >= 0 ? lo : hi};
        }
        VecQ z(d);
        for (std::size_t j = 0; j < d; ++j) z[j] = c[j] >= 0 ? -bound_ : bound_;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (dot(a[i], z) <= b[i]) continue;
            // optimum is tight at constraint i: eliminate the variable with
            // the largest pivot
            std::size_t k = d;
            Rational best = 0;
            for (std::size_t j = 0; j < d; ++j) {
                Rational m = a[i][j] < 0 ? Rational(-a[i][j]) : a[i][j];
                if (m > best) {
                    best = m;
                    k = j;
                }
            }
            if (k == d) throw std::runtime_error("lp infeasible");
            auto reduce_row = [&](const VecQ& row, const Rational& rhs) {
                VecQ r(d - 1);
                Rational f = row[k] / a[i][k];
                std::size_t t = 0;
                for (std::size_t j = 0; j < d; ++j) {
                    if (j == k) continue;
                    r[t++] = row[j] - f * a[i][j];
                }
                return std::make_pair(r, Rational(rhs - f * b[i]));
            };
            MatQ ra;
            VecQ rb;
            for (std::size_t t = 0; t < i; ++t) {
                auto [row, rhs] = reduce_row(a[t], b[t]);
                ra.push_back(row);
                rb.push_back(rhs);
            }
            {  // box bounds of the eliminated variable
                VecQ row(d, Rational(0));
                row[k] = 1;
                auto [r1, h1] = reduce_row(row, bound_);
                ra.push_back(r1);
                rb.push_back(h1);
                row[k] = -1;
                auto [r2, h2] = reduce_row(row, bound_);
                ra.push_back(r2);
                rb.push_back(h2);
            }
            VecQ rc(d - 1);
            {
                Rational f = c[k] / a[i][k];
                std::size_t t = 0;
                for (std::size_t j = 0; j < d; ++j) {
                    if (j == k) continue;
                    rc[t++] = c[j] - f * a[i][j];
                }
            }
            VecQ zr = solve_rec(ra, rb, rc);
            VecQ lifted(d);
            std::size_t t = 0;
            Rational acc = b[i];
            for (std::size_t j = 0; j < d; ++j) {
                if (j == k) continue;
                lifted[j] = zr[t++];
                acc -= a[i][j] * lifted[j];
            }
            lifted[k] = acc / a[i][k];
            z = std::move(lifted);
        }
        return z;
    }
};

}  // namespace

DiscretePotential normalize(const DiscretePotential& u, double tol) {
    const auto& ctx = *u.ctx;
    const std::size_t n = ctx.dim();
    const std::size_t o = ctx.origin_node();
    const double u0 = u.values[o];

    // minimize t subject to <x_i, g> - t <= u_i - u0: the optimal t is the
    // smallest uniform violation over supporting slopes at the origin
    MatQ a;
    VecQ b;
    double lip = u.lipschitz_bound();
    Rational bound = Rational(static_cast<long long>(std::ceil((lip + 2) * 16)), 16);
    Rational tbound = 1;
    for (std::size_t i = 0; i < ctx.node_count(); ++i) {
        if (i == o) continue;
        VecQ row = ctx.node_coord_q(i);
        row.push_back(Rational(-1));
        a.push_back(std::move(row));
        Rational d0{u.values[i] - u0};  // doubles are exact rationals
        b.push_back(d0);
        Rational mag = d0 < 0 ? Rational(-d0) : d0;
        if (mag + 1 > tbound) tbound = mag + 1;
    }
    VecQ c(n + 1, Rational(0));
    c[n] = 1;
    if (tbound > bound) bound = tbound;
    VecQ z = TinyLp(std::move(a), std::move(b), std::move(c), bound).solve();
    double t = to_double(z[n]);
    if (t > tol)
        throw std::invalid_argument("normalize: no supporting slope at the origin (gap " +
                                    std::to_string(t) + ")");

    DiscretePotential out = u;
    std::vector<double> g(n);
    for (std::size_t j = 0; j < n; ++j) g[j] = to_double(z[j]);
    for (std::size_t i = 0; i < ctx.node_count(); ++i) {
        double dot = 0;
        for (std::size_t j = 0; j < n; ++j) dot += g[j] * ctx.node_coords()[i][j];
        out.values[i] = u.values[i] - u0 - dot;
    }
    out.values[o] = 0.0;
    out.normalized = true;
    return out;
}

}  // namespace toric
