#include <doctest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "toricding/dual.hpp"
#include "toricding/guillemin.hpp"

using namespace toric;

namespace {

std::shared_ptr<GridContext> make_ctx(const char* text, const char* h, bool raw = false) {
    return std::make_shared<GridContext>(parse_polytope(text, raw), parse_rational(h));
}

const char* kSegment = "1 2\n-1\n1\n";
const char* kP2 = "2 3\n2 -1\n-1 2\n-1 -1\n";

DualGridSpec spec_of(const char* r, long long nhalf) { return {parse_rational(r), nhalf}; }

}  // namespace

TEST_CASE("divided differences of exp match closed forms") {
    double x1[2] = {0.0, 1.0};
    CHECK(dd_exp(x1, 1) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
    double x2[3] = {0.0, 0.0, 0.0};
    CHECK(dd_exp(x2, 2) == doctest::Approx(0.5).epsilon(1e-14));
    // dd^2 at {0,1,2} = (e^2 - 2e + 1)/2
    double x3[3] = {0.0, 1.0, 2.0};
    CHECK(dd_exp(x3, 2) ==
          doctest::Approx((std::exp(2.0) - 2 * std::exp(1.0) + 1.0) / 2).epsilon(1e-13));
    // repeated nodes: dd(a,a) = exp(a)
    double x4[2] = {0.7, 0.7};
    CHECK(dd_exp(x4, 1) == doctest::Approx(std::exp(0.7)).epsilon(1e-14));
    // stability across the series/ratio switch: dd^2 against the midpoint
    // Hermite-Genocchi bound exp(min) <= 2*dd^2 <= exp(max)
    for (double d : {1e-12, 1e-8, 1e-5, 1e-3, 0.5, 0.9999, 1.0001, 2.0, 10.0}) {
        double y[3] = {-0.3, -0.3 + d / 2, -0.3 + d};
        double v = dd_exp(y, 2);
        CHECK(2 * v >= std::exp(y[0]) * (1 - 1e-12));
        CHECK(2 * v <= std::exp(y[2]) * (1 + 1e-12));
    }
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(-3, 3);
    for (int it = 0; it < 200; ++it) {
        double y[5];
        for (auto& t : y) t = unif(rng);
        double a = dd_exp(y, 3);
        // Opitz path for k=4 with a repeated last node equals dd^4; instead
        // verify the recurrence dd3 = (dd2(tail) - dd2(head)) / (y3 - y0)
        double s[4] = {y[0], y[1], y[2], y[3]};
        std::sort(s, s + 4);
        if (s[3] - s[0] > 1e-6) {
            double h0[3] = {s[0], s[1], s[2]}, h1[3] = {s[1], s[2], s[3]};
            double ref = (dd_exp(h1, 2) - dd_exp(h0, 2)) / (s[3] - s[0]);
            CHECK(a == doctest::Approx(ref).epsilon(1e-9));
        }
    }
}

TEST_CASE("legendre transform of zero is the support function") {
    auto ctx = make_ctx(kSegment, "1/8");
    auto u = DiscretePotential::zero(ctx);
    auto phi = legendre_transform(u, spec_of("4", 64));
    // phi(xi) = |xi| on the dual nodes
    double h = phi.spec.spacing_d();
    for (long long j = -64; j <= 64; ++j) {
        double xi = h * static_cast<double>(j);
        CHECK(phi.values[static_cast<std::size_t>(j + 64)] ==
              doctest::Approx(std::abs(xi)).epsilon(1e-14));
    }
    CHECK(phi.min_value() == 0.0);
}

TEST_CASE("inf phi equals -u(0) and the support bound holds") {
    auto ctx = make_ctx(kP2, "1/4");
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(-2, 2);
    const auto& p = ctx->polytope();
    for (int it = 0; it < 20; ++it) {
        // random normalized PL potential
        PiecewiseLinearConvex pl;
        pl.pieces.push_back({Rational(0), VecQ(2, Rational(0))});
        for (int k = 0; k < 3; ++k) {
            PiecewiseLinearConvex::Piece piece;
            piece.c0 = Rational(-std::abs(static_cast<long long>(unif(rng) * 32)), 32);
            piece.c = {Rational(static_cast<long long>(unif(rng) * 32), 32),
                       Rational(static_cast<long long>(unif(rng) * 32), 32)};
            pl.pieces.push_back(piece);
        }
        auto u = DiscretePotential::from_pl(ctx, pl);
        u.normalized = true;
        auto phi = legendre_transform(u, spec_of("8", 32));
        CHECK(std::abs(phi.min_value() - 0.0) <= 1e-9);  // inf phi = -u(0) = 0
        // phi <= support function at every dual node
        VecZ j(2, -32);
        while (true) {
            auto xi = phi.coord(j);
            VecQ xiq{Rational(static_cast<long long>(j[0])) * phi.spec.radius / 32,
                     Rational(static_cast<long long>(j[1])) * phi.spec.radius / 32};
            double support = to_double(p.body().support(xiq));
            CHECK(phi.values[phi.flat(j)] <= support + 1e-9);
            if (j[1] < 32) {
                ++j[1];
            } else {
                j[1] = -32;
                if (++j[0] > 32) break;
            }
        }
    }
}

TEST_CASE("double dual recovers the envelope within Lipschitz tolerance") {
    auto ctx = make_ctx(kSegment, "1/16");
    auto u = DiscretePotential::from_function(ctx, [](const auto& x) { return x[0] * x[0] / 2; });
    auto phi = legendre_transform(u, spec_of("4", 256));
    auto back = legendre_back_transform(phi, *ctx);
    double h = to_double(ctx->spec().h);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        CHECK(back[i] <= u.values[i] + 1e-12);
        CHECK(back[i] >= u.values[i] - 2 * h);
    }
}

TEST_CASE("classical dual pair: half x^2 maps to half xi^2") {
    auto ctx = make_ctx(kSegment, "1/64");
    auto u = DiscretePotential::from_function(ctx, [](const auto& x) { return x[0] * x[0] / 2; });
    auto phi = legendre_transform(u, spec_of("1/2", 64));
    double h = phi.spec.spacing_d();
    for (long long j = -64; j <= 64; ++j) {
        double xi = h * static_cast<double>(j);
        CHECK(phi.values[static_cast<std::size_t>(j + 64)] ==
              doctest::Approx(xi * xi / 2).epsilon(0).scale(1).epsilon(0.02 / 64));
    }
}

TEST_CASE("cone integral: closed forms for the segment, square, P2") {
    auto seg = parse_polytope(kSegment);
    CHECK(cone_integral_total(seg, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(cone_integral_total(seg, 0.5) == doctest::Approx(4.0).epsilon(1e-14));
    auto square = Polytope::from_vertices({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
    CHECK(cone_integral_total(square, 1.0) == doctest::Approx(4.0).epsilon(1e-14));
    auto p2 = parse_polytope(kP2);
    CHECK(cone_integral_total(p2, 1.0) == doctest::Approx(3.0).epsilon(1e-14));
    // scale homogeneity: integral(s) = s^-n integral(1)
    CHECK(cone_integral_total(p2, 0.25) == doctest::Approx(16.0 * 3.0).epsilon(1e-13));
}

TEST_CASE("box + complement equals the total cone integral") {
    auto p2 = parse_polytope(kP2);
    DualGridSpec spec = spec_of("6", 48);
    double box = cone_integral_box(p2, 1.0, spec);
    double total = cone_integral_total(p2, 1.0);
    CHECK(box < total);
    // complement mass is positive and decays with the radius
    double box2 = cone_integral_box(p2, 1.0, spec_of("12", 48));
    CHECK(total - box2 < total - box);
    CHECK(total - box2 > 0);
}

TEST_CASE("nonlinear term of zero potential: -log 2 on the segment") {
    auto ctx = make_ctx(kSegment, "1/8");
    auto u = DiscretePotential::zero(ctx);
    NonlinearOptions opts;
    opts.nhalf = 256;
    auto nl = nonlinear_term(u, opts);
    CHECK(nl.value == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("nonlinear term of zero potential matches the cone oracle on P2") {
    auto ctx = make_ctx(kP2, "1/4");
    auto u = DiscretePotential::zero(ctx);
    NonlinearOptions opts;
    opts.nhalf = 96;
    auto nl = nonlinear_term(u, opts);
    // independent oracle: sum over vertices of |det rays| / prod <v, ray>
    double oracle = 0;
    for (auto [v, rays] : std::vector<std::pair<std::vector<double>, std::array<std::array<double, 2>, 2>>>{
             {{2, -1}, {{{0, -1}, {1, 1}}}},
             {{-1, 2}, {{{-1, 0}, {1, 1}}}},
             {{-1, -1}, {{{-1, 0}, {0, -1}}}}}) {
        double det = rays[0][0] * rays[1][1] - rays[0][1] * rays[1][0];
        double p1 = v[0] * rays[0][0] + v[1] * rays[0][1];
        double p2v = v[0] * rays[1][0] + v[1] * rays[1][1];
        oracle += std::abs(det) / (p1 * p2v);
    }
    CHECK(oracle == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(nl.value == doctest::Approx(-std::log(oracle)).epsilon(1e-9));
}

TEST_CASE("epsilon-scaling identity with matched dual grids") {
    for (auto [text, h] : {std::pair{kSegment, "1/8"}, {kP2, "1/4"}}) {
        auto ctx = make_ctx(text, h);
        const std::size_t n = ctx->dim();
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> unif(-2, 2);
        for (int it = 0; it < 6; ++it) {
            PiecewiseLinearConvex pl;
            pl.pieces.push_back({Rational(0), VecQ(n, Rational(0))});
            for (int k = 0; k < 3; ++k) {
                PiecewiseLinearConvex::Piece piece;
                piece.c0 = Rational(-std::abs(static_cast<long long>(unif(rng) * 32)), 32);
                piece.c.resize(n);
                for (auto& c : piece.c) c = Rational(static_cast<long long>(unif(rng) * 32), 32);
                pl.pieces.push_back(piece);
            }
            auto u = DiscretePotential::from_pl(ctx, pl);
            u.normalized = true;
            const long long nhalf = n == 1 ? 512 : 64;
            Rational r_base = auto_dual_spec(u, 24.0, nhalf).radius;
            for (long long inv_eps : {1, 2, 4}) {
                double eps = 1.0 / static_cast<double>(inv_eps);
                // direct route: the nonlinear term of eps*u on box R
                NonlinearOptions direct;
                direct.spec = DualGridSpec{r_base, nhalf};
                double lhs = nonlinear_term(u.scaled(eps), direct).value;
                // dual route: -log integral exp(-eps*phi_u) over box R/eps,
                // shifted by n log eps
                NonlinearOptions dual_route;
                dual_route.spec = DualGridSpec{r_base * inv_eps, nhalf};
                dual_route.scale = eps;
                double rhs = nonlinear_term(u, dual_route).value -
                             static_cast<double>(n) * std::log(eps);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
            }
        }
    }
}
