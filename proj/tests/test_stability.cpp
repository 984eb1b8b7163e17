#include <doctest.h>

#include <array>
#include <random>

#include "support/oracles.hpp"
#include "toricding/stability.hpp"

using namespace toric;

namespace {

Polytope interval() { return parse_polytope("1 2\n-1\n1\n"); }
Polytope raw_interval() { return parse_polytope("1 2\n-1\n2\n", true); }
Polytope p2() { return Polytope::from_vertices({{2, -1}, {-1, 2}, {-1, -1}}); }
Polytope bl1p2() { return Polytope::from_vertices({{-1, 0}, {0, -1}, {2, -1}, {-1, 2}}); }

PiecewiseLinearConvex pl(std::vector<PiecewiseLinearConvex::Piece> pieces) {
    return PiecewiseLinearConvex{std::move(pieces)};
}

}  // namespace

TEST_CASE("l on the symmetric segment is the constant 1/2") {
    AffineDensity l = solve_l(moments(interval()));
    CHECK(l.a0 == Rational(1) / 2);
    CHECK(l.a[0] == 0);
}

TEST_CASE("l on the raw interval [-1,2] matches the hand-solved system") {
    // oracle: solve the 2x2 system (vol=3, m=3/2, M=3) by hand:
    // 3 a0 + (3/2) a = 1, (3/2) a0 + 3 a = 0  =>  a = -a0/2, a0 = 4/9.
    AffineDensity l = solve_l(moments(raw_interval()));
    CHECK(l.a0 == Rational(4) / 9);
    CHECK(l.a[0] == Rational(-2) / 9);
}

TEST_CASE("P2 density is constant 2/9") {
    AffineDensity l = solve_l(moments(p2()));
    CHECK(l.a0 == Rational(2) / 9);
    CHECK(l.a[0] == 0);
    CHECK(l.a[1] == 0);
}

TEST_CASE("alpha = 0 for zero barycenter, classified uniform stable") {
    Polytope p = interval();
    auto rep = alpha_invariant(p, solve_l(moments(p)), "p1");
    CHECK(rep.alpha == 0);
    CHECK(rep.cls == StabilityClass::UniformStable);
    REQUIRE(rep.lambda_bound.has_value());
    CHECK(*rep.lambda_bound == Rational(1) / 2);
}

TEST_CASE("raw interval sits exactly on the alpha = 1 boundary") {
    Polytope p = raw_interval();
    auto rep = alpha_invariant(p, solve_l(moments(p)), "raw");
    CHECK(rep.alpha == 1);
    CHECK(rep.cls == StabilityClass::SemistableBoundary);
    CHECK_FALSE(rep.lambda_bound.has_value());
    // vertex values {-1, 1}
    std::vector<Rational> vals;
    for (auto& [v, val] : rep.vertex_values) vals.push_back(val);
    std::sort(vals.begin(), vals.end());
    CHECK(vals == std::vector<Rational>{Rational(-1), Rational(1)});
}

TEST_CASE("anticanonical Bl1P2 is strictly inside the stable range") {
    Polytope p = bl1p2();
    auto rep = alpha_invariant(p, solve_l(moments(p)), "bl1");
    CHECK(rep.alpha == Rational(5) / 11);
    CHECK(rep.cls == StabilityClass::UniformStable);
}

TEST_CASE("alpha is invariant under unimodular maps fixing the origin") {
    Polytope p = bl1p2();
    Rational a0 = alpha_invariant(p, solve_l(moments(p))).alpha;
    // apply (x,y) -> (x+2y, y) and (x,y) -> (y,x)
    for (auto m : {std::array<long long, 4>{1, 2, 0, 1}, std::array<long long, 4>{0, 1, 1, 0}}) {
        std::vector<VecZ> mapped;
        for (const auto& v : p.vertices())
            mapped.push_back({m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]});
        Polytope q = Polytope::from_vertices(mapped, true);
        CHECK(alpha_invariant(q, solve_l(moments(q))).alpha == a0);
    }
}

TEST_CASE("ding futaki of an affine function vanishes") {
    Polytope p = raw_interval();
    AffineDensity l = solve_l(moments(p));
    auto u = pl({{Rational(3), {Rational(-2)}}});
    CHECK(ding_futaki(p, l, u) == 0);
    Polytope q = p2();
    AffineDensity lq = solve_l(moments(q));
    auto uq = pl({{Rational(1) / 3, {Rational(2), Rational(-1) / 2}}});
    CHECK(ding_futaki(q, lq, uq) == 0);
}

TEST_CASE("ding futaki hand values on the segment") {
    Polytope p = interval();
    AffineDensity l = solve_l(moments(p));
    auto relu = pl({{Rational(0), {Rational(0)}}, {Rational(0), {Rational(1)}}});
    CHECK(ding_futaki(p, l, relu) == Rational(1) / 4);
    auto abs = pl({{Rational(0), {Rational(-1)}}, {Rational(0), {Rational(1)}}});
    CHECK(ding_futaki(p, l, abs) == Rational(1) / 2);
    CHECK(integrate_pl(p, abs) == 1);
}

TEST_CASE("I is linear in nonnegative combinations") {
    Polytope p = p2();
    AffineDensity l = solve_l(moments(p));
    auto u = pl({{Rational(0), {Rational(0), Rational(0)}},
                 {Rational(-1), {Rational(2), Rational(1)}}});
    auto w = pl({{Rational(0), {Rational(0), Rational(0)}},
                 {Rational(0), {Rational(-1), Rational(1)}}});
    Rational s = Rational(3) / 7;
    CHECK(ding_futaki(p, l, u.scaled_add(s, w)) ==
          ding_futaki(p, l, u) + s * ding_futaki(p, l, w));
}

TEST_CASE("uniform stability bound on the segment attains equality") {
    Polytope p = interval();
    auto rep = alpha_invariant(p, solve_l(moments(p)));
    auto relu = pl({{Rational(0), {Rational(0)}}, {Rational(0), {Rational(1)}}});
    auto w = uniform_bound_check(p, rep, relu);
    CHECK(w.lhs == Rational(1) / 4);
    // alpha = 0 makes l constant, so I(u) = lambda * integral(u) exactly
    CHECK(w.rhs == Rational(1) / 4);
    CHECK(w.holds);
}

TEST_CASE("uniform bound rejects unnormalized input") {
    Polytope p = interval();
    auto rep = alpha_invariant(p, solve_l(moments(p)));
    auto bad = pl({{Rational(1), {Rational(0)}}});
    CHECK_THROWS_AS(uniform_bound_check(p, rep, bad), std::invalid_argument);
}

namespace {

// random normalized PL convex functions: the zero piece plus pieces that are
// nonpositive at the origin
PiecewiseLinearConvex random_normalized_pl(std::mt19937_64& rng, std::size_t dim) {
    std::uniform_int_distribution<int> coeff(-6, 6);
    std::uniform_int_distribution<int> denom(1, 4);
    std::uniform_int_distribution<int> off(0, 5);
    std::uniform_int_distribution<std::size_t> npieces(1, 4);
    PiecewiseLinearConvex u;
    u.pieces.push_back({Rational(0), VecQ(dim, Rational(0))});
    std::size_t m = npieces(rng);
    for (std::size_t k = 0; k < m; ++k) {
        PiecewiseLinearConvex::Piece piece;
        piece.c0 = -Rational(off(rng)) / denom(rng);
        piece.c.resize(dim);
        for (auto& c : piece.c) c = Rational(coeff(rng)) / denom(rng);
        u.pieces.push_back(std::move(piece));
    }
    return u;
}

}  // namespace

TEST_CASE("uniform stability inequality holds for random normalized PL functions") {
    std::mt19937_64 rng(7);
    for (const Polytope& p : {p2(), bl1p2()}) {
        auto rep = alpha_invariant(p, solve_l(moments(p)));
        for (int it = 0; it < 60; ++it) {
            auto u = random_normalized_pl(rng, p.dim());
            auto w = uniform_bound_check(p, rep, u);
            REQUIRE(w.holds);
        }
    }
}

TEST_CASE("affine objective attains its maximum on the vertex set") {
    Polytope p = bl1p2();
    auto rep = alpha_invariant(p, solve_l(moments(p)));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0, 1);
    const auto& verts = p.body().vertices();
    for (int it = 0; it < 200; ++it) {
        // random convex combination of vertices, exact rational weights
        VecQ weights(verts.size());
        Rational total = 0;
        for (auto& w : weights) {
            w = Rational(static_cast<int>(unif(rng) * 64)) / 64;
            total += w;
        }
        if (total == 0) continue;
        VecQ x(p.dim(), Rational(0));
        for (std::size_t i = 0; i < verts.size(); ++i)
            for (std::size_t j = 0; j < p.dim(); ++j) x[j] += weights[i] / total * verts[i][j];
        Rational value = 1 - rep.volume * rep.l.eval(x);
        CHECK(value <= rep.alpha);
    }
}

TEST_CASE("stability report serializes exact rationals") {
    Polytope p = p2();
    auto rep = alpha_invariant(p, solve_l(moments(p)), "p2");
    std::string json = rep.to_json();
    CHECK(json.find("\"9/2\"") != std::string::npos);
    CHECK(json.find("4.5") == std::string::npos);
    std::string row = rep.to_csv_row();
    CHECK(row == "p2,2,9/2,2/9,0,0,0,UNIFORM_STABLE");
}
