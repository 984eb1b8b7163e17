#include <doctest.h>

#include <set>

#include "support/oracles.hpp"
#include "toricding/polytope.hpp"
#include "toricding/stability.hpp"

using namespace toric;

namespace {

Polytope p2() { return Polytope::from_vertices({{2, -1}, {-1, 2}, {-1, -1}}); }
Polytope bl1p2() { return Polytope::from_vertices({{-1, 0}, {0, -1}, {2, -1}, {-1, 2}}); }

}  // namespace

TEST_CASE("segment [-1,1] parses reflexive and smooth") {
    Polytope p = parse_polytope("1 2\n-1\n1\n");
    CHECK(p.dim() == 1);
    CHECK(p.reflexive());
    CHECK(p.delzant_smooth());
    CHECK(p.origin_interior());
    REQUIRE(p.facets().size() == 2);
    for (const auto& f : p.facets()) CHECK(f.offset == 1);
}

TEST_CASE("P2 triangle facets are the offset-1 duals") {
    Polytope p = p2();
    CHECK(p.reflexive());
    CHECK(p.delzant_smooth());
    std::set<std::pair<VecZ, long long>> facets;
    for (const auto& f : p.facets()) facets.insert({f.normal, f.offset});
    std::set<std::pair<VecZ, long long>> expected{
        {{1, 0}, 1}, {{0, 1}, 1}, {{-1, -1}, 1}};
    CHECK(facets == expected);
    // cross-check interiority against the brute lattice scan
    auto pts = interior_lattice_points(p);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0] == VecZ{0, 0});
    CHECK(oracles::brute_interior_points(p) == pts);
}

TEST_CASE("boundary origin rejected unless raw") {
    CHECK_THROWS_AS(parse_polytope("2 3\n0 0\n1 0\n0 1\n"), PolytopeError);
    Polytope p = parse_polytope("2 3\n0 0\n1 0\n0 1\n", /*raw=*/true);
    CHECK_FALSE(p.origin_interior());
}

TEST_CASE("validate reports offset violations in raw mode") {
    Polytope p = parse_polytope("1 2\n-1\n2\n", true);
    CHECK(p.origin_interior());
    CHECK_FALSE(p.reflexive());
    CHECK(p.validation().nonreflexive_facets.size() == 1);
}

TEST_CASE("malformed inputs throw") {
    CHECK_THROWS_AS(parse_polytope(""), PolytopeError);
    CHECK_THROWS_AS(parse_polytope("2 3\n1 0\n0 1\n"), PolytopeError);
    CHECK_THROWS_AS(parse_polytope("1 2\n-1\n1\n7\n"), PolytopeError);
    // collinear points in the plane
    CHECK_THROWS_AS(parse_polytope("2 3\n-1 -1\n0 0\n1 1\n"), PolytopeError);
}

TEST_CASE("triangulation: simplex is itself, quad splits in two") {
    CHECK(triangulate(p2()).size() == 1);
    Polytope q = bl1p2();
    auto tri = triangulate(q);
    CHECK(tri.size() == 2);
    Rational total = 0;
    for (const auto& s : tri) total += s.volume();
    CHECK(total == oracles::shoelace_area(q));
    CHECK(total == Rational(4));
}

TEST_CASE("star triangulation covers the same volume") {
    for (const Polytope& p : {p2(), bl1p2()}) {
        VecQ origin(p.dim(), Rational(0));
        Rational star_total = 0;
        for (const auto& s : p.body().star_triangulate(origin)) star_total += s.volume();
        CHECK(star_total == p.body().volume());
    }
}

TEST_CASE("moments of the segment and the raw interval") {
    MomentData md = moments(parse_polytope("1 2\n-1\n1\n"));
    CHECK(md.volume == 2);
    CHECK(md.first[0] == 0);
    CHECK(md.second[0][0] == Rational(2) / 3);

    MomentData raw = moments(parse_polytope("1 2\n-1\n2\n", true));
    CHECK(raw.volume == 3);
    CHECK(raw.first[0] == Rational(3) / 2);
    CHECK(raw.second[0][0] == 3);
}

TEST_CASE("P2 moments: barycenter at the origin") {
    MomentData md = moments(p2());
    CHECK(md.volume == Rational(9) / 2);
    CHECK(md.first[0] == 0);
    CHECK(md.first[1] == 0);
    CHECK(md.second[0][0] == Rational(9) / 4);
    CHECK(md.second[0][1] == Rational(-9) / 8);
    CHECK(md.gram_positive_definite());
}

TEST_CASE("volume agrees with the divergence-theorem oracle") {
    for (const Polytope& p :
         {p2(), bl1p2(), parse_polytope("1 2\n-1\n2\n", true),
          Polytope::from_vertices({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}})}) {
        CHECK(moments(p).volume == oracles::divergence_volume(p));
    }
}

TEST_CASE("moments invariant under unimodular symmetries") {
    // rotation (x,y) -> (y, -x-y) preserves the P2 triangle
    Polytope p = p2();
    std::vector<VecZ> mapped;
    for (const auto& v : p.vertices()) mapped.push_back({v[1], -v[0] - v[1]});
    MomentData a = moments(p), b = moments(Polytope::from_vertices(mapped));
    CHECK(a.volume == b.volume);
    CHECK(a.first == b.first);

    // square: quarter rotation (x,y) -> (-y,x)
    Polytope sq = Polytope::from_vertices({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
    std::vector<VecZ> rot;
    for (const auto& v : sq.vertices()) rot.push_back({-v[1], v[0]});
    MomentData c = moments(sq), d = moments(Polytope::from_vertices(rot));
    CHECK(c.volume == d.volume);
    CHECK(c.second == d.second);
}

TEST_CASE("monte carlo cross-check of volume and moments") {
    for (const Polytope& p : {p2(), bl1p2()}) {
        MomentData md = moments(p);
        auto mc = oracles::mc_moments(p, 1'000'000, 20260317u);
        CHECK(std::abs(to_double(md.volume) - mc.volume) < 3 * mc.volume_se);
        for (std::size_t i = 0; i < p.dim(); ++i)
            CHECK(std::abs(to_double(md.first[i]) - mc.first[i]) < 3 * mc.first_se[i]);
    }
}

TEST_CASE("parse o serialize is the identity on canonical form") {
    for (const char* text : {"1 2\n-1\n1\n", "2 3\n-1 -1\n-1 2\n2 -1\n"}) {
        Polytope p = parse_polytope(text);
        std::string canon = serialize_polytope(p);
        CHECK(serialize_polytope(parse_polytope(canon)) == canon);
    }
}

TEST_CASE("json presentation parses to the same polytope") {
    Polytope a = parse_polytope(R"({"dim":2,"vertices":[[2,-1],[-1,2],[-1,-1]]})");
    CHECK(serialize_polytope(a) == serialize_polytope(p2()));
}

TEST_CASE("comments are ignored") {
    Polytope p = parse_polytope("# the unique reflexive segment\n1 2\n-1\n1 # right endpoint\n");
    CHECK(p.vertices().size() == 2);
}
