#ifndef TORICDING_TEST_ENUMERATION_HPP
#define TORICDING_TEST_ENUMERATION_HPP

// Bounded brute-force enumeration of smooth reflexive polygons, used as the
// oracle behind the bundled database. Representatives of every class fit in
// [-2,2]^2 with at most six vertices; classes are told apart by unimodular
// invariants.

#include <set>
#include <tuple>
#include <vector>

#include "toricding/stability.hpp"

namespace oracles {

using PolygonSignature = std::tuple<std::size_t, toric::Rational, toric::Rational>;

inline std::set<PolygonSignature> enumerate_smooth_reflexive_polygons(long long box) {
    using namespace toric;
    std::vector<VecZ> candidates;
    for (long long x = -box; x <= box; ++x)
        for (long long y = -box; y <= box; ++y)
            if (x != 0 || y != 0) candidates.push_back({x, y});

    std::set<PolygonSignature> found;
    const std::size_t m = candidates.size();
    std::vector<std::size_t> idx;
    // all vertex subsets of size 3..6
    for (std::size_t size = 3; size <= 6; ++size) {
        idx.assign(size, 0);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            std::vector<VecZ> pts;
            for (auto i : idx) pts.push_back(candidates[i]);
            try {
                Polytope p = Polytope::from_vertices(pts, /*raw=*/true);
                // count each polygon once: the subset must be exactly the
                // vertex set (from_vertices throws on non-extreme points)
                if (p.origin_interior() && p.reflexive() && p.delzant_smooth() &&
                    p.validation().interior_lattice_points.size() == 1) {
                    auto rep = alpha_invariant(p, solve_l(moments(p)));
                    found.insert({p.vertices().size(), rep.volume, rep.alpha});
                }
            } catch (const PolytopeError&) {
            } catch (const std::invalid_argument&) {
            }
            // next subset
            std::size_t i = size;
            while (i > 0) {
                --i;
                if (idx[i] != i + m - size) break;
                if (i == 0) {
                    i = size;
                    break;
                }
            }
            if (i == size) break;
            ++idx[i];
            for (std::size_t j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return found;
}

}  // namespace oracles

#endif
