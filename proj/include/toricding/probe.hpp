#ifndef TORICDING_PROBE_HPP
#define TORICDING_PROBE_HPP

#include <string>
#include <vector>

#include "toricding/functional.hpp"

namespace toric {

/// PL spike of unit mass cut off near a vertex: c * max(0, <g,x> - (M - w))
/// with g strictly supporting at the vertex, M = <g, vertex>, and c chosen
/// so the integral over the polytope is exactly 1. Vanishes at the origin
/// for w < M; throws otherwise.
PiecewiseLinearConvex spike_pl(const Polytope& p, std::size_t vertex, const Rational& width);

/// Grid member of the spike family: base + K * spike.
DiscretePotential spike_potential(const DiscretePotential& base, const PiecewiseLinearConvex& spike,
                                  double k);

struct ProbeFamily {
    std::string description;
    std::vector<double> params;  // growth parameter per member
    std::vector<DiscretePotential> members;
};

ProbeFamily scaling_family(const DiscretePotential& base, const std::vector<double>& ts);
ProbeFamily spike_family(const DiscretePotential& base, std::size_t vertex, const Rational& width,
                         const std::vector<double>& ks);
ProbeFamily random_family(const DiscretePotential& base, std::size_t count, unsigned seed);

struct ProbeResult {
    std::string family;
    std::vector<double> params;
    std::vector<double> d_values;
    std::vector<double> int_u;  // integral of u per member
    struct PerEps {
        double eps = 0;
        double c_eps = 0;
        bool finite = true;
        std::vector<double> candidates;  // -D - eps*int(u) per member
    };
    std::vector<PerEps> verdicts;

    std::string to_json() const;
    std::string to_csv() const;
};

/// For each eps, C_eps = max over the family of (-D(u) - eps * integral u),
/// with a running-max trend verdict over the last quartile of the family's
/// growth parameter. Requires at least 8 members.
ProbeResult pseudo_bound_probe(const ProbeFamily& family, const AffineDensity& l,
                               const std::vector<double>& epsilons,
                               const NonlinearOptions& opts = {},
                               const Tolerances& tol = default_tolerances());

}  // namespace toric

#endif
