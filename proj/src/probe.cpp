#include "toricding/probe.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace toric {

PiecewiseLinearConvex spike_pl(const Polytope& p, std::size_t vertex, const Rational& width) {
    if (vertex >= p.vertices().size()) throw std::invalid_argument("spike: bad vertex index");
    const std::size_t n = p.dim();
    VecQ g(n, Rational(0));
    for (auto fi : p.facets_at_vertex(vertex))
        for (std::size_t j = 0; j < n; ++j) g[j] -= Rational(p.facets()[fi].normal[j]);
    VecQ v = p.vertex_q(vertex);
    Rational m = dot(g, v);
    // the support {<g,x> >= m - w} must not reach the origin (<g,0> = 0)
    if (width <= 0 || width >= m)
        throw std::invalid_argument("spike support would contain the origin");
    PiecewiseLinearConvex ramp;
    ramp.pieces.push_back({Rational(0), VecQ(n, Rational(0))});
    ramp.pieces.push_back({width - m, g});
    Rational mass = integrate_pl(p, ramp);
    if (mass <= 0) throw std::invalid_argument("spike has empty support on this grid");
    PiecewiseLinearConvex out;
    out.pieces.push_back({Rational(0), VecQ(n, Rational(0))});
    out.pieces.push_back({(width - m) / mass, scale(g, 1 / mass)});
    return out;
}

DiscretePotential spike_potential(const DiscretePotential& base, const PiecewiseLinearConvex& spike,
                                  double k) {
    DiscretePotential s = DiscretePotential::from_pl(base.ctx, spike);
    DiscretePotential out = base.plus(s, k);
    out.normalized = base.normalized;  // spike vanishes at the origin and is >= 0
    return out;
}

ProbeFamily scaling_family(const DiscretePotential& base, const std::vector<double>& ts) {
    ProbeFamily fam;
    fam.description = "scaling";
    for (double t : ts) {
        fam.params.push_back(t);
        fam.members.push_back(base.scaled(t));
    }
    return fam;
}

ProbeFamily spike_family(const DiscretePotential& base, std::size_t vertex, const Rational& width,
                         const std::vector<double>& ks) {
    ProbeFamily fam;
    fam.description = "spike@" + std::to_string(vertex);
    PiecewiseLinearConvex s = spike_pl(base.ctx->polytope(), vertex, width);
    for (double k : ks) {
        fam.params.push_back(k);
        fam.members.push_back(spike_potential(base, s, k));
    }
    return fam;
}

ProbeFamily random_family(const DiscretePotential& base, std::size_t count, unsigned seed) {
    ProbeFamily fam;
    fam.description = "random@" + std::to_string(seed);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(-3.0, 3.0);
    std::uniform_int_distribution<int> npieces(2, 5);
    const std::size_t n = base.ctx->dim();
    for (std::size_t i = 0; i < count; ++i) {
        PiecewiseLinearConvex u;
        u.pieces.push_back({Rational(0), VecQ(n, Rational(0))});
        int m = npieces(rng);
        for (int k = 0; k < m; ++k) {
            PiecewiseLinearConvex::Piece piece;
            piece.c0 = Rational(-std::abs(static_cast<long long>(coeff(rng) * 64)), 64);
            piece.c.resize(n);
            for (auto& c : piece.c) c = Rational(static_cast<long long>(coeff(rng) * 64), 64);
            u.pieces.push_back(std::move(piece));
        }
        DiscretePotential d = DiscretePotential::from_pl(base.ctx, u);
        d.normalized = true;  // zero piece present, others nonpositive at 0
        fam.params.push_back(static_cast<double>(i + 1));
        fam.members.push_back(std::move(d));
    }
    return fam;
}

ProbeResult pseudo_bound_probe(const ProbeFamily& family, const AffineDensity& l,
                               const std::vector<double>& epsilons, const NonlinearOptions& opts,
                               const Tolerances& tol) {
    if (family.members.size() < 8)
        throw std::invalid_argument("probe family needs at least 8 members for a trend verdict");
    ProbeResult out;
    out.family = family.description;
    out.params = family.params;
    for (const auto& u : family.members) {
        out.d_values.push_back(modified_ding(u, l, opts));
        out.int_u.push_back(integrate_grid(u));
    }
    for (double eps : epsilons) {
        ProbeResult::PerEps pe;
        pe.eps = eps;
        for (std::size_t k = 0; k < family.members.size(); ++k)
            pe.candidates.push_back(-out.d_values[k] - eps * out.int_u[k]);
        std::vector<double> running(pe.candidates.size());
        double m = -1e300;
        for (std::size_t k = 0; k < pe.candidates.size(); ++k) {
            m = std::max(m, pe.candidates[k]);
            running[k] = m;
        }
        pe.c_eps = running.back();
        std::size_t q = std::max<std::size_t>(1, running.size() / 4);
        double before = running[running.size() - 1 - q];
        double growth = running.back() - before;
        pe.finite = growth <= std::max(tol.probe_abs, tol.probe_rel * std::abs(running.back()));
        out.verdicts.push_back(std::move(pe));
    }
    return out;
}

std::string ProbeResult::to_json() const {
    nlohmann::json j;
    j["family"] = family;
    j["params"] = params;
    j["d_values"] = d_values;
    j["int_u"] = int_u;
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& v : verdicts) {
        nlohmann::json e;
        e["eps"] = v.eps;
        e["c_eps"] = v.c_eps;
        e["verdict"] = v.finite ? "FINITE" : "DIVERGING";
        e["candidates"] = v.candidates;
        vs.push_back(e);
    }
    j["verdicts"] = vs;
    return j.dump(2);
}

std::string ProbeResult::to_csv() const {
    std::ostringstream out;
    out << "eps,c_eps,verdict\n";
    for (const auto& v : verdicts)
        out << v.eps << "," << v.c_eps << "," << (v.finite ? "FINITE" : "DIVERGING") << "\n";
    return out.str();
}

}  // namespace toric
