#include "toricding/guillemin.hpp"

#include <cmath>
#include <stdexcept>

namespace toric {

GuilleminPotential::GuilleminPotential(const Polytope& p, double tau) : tau_(tau), dim_(p.dim()) {
    for (const auto& f : p.facets()) {
        std::vector<double> nu(dim_);
        for (std::size_t j = 0; j < dim_; ++j) nu[j] = static_cast<double>(f.normal[j]);
        normals_.push_back(std::move(nu));
        offsets_.push_back(static_cast<double>(f.offset));
    }
}

double GuilleminPotential::value(const std::vector<double>& x) const {
    double s = 0;
    for (std::size_t f = 0; f < normals_.size(); ++f) {
        double ell = offsets_[f];
        for (std::size_t j = 0; j < dim_; ++j) ell += normals_[f][j] * x[j];
        if (ell > 0) s += ell * std::log(ell);  // t log t -> 0 at the boundary
    }
    return 0.5 * tau_ * s;
}

std::vector<double> GuilleminPotential::gradient(const std::vector<double>& x) const {
    std::vector<double> g(dim_, 0.0);
    for (std::size_t f = 0; f < normals_.size(); ++f) {
        double ell = offsets_[f];
        for (std::size_t j = 0; j < dim_; ++j) ell += normals_[f][j] * x[j];
        if (ell <= 0) throw std::domain_error("gradient on or outside the boundary");
        double w = 0.5 * tau_ * (1.0 + std::log(ell));
        for (std::size_t j = 0; j < dim_; ++j) g[j] += w * normals_[f][j];
    }
    return g;
}

std::vector<std::vector<double>> GuilleminPotential::hessian(const std::vector<double>& x) const {
    std::vector<std::vector<double>> h(dim_, std::vector<double>(dim_, 0.0));
    for (std::size_t f = 0; f < normals_.size(); ++f) {
        double ell = offsets_[f];
        for (std::size_t j = 0; j < dim_; ++j) ell += normals_[f][j] * x[j];
        if (ell <= 0) throw std::domain_error("hessian on or outside the boundary");
        double w = 0.5 * tau_ / ell;
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) h[i][j] += w * normals_[f][i] * normals_[f][j];
    }
    return h;
}

DiscretePotential guillemin_potential(std::shared_ptr<const GridContext> ctx, double tau) {
    GuilleminPotential g(ctx->polytope(), tau);
    return DiscretePotential::from_function(std::move(ctx),
                                            [g](const std::vector<double>& x) { return g.value(x); });
}

double QuadraticPotential::value(const std::vector<double>& x) const {
    double s = b;
    for (double c : x) s += a * c * c;
    return s;
}

std::vector<double> QuadraticPotential::gradient(const std::vector<double>& x) const {
    std::vector<double> g(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) g[j] = 2 * a * x[j];
    return g;
}

std::vector<std::vector<double>> QuadraticPotential::hessian(const std::vector<double>& x) const {
    std::vector<std::vector<double>> h(x.size(), std::vector<double>(x.size(), 0.0));
    for (std::size_t j = 0; j < x.size(); ++j) h[j][j] = 2 * a;
    return h;
}

}  // namespace toric
