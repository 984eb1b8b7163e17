#ifndef TORICDING_GUILLEMIN_HPP
#define TORICDING_GUILLEMIN_HPP

#include <memory>
#include <vector>

#include "toricding/grid.hpp"
#include "toricding/polytope.hpp"

namespace toric {

/// Smooth strictly convex potential with closed-form derivatives on the
/// open polytope. Implementations must blow up in slope toward the
/// boundary or accept the truncated gradient range in the dual picture.
class AnalyticConvex {
  public:
    virtual ~AnalyticConvex() = default;
    virtual double value(const std::vector<double>& x) const = 0;
    virtual std::vector<double> gradient(const std::vector<double>& x) const = 0;
    virtual std::vector<std::vector<double>> hessian(const std::vector<double>& x) const = 0;
};

/// The canonical symplectic potential tau/2 * sum_F ell_F log ell_F with
/// ell_F(x) = offset_F + <nu_F, x>. Boundary values extend by continuity
/// (t log t -> 0); derivatives are only valid in the interior.
class GuilleminPotential : public AnalyticConvex {
  public:
    explicit GuilleminPotential(const Polytope& p, double tau = 1.0);

    double value(const std::vector<double>& x) const override;
    std::vector<double> gradient(const std::vector<double>& x) const override;
    std::vector<std::vector<double>> hessian(const std::vector<double>& x) const override;

    double tau() const { return tau_; }

  private:
    std::vector<std::vector<double>> normals_;
    std::vector<double> offsets_;
    double tau_;
    std::size_t dim_;
};

/// u_G sampled at the grid nodes (boundary nodes by continuity).
DiscretePotential guillemin_potential(std::shared_ptr<const GridContext> ctx, double tau = 1.0);

struct QuadraticPotential : AnalyticConvex {
    double a;  // value a*|x|^2 + b
    double b;
    QuadraticPotential(double a_, double b_) : a(a_), b(b_) {}
    double value(const std::vector<double>& x) const override;
    std::vector<double> gradient(const std::vector<double>& x) const override;
    std::vector<std::vector<double>> hessian(const std::vector<double>& x) const override;
};

}  // namespace toric

#endif
