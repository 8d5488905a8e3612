#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace psidec {

struct UnsupportedFamilyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Driftless subordinator S with Laplace exponent phi, plus everything the
/// subordinate Brownian motion Z_t = sqrt(2) B_{S_t} derives from it:
///   psi(R)   = phi(R^2)            Levy exponent of Z
///   rho(r)   = 1 / psi(1/r)        intrinsic scale
///   j(r)     = ∫ (4πt)^{-d/2} e^{-r²/4t} Π(dt)   jump kernel of Z
/// Families:
///   gamma:        phi(l) = log(1+l),  Π(dt) = e^{-t}/t dt
///   stable(a):    phi(l) = l^{a/2},   Π(dt) = c t^{-1-a/2} dt, a in (0,2)
class SubordinatorSpec {
public:
    static SubordinatorSpec gamma(int dim = 1);
    static SubordinatorSpec stable(double alpha, int dim = 1);
    static SubordinatorSpec custom(std::function<double(double)> phi,
                                   std::function<double(double)> phi_prime,
                                   std::function<double(double)> levy_density,
                                   int dim, std::string name = "custom");

    int dim() const { return dim_; }
    const std::string& name() const { return name_; }

    double phi(double lambda) const;
    double phi_prime(double lambda) const;
    /// density of the subordinator Levy measure Π
    double levy_density(double t) const;

    double psi(double R) const;       // phi(R^2)
    double psi_prime(double R) const; // 2R phi'(R^2)
    double psi_inverse(double y) const;
    double rho(double r) const;       // 1/psi(1/r); r > 0

    bool is_gamma() const { return family_ == Family::Gamma; }
    bool is_stable() const { return family_ == Family::Stable; }
    double stable_alpha() const { return alpha_; }

private:
    enum class Family { Gamma, Stable, Custom };
    SubordinatorSpec() = default;

    Family family_ = Family::Gamma;
    double alpha_ = 1.0;
    int dim_ = 1;
    std::string name_ = "gamma";
    std::function<double(double)> phi_fn_, phi_prime_fn_, levy_fn_;
};

/// j(r) by quadrature of the heat kernel against the subordinator Levy
/// density on t in [1e-12, 1e4], refined until stable to 1e-6 relative.
double jump_kernel(const SubordinatorSpec& spec, double r);

/// Density of the lambda-potential measure of the gamma subordinator,
/// mu_lambda(u) = ∫_0^∞ e^{-lambda t} u^{t-1} e^{-u} / Γ(t) dt.
/// Throws UnsupportedFamilyError for non-gamma specs.
double potential_density(const SubordinatorSpec& spec, double lambda, double u);

/// ∫_{|z|>r} J(z) dz  (radial quadrature of the jump kernel)
double kernel_tail_mass(const SubordinatorSpec& spec, double r);

/// ∫_{|z|<=r} |z| J(z) dz
double kernel_first_moment(const SubordinatorSpec& spec, double r);

/// Surface measure of the unit sphere in dimension d (2 for d=1, 2π for d=2).
double sphere_surface(int dim);

}  // namespace psidec
