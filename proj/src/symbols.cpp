#include "psidec/symbols.hpp"

#include <cmath>

#include "psidec/quadrature.hpp"

namespace psidec {

SubordinatorSpec SubordinatorSpec::gamma(int dim) {
    if (dim != 1 && dim != 2) throw std::domain_error("dimension must be 1 or 2");
    SubordinatorSpec s;
    s.family_ = Family::Gamma;
    s.dim_ = dim;
    s.name_ = "gamma";
    return s;
}

SubordinatorSpec SubordinatorSpec::stable(double alpha, int dim) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::domain_error("stable index must lie in (0,2)");
    if (dim != 1 && dim != 2) throw std::domain_error("dimension must be 1 or 2");
    SubordinatorSpec s;
    s.family_ = Family::Stable;
    s.alpha_ = alpha;
    s.dim_ = dim;
    s.name_ = "stable(" + std::to_string(alpha) + ")";
    return s;
}

SubordinatorSpec SubordinatorSpec::custom(std::function<double(double)> phi,
                                          std::function<double(double)> phi_prime,
                                          std::function<double(double)> levy_density,
                                          int dim, std::string name) {
    if (dim != 1 && dim != 2) throw std::domain_error("dimension must be 1 or 2");
    SubordinatorSpec s;
    s.family_ = Family::Custom;
    s.dim_ = dim;
    s.name_ = std::move(name);
    s.phi_fn_ = std::move(phi);
    s.phi_prime_fn_ = std::move(phi_prime);
    s.levy_fn_ = std::move(levy_density);
    return s;
}

double SubordinatorSpec::phi(double lambda) const {
    switch (family_) {
        case Family::Gamma:
            return std::log1p(lambda);
        case Family::Stable:
            return std::pow(lambda, 0.5 * alpha_);
        case Family::Custom:
            return phi_fn_(lambda);
    }
    return 0.0;
}

double SubordinatorSpec::phi_prime(double lambda) const {
    switch (family_) {
        case Family::Gamma:
            return 1.0 / (1.0 + lambda);
        case Family::Stable:
            return 0.5 * alpha_ * std::pow(lambda, 0.5 * alpha_ - 1.0);
        case Family::Custom:
            return phi_prime_fn_(lambda);
    }
    return 0.0;
}

double SubordinatorSpec::levy_density(double t) const {
    switch (family_) {
        case Family::Gamma:
            // Frullani representation of log(1+lambda)
            return std::exp(-t) / t;
        case Family::Stable: {
            const double s = 0.5 * alpha_;
            const double c = s / std::tgamma(1.0 - s);
            return c * std::pow(t, -1.0 - s);
        }
        case Family::Custom:
            return levy_fn_(t);
    }
    return 0.0;
}

double SubordinatorSpec::psi(double R) const {
    if (R < 0.0) throw std::domain_error("psi argument must be >= 0");
    if (R == 0.0) return 0.0;
    return phi(R * R);
}

double SubordinatorSpec::psi_prime(double R) const {
    return 2.0 * R * phi_prime(R * R);
}

double SubordinatorSpec::psi_inverse(double y) const {
    if (y < 0.0) throw std::domain_error("psi_inverse argument must be >= 0");
    if (y == 0.0) return 0.0;
    return invert_increasing([this](double R) { return psi(R); }, y, 1e-13);
}

double SubordinatorSpec::rho(double r) const {
    if (!(r > 0.0)) throw std::domain_error("rho argument must be > 0");
    return 1.0 / psi(1.0 / r);
}

double sphere_surface(int dim) {
    if (dim == 1) return 2.0;
    if (dim == 2) return 2.0 * M_PI;
    throw std::domain_error("dimension must be 1 or 2");
}

double jump_kernel(const SubordinatorSpec& spec, double r) {
    if (!(r > 0.0)) throw std::domain_error("jump_kernel needs r > 0");
    const int d = spec.dim();
    const double r2_4 = 0.25 * r * r;
    const auto integrand = [&](double t) {
        return std::pow(4.0 * M_PI * t, -0.5 * d) * std::exp(-r2_4 / t) *
               spec.levy_density(t);
    };
    try {
        return adaptive_log_quadrature(integrand, 1e-12, 1e4, 1e-6, 513);
    } catch (const QuadratureError& e) {
        throw QuadratureError("jump_kernel(r=" + std::to_string(r) +
                              "): " + e.what());
    }
}

double potential_density(const SubordinatorSpec& spec, double lambda, double u) {
    if (!spec.is_gamma())
        throw UnsupportedFamilyError(
            "potential_density has a closed-form subordinator density only for "
            "the gamma family");
    if (!(lambda > 0.0) || !(u > 0.0))
        throw std::domain_error("potential_density needs lambda > 0, u > 0");
    const double log_u = std::log(u);
    const auto integrand = [&](double t) {
        // e^{-lambda t} u^{t-1} e^{-u} / Gamma(t)
        return std::exp(-lambda * t + (t - 1.0) * log_u - u - std::lgamma(t));
    };
    // The integrand vanishes linearly at t=0 and super-exponentially once
    // Gamma(t) dominates; gamma-subordinator densities concentrate below
    // t ~ max(u, 1).
    const double t_hi = std::max(60.0, 4.0 * u) + 60.0 / lambda;
    return adaptive_log_quadrature(integrand, 1e-10, t_hi, 1e-9, 1025);
}

double kernel_tail_mass(const SubordinatorSpec& spec, double r) {
    if (!(r > 0.0)) throw std::domain_error("kernel_tail_mass needs r > 0");
    const int d = spec.dim();
    const double surf = sphere_surface(d);
    const auto integrand = [&](double s) {
        return jump_kernel(spec, s) * std::pow(s, d - 1);
    };
    return surf * adaptive_tail_quadrature(integrand, r, 1e-6);
}

double kernel_first_moment(const SubordinatorSpec& spec, double r) {
    if (!(r > 0.0)) throw std::domain_error("kernel_first_moment needs r > 0");
    if (spec.is_stable() && spec.stable_alpha() >= 1.0)
        throw UnsupportedFamilyError(
            "first moment diverges for stable index >= 1");
    const int d = spec.dim();
    const double surf = sphere_surface(d);
    const auto integrand = [&](double s) {
        return jump_kernel(spec, s) * std::pow(s, d);
    };
    return surf * adaptive_log_quadrature(integrand, r * 1e-9, r, 1e-6, 513);
}

}  // namespace psidec
