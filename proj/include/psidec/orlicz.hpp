#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace psidec {

/// A Young function A(t) = ∫_0^t a(s) ds with a nonnegative, nondecreasing,
/// right-continuous density a, A(0)=0 and superlinear growth.  Supported
/// families:
///   power(p):      A(t) = t^p,           p > 1
///   exp_power(b):  A(t) = e^{t^b} - 1,   b >= 1
///   custom:        density sampled on a log grid, monotone interpolation
class NFunction {
public:
    static NFunction power(double p);
    static NFunction exp_power(double beta);
    static NFunction custom(std::function<double(double)> density,
                            double s_min = 1e-9, double s_max = 1e9,
                            int points_per_decade = 64);

    /// A(t); throws std::domain_error for t < 0.
    double operator()(double t) const;

    /// density a(t) = A'(t)
    double density(double t) const;

    /// A^{-1}(s) = inf{t : A(t) > s}
    double inverse(double s) const;

    /// Legendre conjugate A_*(s) = sup_{t>=0} [st - A(t)]
    double conjugate(double s) const;

    /// A_*^{-1}(s) = inf{t : A_*(t) > s}
    double conjugate_inverse(double s) const;

    /// The conjugate as an NFunction (density evaluated numerically).
    NFunction conjugate_function() const;

    std::string describe() const;

private:
    enum class Family { Power, ExpPower, Custom };
    NFunction() = default;

    double custom_eval(double t) const;

    Family family_ = Family::Power;
    double p_ = 2.0;
    double beta_ = 1.0;
    // custom representation
    std::function<double(double)> density_fn_;
    std::vector<double> grid_;  // log-spaced sample points
    std::vector<double> dens_;  // density at sample points
    std::vector<double> cum_;   // A at sample points
};

/// Function samples carrying the uniform measure weight of their host grid.
struct MeasuredSamples {
    std::vector<double> values;
    double cell_volume = 1.0;
};

/// Luxemburg norm inf{a>0 : Σ A(|f_i|/a) cell_volume <= 1}; 0 for f ≡ 0.
double luxemburg_norm(std::span<const double> values, double cell_volume,
                      const NFunction& A);
double luxemburg_norm(const MeasuredSamples& f, const NFunction& A);

}  // namespace psidec
