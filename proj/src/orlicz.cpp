#include "psidec/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "psidec/quadrature.hpp"

namespace psidec {

NFunction NFunction::power(double p) {
    if (!(p > 1.0)) throw std::domain_error("power family needs p > 1");
    NFunction A;
    A.family_ = Family::Power;
    A.p_ = p;
    return A;
}

NFunction NFunction::exp_power(double beta) {
    if (!(beta >= 1.0)) throw std::domain_error("exp_power family needs beta >= 1");
    NFunction A;
    A.family_ = Family::ExpPower;
    A.beta_ = beta;
    return A;
}

NFunction NFunction::custom(std::function<double(double)> density, double s_min,
                            double s_max, int points_per_decade) {
    NFunction A;
    A.family_ = Family::Custom;
    A.density_fn_ = std::move(density);
    const int decades = static_cast<int>(std::ceil(std::log10(s_max / s_min)));
    const int m = decades * points_per_decade + 1;
    A.grid_.resize(m);
    A.dens_.resize(m);
    const double la = std::log(s_min), lb = std::log(s_max);
    for (int i = 0; i < m; ++i) {
        A.grid_[i] = std::exp(la + (lb - la) * i / (m - 1));
        A.dens_[i] = A.density_fn_(A.grid_[i]);
        if (!(A.dens_[i] >= 0.0))
            throw std::domain_error("custom density must be nonnegative");
        if (i > 0 && A.dens_[i] < A.dens_[i - 1] * (1.0 - 1e-12))
            throw std::domain_error("custom density must be nondecreasing");
    }
    A.cum_.resize(m);
    // a(0)=0; treat the density as linear on [0, s_min].
    A.cum_[0] = 0.5 * A.grid_[0] * A.dens_[0];
    for (int i = 1; i < m; ++i)
        A.cum_[i] = A.cum_[i - 1] + 0.5 * (A.dens_[i] + A.dens_[i - 1]) *
                                        (A.grid_[i] - A.grid_[i - 1]);
    return A;
}

double NFunction::custom_eval(double t) const {
    if (t <= grid_.front())
        return 0.5 * dens_.front() / grid_.front() * t * t;
    if (t >= grid_.back())
        return cum_.back() + dens_.back() * (t - grid_.back());
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - grid_.begin());
    const double s0 = grid_[i - 1], s1 = grid_[i];
    const double w = (t - s0) / (s1 - s0);
    const double dt_dens = dens_[i - 1] + w * (dens_[i] - dens_[i - 1]);
    return cum_[i - 1] + 0.5 * (dens_[i - 1] + dt_dens) * (t - s0);
}

double NFunction::operator()(double t) const {
    if (t < 0.0) throw std::domain_error("N-function argument must be >= 0");
    switch (family_) {
        case Family::Power:
            return std::pow(t, p_);
        case Family::ExpPower:
            return std::expm1(std::pow(t, beta_));
        case Family::Custom:
            return custom_eval(t);
    }
    return 0.0;
}

double NFunction::density(double t) const {
    if (t < 0.0) throw std::domain_error("N-function argument must be >= 0");
    switch (family_) {
        case Family::Power:
            return p_ * std::pow(t, p_ - 1.0);
        case Family::ExpPower: {
            if (t == 0.0) return beta_ == 1.0 ? 1.0 : 0.0;
            const double tb = std::pow(t, beta_);
            return beta_ * std::pow(t, beta_ - 1.0) * std::exp(tb);
        }
        case Family::Custom: {
            if (t <= grid_.front()) return dens_.front() * t / grid_.front();
            if (t >= grid_.back()) return dens_.back();
            const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
            const std::size_t i = static_cast<std::size_t>(it - grid_.begin());
            const double w = (t - grid_[i - 1]) / (grid_[i] - grid_[i - 1]);
            return dens_[i - 1] + w * (dens_[i] - dens_[i - 1]);
        }
    }
    return 0.0;
}

double NFunction::inverse(double s) const {
    if (s < 0.0) throw std::domain_error("inverse argument must be >= 0");
    if (s == 0.0) return 0.0;
    switch (family_) {
        case Family::Power:
            return std::pow(s, 1.0 / p_);
        case Family::ExpPower:
            return std::pow(std::log1p(s), 1.0 / beta_);
        case Family::Custom:
            return invert_increasing([this](double t) { return custom_eval(t); }, s,
                                     1e-13, grid_.front());
    }
    return 0.0;
}

double NFunction::conjugate(double s) const {
    if (s < 0.0) throw std::domain_error("conjugate argument must be >= 0");
    if (s == 0.0) return 0.0;
    if (family_ == Family::Power) {
        const double t_star = std::pow(s / p_, 1.0 / (p_ - 1.0));
        return s * t_star - std::pow(t_star, p_);
    }
    if (family_ == Family::ExpPower && beta_ == 1.0) {
        return s <= 1.0 ? 0.0 : s * std::log(s) - s + 1.0;
    }
    // The map t -> st - A(t) is concave; bracket the maximizer where the
    // density overtakes s, then run golden-section search.
    double hi = 1.0;
    int guard = 0;
    while (density(hi) < s) {
        hi *= 2.0;
        if (++guard > 300) break;
    }
    const auto target = [&](double t) { return s * t - (*this)(t); };
    const double t_star =
        golden_section_max(target, 0.0, hi, 1e-10 * std::max(1.0, hi));
    return std::max(0.0, target(t_star));
}

double NFunction::conjugate_inverse(double s) const {
    if (s < 0.0) throw std::domain_error("conjugate_inverse argument must be >= 0");
    if (s == 0.0) {
        // inf{t : A_*(t) > 0}: the conjugate vanishes on [0, a(0+)].
        return invert_increasing([this](double t) { return conjugate(t); },
                                 std::numeric_limits<double>::min(), 1e-13);
    }
    return invert_increasing([this](double t) { return conjugate(t); }, s, 1e-13);
}

NFunction NFunction::conjugate_function() const {
    NFunction self = *this;
    return NFunction::custom(
        [self](double s) {
            // left-difference of the conjugate; nondecreasing by convexity
            const double h = std::max(1e-7, 1e-7 * s);
            return std::max(0.0, (self.conjugate(s + h) - self.conjugate(s)) / h);
        },
        1e-6, 1e8, 32);
}

std::string NFunction::describe() const {
    switch (family_) {
        case Family::Power:
            return "power p=" + std::to_string(p_);
        case Family::ExpPower:
            return "exp_power beta=" + std::to_string(beta_);
        case Family::Custom:
            return "custom";
    }
    return "";
}

double luxemburg_norm(std::span<const double> values, double cell_volume,
                      const NFunction& A) {
    if (!(cell_volume > 0.0)) throw std::domain_error("cell_volume must be > 0");
    double max_abs = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) throw std::domain_error("samples must be finite");
        max_abs = std::max(max_abs, std::abs(v));
    }
    if (max_abs == 0.0) return 0.0;

    // I_A(f/a) <= 1, with early exit once the running sum exceeds 1.
    const auto modular_leq_one = [&](double a) {
        double sum = 0.0;
        for (double v : values) {
            if (v == 0.0) continue;
            sum += A(std::abs(v) / a) * cell_volume;
            if (!(sum <= 1.0)) return false;
        }
        return true;
    };

    // Indicator sandwich: a single cell at height max|f| forces
    // a >= max/A^{-1}(1/cell); the full-measure indicator gives
    // a <= max/A^{-1}(1/total).
    const double total = cell_volume * static_cast<double>(values.size());
    double lo = max_abs / A.inverse(1.0 / cell_volume);
    double hi = max_abs / A.inverse(1.0 / total);
    if (modular_leq_one(lo)) return lo;
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (modular_leq_one(mid) ? hi : lo) = mid;
    }
    return hi;
}

double luxemburg_norm(const MeasuredSamples& f, const NFunction& A) {
    return luxemburg_norm(std::span<const double>(f.values), f.cell_volume, A);
}

}  // namespace psidec
