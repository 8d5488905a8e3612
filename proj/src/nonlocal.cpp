#include "psidec/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psidec/quadrature.hpp"

namespace psidec {

CoefficientField::CoefficientField(std::function<double(Vec, Vec)> a, double c0,
                                   double rho0, double holder_const,
                                   double alpha, bool x_dependent)
    : a_(std::move(a)),
      c0_(c0),
      rho0_(rho0),
      holder_const_(holder_const),
      alpha_(alpha),
      x_dependent_(x_dependent) {
    if (!(c0 > 0.0 && c0 < 1.0)) throw std::domain_error("need c0 in (0,1)");
    if (!(rho0 > 0.0 && rho0 < 1.0)) throw std::domain_error("need rho0 in (0,1)");
    if (!(alpha > 0.0)) throw std::domain_error("need alpha > 0");
}

CoefficientField CoefficientField::constant(double c) {
    if (!(c > 0.0)) throw std::domain_error("constant coefficient must be > 0");
    const double c0 = 0.99 * std::min(c, 1.0 / c);
    return CoefficientField([c](Vec, Vec) { return c; }, std::min(c0, 0.99),
                            0.5, 1.0, 1.0, false);
}

CoefficientField CoefficientField::x_profile(std::function<double(Vec)> profile,
                                             double c0, double rho0,
                                             double holder_const, double alpha) {
    return CoefficientField(
        [p = std::move(profile)](Vec x, Vec) { return p(x); }, c0, rho0,
        holder_const, alpha, true);
}

void CoefficientField::spot_check(const GridField& grid, double z_max) const {
    const int probes = 64;
    for (int i = 0; i < probes; ++i) {
        const Vec x = grid.point((grid.size() * i) / probes);
        for (int k = 0; k < 8; ++k) {
            const double r = rho0_ * (k + 1) / 9.0;
            const double R = z_max * (k + 1) / 8.0;
            for (double sgn : {-1.0, 1.0}) {
                const Vec z_small{sgn * r, 0.0}, z_any{sgn * R, 0.0};
                if (a_(x, z_small) < c0_ - 1e-12)
                    throw std::domain_error("coefficient below c0 inside B_rho0");
                if (a_(x, z_any) > 1.0 / c0_ + 1e-12)
                    throw std::domain_error("coefficient above 1/c0");
            }
        }
    }
}

KernelQuadrature KernelQuadrature::build(const SubordinatorSpec& spec,
                                         double eps, double z_max,
                                         int points_per_decade,
                                         int angular_points) {
    if (!(eps > 0.0 && z_max > eps))
        throw std::domain_error("need 0 < eps < z_max");
    KernelQuadrature q;
    q.dim = spec.dim();
    q.eps = eps;
    q.z_max = z_max;

    const double decades = std::log10(z_max / eps);
    const int m = std::max(8, static_cast<int>(decades * points_per_decade)) + 1;
    const double du = std::log(z_max / eps) / (m - 1);
    q.radius.resize(m);
    q.node_weight.resize(m);
    const double ang_w = q.dim == 1 ? 1.0 : 2.0 * M_PI / angular_points;
    for (int i = 0; i < m; ++i) {
        const double r = eps * std::exp(i * du);
        const double trap = (i == 0 || i == m - 1) ? 0.5 : 1.0;
        q.radius[i] = r;
        // dr = r du on the log grid; surface factor r^{d-1}
        q.node_weight[i] = trap * du * r * std::pow(r, q.dim - 1) * ang_w *
                           jump_kernel(spec, r);
    }
    if (q.dim == 1) {
        q.directions = {Vec{1.0, 0.0}, Vec{-1.0, 0.0}};
    } else {
        q.directions.reserve(static_cast<std::size_t>(angular_points));
        for (int a = 0; a < angular_points; ++a) {
            const double th = 2.0 * M_PI * (a + 0.5) / angular_points;
            q.directions.push_back(Vec{std::cos(th), std::sin(th)});
        }
    }
    q.small_ball_first_moment = kernel_first_moment(spec, eps);
    q.outer_tail_mass = kernel_tail_mass(spec, z_max);
    return q;
}

std::complex<double> generator_symbol(const KernelQuadrature& quad,
                                      const std::function<double(Vec)>& a0,
                                      Vec xi) {
    std::complex<double> m(0.0, 0.0);
    for (std::size_t i = 0; i < quad.radius.size(); ++i) {
        const double r = quad.radius[i];
        const double w = quad.node_weight[i];
        for (const Vec& dir : quad.directions) {
            const Vec z{r * dir[0], r * dir[1]};
            const double phase = z[0] * xi[0] + z[1] * xi[1];
            const double av = a0 ? a0(z) : 1.0;
            m += w * av *
                 std::complex<double>(std::cos(phase) - 1.0, std::sin(phase));
        }
    }
    return m;
}

ApplyResult apply_generator(const GridField& u, const CoefficientField& a,
                            const KernelQuadrature& quad) {
    const std::size_t total = u.size();
    GridField out(u.dim(), u.n(), u.L());
    std::vector<double> acc(total, 0.0);
    u.spectrum();  // ensure the transform is cached before the shift loop

    for (std::size_t q = 0; q < quad.radius.size(); ++q) {
        const double r = quad.radius[q];
        const double w = quad.node_weight[q];
        if (w == 0.0) continue;
        for (const Vec& dir : quad.directions) {
            const Vec z{r * dir[0], r * dir[1]};
            const GridField shifted = u.shifted(z);
            if (a.x_dependent()) {
                for (std::size_t i = 0; i < total; ++i)
                    acc[i] += w * (shifted[i] - u[i]) * a(u.point(i), z);
            } else {
                const double av = a(Vec{0.0, 0.0}, z);
                for (std::size_t i = 0; i < total; ++i)
                    acc[i] += w * av * (shifted[i] - u[i]);
            }
        }
    }
    ApplyResult res{GridField::from_values(u.dim(), u.n(), u.L(), std::move(acc)),
                    0.0, 0.0};

    double grad_sup = 0.0;
    for (int axis = 0; axis < u.dim(); ++axis) {
        const GridField g = u.apply_multiplier([axis](Vec xi) {
            return std::complex<double>(0.0, xi[static_cast<std::size_t>(axis)]);
        });
        grad_sup = std::max(grad_sup, g.max_abs());
    }
    const double sup_a = 1.0 / a.c0();
    res.eps_bias = grad_sup * sup_a * quad.small_ball_first_moment;
    res.tail_bias = 2.0 * u.max_abs() * sup_a * quad.outer_tail_mass;
    return res;
}

namespace {

/// resolvent for a diagonal symbol table m[k]
GridField resolvent_with_symbol(const GridField& f, double lambda,
                                const std::vector<std::complex<double>>& m) {
    const auto& spec = f.spectrum();
    std::vector<std::complex<double>> out(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k)
        out[k] = spec[k] / (lambda - m[k]);
    return GridField::from_spectrum(f.dim(), f.n(), f.L(), out);
}

/// symbol table on all grid frequencies; uses Hermitian symmetry in d=1
std::vector<std::complex<double>> symbol_table(
    const GridField& grid, const KernelQuadrature& quad,
    const std::function<double(Vec)>& a0) {
    const std::size_t total = grid.size();
    std::vector<std::complex<double>> m(total);
    if (grid.dim() == 1) {
        const int n = grid.n();
        for (int k = 0; k <= n / 2; ++k) {
            const Vec xi = grid.frequency(static_cast<std::size_t>(k));
            m[static_cast<std::size_t>(k)] = generator_symbol(quad, a0, xi);
        }
        for (int k = n / 2 + 1; k < n; ++k)
            m[static_cast<std::size_t>(k)] =
                std::conj(m[static_cast<std::size_t>(n - k)]);
    } else {
        for (std::size_t k = 0; k < total; ++k)
            m[k] = generator_symbol(quad, a0, grid.frequency(k));
    }
    return m;
}

std::size_t candidate_index(const GridField& grid, int c, int count) {
    return (grid.size() * static_cast<std::size_t>(c)) /
           static_cast<std::size_t>(count);
}

}  // namespace

GridField solve_homogeneous(const GridField& f, double lambda,
                            const SubordinatorSpec& spec,
                            const std::function<double(Vec)>& a0,
                            SymbolRoute route, const KernelQuadrature* quad) {
    if (!(lambda > 0.0)) throw std::domain_error("need lambda > 0");
    if (route == SymbolRoute::ClosedFormPsi && !a0) {
        return f.apply_multiplier([&](Vec xi) {
            const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
            return std::complex<double>(1.0 / (lambda + spec.psi(r)));
        });
    }
    if (!quad)
        throw std::domain_error(
            "quadrature route needs a KernelQuadrature instance");
    if (f.dim() == 2 && a0)
        throw std::domain_error(
            "d=2 homogeneous solve supports only a0 == 1 (pass a0 = nullptr)");
    const auto m = symbol_table(f, *quad, a0);
    return resolvent_with_symbol(f, lambda, m);
}

SolveResult solve_inhomogeneous(const GridField& f, const CoefficientField& a,
                                const SubordinatorSpec& spec,
                                const SolverConfig& config) {
    const double lambda = config.lambda;
    if (!(lambda > 0.0)) throw std::domain_error("need lambda > 0");
    const double z_max = config.z_max > 0.0 ? config.z_max : f.L() / 2.0;
    if (!(config.eps < 4.0 * f.spacing()))
        throw std::domain_error("small-jump cutoff must be below 4x grid spacing");
    const KernelQuadrature quad = KernelQuadrature::build(
        spec, config.eps, z_max, config.points_per_decade,
        config.angular_points);

    const auto frozen_symbol = [&](std::size_t idx) {
        const Vec x_star = f.point(idx);
        return symbol_table(f, quad,
                            [&a, x_star](Vec z) { return a(x_star, z); });
    };

    // Freeze point: either configured, or the candidate with the smallest
    // one-step update measured on the homogeneous resolvent of f.
    std::size_t frozen = 0;
    if (config.frozen_index) {
        frozen = *config.frozen_index;
    } else if (!a.x_dependent()) {
        frozen = 0;
    } else {
        const GridField probe =
            solve_homogeneous(f, lambda, spec, nullptr, SymbolRoute::ClosedFormPsi);
        const ApplyResult la_probe =
            apply_generator(probe, a, quad);  // shared across candidates
        double best = std::numeric_limits<double>::infinity();
        const double probe_norm = std::max(probe.max_abs(), 1e-300);
        for (int c = 0; c < config.freeze_candidates; ++c) {
            const std::size_t idx = candidate_index(f, c, config.freeze_candidates);
            const auto m0 = frozen_symbol(idx);
            // (L_a - L_{a0}) probe, with L_{a0} probe from the symbol table
            GridField l0_probe = [&] {
                const auto& sp = probe.spectrum();
                std::vector<std::complex<double>> out(sp.size());
                for (std::size_t k = 0; k < sp.size(); ++k) out[k] = m0[k] * sp[k];
                return GridField::from_spectrum(f.dim(), f.n(), f.L(), out);
            }();
            GridField w = la_probe.field;
            w -= l0_probe;
            const GridField step = resolvent_with_symbol(w, lambda, m0);
            const double factor = step.max_abs() / probe_norm;
            if (factor < best) {
                best = factor;
                frozen = idx;
            }
        }
    }

    const Vec x_star = f.point(frozen);
    const auto m0 = frozen_symbol(frozen);
    const CoefficientField diff_coeff(
        [&a, x_star](Vec x, Vec z) { return a(x, z) - a(x_star, z); }, a.c0(),
        a.rho0(), a.holder_const(), a.alpha(), true);

    // measured oscillation sup_{x,z} |a(x,z) - a(x*,z)| on a sample
    double osc = 0.0;
    for (int i = 0; i < 64; ++i) {
        const Vec x = f.point((f.size() * static_cast<std::size_t>(i)) / 64);
        for (int k = 1; k <= 8; ++k) {
            const double r = quad.eps + (z_max - quad.eps) * k / 8.0;
            for (double sgn : {-1.0, 1.0})
                osc = std::max(osc, std::abs(diff_coeff(x, Vec{sgn * r, 0.0})));
        }
    }

    SolveResult res;
    res.frozen_index = frozen;
    res.oscillation = osc;

    GridField u = resolvent_with_symbol(f, lambda, m0);
    double prev_delta = std::numeric_limits<double>::infinity();
    int rising = 0;
    double last_ratio = 0.0;
    for (int it = 1; it <= config.max_iterations; ++it) {
        const ApplyResult pert = apply_generator(u, diff_coeff, quad);
        GridField rhs = f;
        rhs += pert.field;
        GridField next = resolvent_with_symbol(rhs, lambda, m0);
        GridField delta_f = next;
        delta_f -= u;
        const double delta = delta_f.max_abs();
        res.iterations = it;
        u = std::move(next);
        if (delta <= config.fixed_point_tol * std::max(u.max_abs(), 1e-300)) {
            res.contraction = prev_delta < std::numeric_limits<double>::infinity()
                                  ? delta / std::max(prev_delta, 1e-300)
                                  : 0.0;
            break;
        }
        if (std::isfinite(prev_delta)) {
            last_ratio = delta / std::max(prev_delta, 1e-300);
            res.contraction = last_ratio;
            rising = last_ratio >= 1.0 ? rising + 1 : 0;
            if (rising >= 3)
                throw FixedPointDivergence(
                    last_ratio,
                    "frozen-coefficient iteration diverges (update ratio " +
                        std::to_string(last_ratio) +
                        " >= 1 for 3 consecutive iterations); try a larger "
                        "lambda");
        }
        prev_delta = delta;
        if (it == config.max_iterations)
            throw FixedPointDivergence(
                last_ratio, "fixed-point iteration did not converge in " +
                                std::to_string(config.max_iterations) +
                                " iterations");
    }

    // residual lambda u - L_a u - f via the full quadrature operator
    const CoefficientField full_a(
        [&a](Vec x, Vec z) { return a(x, z); }, a.c0(), a.rho0(),
        a.holder_const(), a.alpha(), true);
    const ApplyResult lau = apply_generator(u, full_a, quad);
    GridField resid = u;
    resid *= lambda;
    resid -= lau.field;
    resid -= f;
    res.residual_linf = resid.max_abs();
    res.eps_bias = lau.eps_bias;
    res.u = std::move(u);
    return res;
}

SchauderReport schauder_report(const GridField& f, const CoefficientField& a,
                               const SubordinatorSpec& spec,
                               const SolverConfig& config, double beta) {
    if (beta < 0.0) throw std::domain_error("beta must be >= 0");
    SchauderReport rep;
    rep.lambda = config.lambda;
    rep.beta = beta;

    const SolveResult sol = solve_inhomogeneous(f, a, spec, config);
    rep.iterations = sol.iterations;
    rep.residual_linf = sol.residual_linf;

    const auto scales = psi_scales(spec, f);
    const auto norm_beta = [&](const GridField& g) {
        return beta == 0.0 ? g.max_abs()
                           : besov_norm(g, beta, std::nullopt, scales);
    };
    rep.f_norm_beta = norm_beta(f);
    rep.u_norm_beta = norm_beta(sol.u);
    rep.u_norm_one_beta = besov_norm(sol.u, 1.0 + beta, std::nullopt, scales);
    rep.ratio = rep.f_norm_beta == 0.0
                    ? std::numeric_limits<double>::quiet_NaN()
                    : (config.lambda * rep.u_norm_beta + rep.u_norm_one_beta) /
                          rep.f_norm_beta;
    return rep;
}

}  // namespace psidec
