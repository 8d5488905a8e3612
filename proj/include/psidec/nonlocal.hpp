#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "psidec/decomp.hpp"
#include "psidec/grid.hpp"
#include "psidec/symbols.hpp"

namespace psidec {

struct FixedPointDivergence : std::runtime_error {
    FixedPointDivergence(double factor, const std::string& what)
        : std::runtime_error(what), contraction_factor(factor) {}
    double contraction_factor;
};

/// Coefficient a(x,z) with its lower bound c0 on the ball of radius rho0,
/// global bound c0^{-1}, and Holder-in-x constant with respect to the
/// intrinsic scale.
class CoefficientField {
public:
    CoefficientField(std::function<double(Vec, Vec)> a, double c0, double rho0,
                     double holder_const, double alpha,
                     bool x_dependent = true);

    static CoefficientField constant(double c);
    /// a(x, z) = profile(x), independent of z
    static CoefficientField x_profile(std::function<double(Vec)> profile,
                                      double c0, double rho0,
                                      double holder_const, double alpha);

    double operator()(Vec x, Vec z) const { return a_(x, z); }
    double c0() const { return c0_; }
    double rho0() const { return rho0_; }
    double holder_const() const { return holder_const_; }
    double alpha() const { return alpha_; }
    bool x_dependent() const { return x_dependent_; }

    /// sampled invariant check: a >= c0 on B_rho0, a <= 1/c0 everywhere
    void spot_check(const GridField& grid, double z_max) const;

private:
    std::function<double(Vec, Vec)> a_;
    double c0_, rho0_, holder_const_, alpha_;
    bool x_dependent_;
};

/// Radial-angular quadrature of the jump measure on eps <= |z| <= z_max.
/// node_weight[q] already contains the trapezoid weight, the kernel value
/// j(r_q), the surface factor r^{d-1} and the angular weight, so that
///   ∫_{eps<=|z|<=z_max} F(z) J(z) dz  ≈  Σ_q Σ_dir node_weight[q] F(r_q dir).
struct KernelQuadrature {
    int dim = 1;
    double eps = 1e-3;
    double z_max = 8.0;
    std::vector<double> radius;
    std::vector<double> node_weight;
    std::vector<Vec> directions;
    double small_ball_first_moment = 0.0;  // ∫_{|z|<eps} |z| J(z) dz
    double outer_tail_mass = 0.0;          // ∫_{|z|>z_max} J(z) dz

    static KernelQuadrature build(const SubordinatorSpec& spec, double eps,
                                  double z_max, int points_per_decade = 512,
                                  int angular_points = 64);
};

/// Symbol m(xi) = ∫ (e^{i z·xi} - 1) a0(z) J(z) dz of the spatially
/// homogeneous generator (quadrature with small-ball cutoff).
std::complex<double> generator_symbol(const KernelQuadrature& quad,
                                      const std::function<double(Vec)>& a0,
                                      Vec xi);

struct ApplyResult {
    GridField field;
    double eps_bias;   // sup|grad u| * sup a * ∫_{|z|<eps}|z|J
    double tail_bias;  // 2 sup|u| * sup a * ∫_{|z|>z_max} J
};

/// L u(x) = ∫ (u(x+z) - u(x)) a(x,z) J(z) dz by quadrature; u(x+z) via the
/// spectral phase shift.
ApplyResult apply_generator(const GridField& u, const CoefficientField& a,
                            const KernelQuadrature& quad);

enum class SymbolRoute { ClosedFormPsi, Quadrature };

struct SolveResult {
    GridField u;
    int iterations = 0;
    double contraction = 0.0;
    double residual_linf = -1.0;
    std::size_t frozen_index = 0;
    double oscillation = 0.0;
    double eps_bias = 0.0;
};

/// u = F^{-1}( F f / (lambda - m) ) for the z-only coefficient a0.  With
/// route ClosedFormPsi and a0 ≡ 1 the exact symbol -psi(|xi|) is used;
/// otherwise m comes from generator_symbol on the given quadrature.
/// d = 2 with a non-unit a0 requires the quadrature route and a radial a0.
GridField solve_homogeneous(const GridField& f, double lambda,
                            const SubordinatorSpec& spec,
                            const std::function<double(Vec)>& a0 = nullptr,
                            SymbolRoute route = SymbolRoute::ClosedFormPsi,
                            const KernelQuadrature* quad = nullptr);

struct SolverConfig {
    double lambda = 8.0;
    double eps = 1e-3;
    double fixed_point_tol = 1e-10;
    int max_iterations = 60;
    std::optional<std::size_t> frozen_index;
    int freeze_candidates = 16;
    double z_max = 0.0;  // 0 -> L/2
    int points_per_decade = 512;
    int angular_points = 64;
};

/// Frozen-coefficient Picard iteration for lambda u - L_a u = f:
///   u_{k+1} = R_{a0}( f + (L_a - L_{a0}) u_k ),   a0(z) = a(x*, z).
/// Throws FixedPointDivergence when the update ratio stays >= 1 for three
/// consecutive iterations.
SolveResult solve_inhomogeneous(const GridField& f,
                                const CoefficientField& a,
                                const SubordinatorSpec& spec,
                                const SolverConfig& config);

struct SchauderReport {
    double lambda = 0.0;
    double beta = 0.0;
    double f_norm_beta = 0.0;
    double u_norm_beta = 0.0;
    double u_norm_one_beta = 0.0;
    double ratio = 0.0;  // (lambda u_beta + u_{1+beta}) / f_beta; NaN for f=0
    int iterations = 0;
    double residual_linf = 0.0;
};

/// Solve and assemble the regularity diagnostics at order beta: the order-
/// beta norm is the block norm for beta > 0 and the sup norm for beta = 0;
/// the order-(1+beta) norm is always the block norm.
SchauderReport schauder_report(const GridField& f, const CoefficientField& a,
                               const SubordinatorSpec& spec,
                               const SolverConfig& config, double beta);

}  // namespace psidec
