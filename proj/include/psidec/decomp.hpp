#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "psidec/grid.hpp"
#include "psidec/orlicz.hpp"
#include "psidec/symbols.hpp"

namespace psidec {

struct OutOfBandError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Smooth radial cutoff: chi(r) = 1 for r <= 3/4, 0 for r >= 1, monotone
/// nonincreasing, blended with the standard exponential bump on (3/4, 1).
class CutoffProfile {
public:
    double operator()(double r) const;
};

/// Frequency thresholds of a dyadic-in-level decomposition:
/// thresholds[i] = symbol^{-1}(2^i) for i = 0..j_max+1, where j_max is the
/// largest level whose band fits under the grid Nyquist frequency.
struct BlockScales {
    std::vector<double> thresholds;
    int j_max = -1;
    double nyquist = 0.0;
    std::string label;

    double threshold(int i) const { return thresholds.at(static_cast<std::size_t>(i)); }
};

BlockScales make_block_scales(const std::function<double(double)>& inverse_symbol,
                              double nyquist, const std::string& label);
BlockScales psi_scales(const SubordinatorSpec& spec, const GridField& grid);
BlockScales dyadic_scales(const GridField& grid);

/// Band projection at level j >= -1:
///   j  = -1: F^{-1}(chi(xi / t_0) F f)
///   j >=  0: F^{-1}((chi(xi / t_{j+1}) - chi(xi / t_j)) F f)
/// Throws OutOfBandError when j exceeds scales.j_max (message lists the
/// admissible maximum).
GridField band_block(const GridField& f, int j, const BlockScales& scales,
                     const CutoffProfile& chi = {});

/// psi-dyadic block with scales from the subordinator spec
GridField psi_block(const GridField& f, int j, const SubordinatorSpec& spec,
                    const CutoffProfile& chi = {});

/// classical dyadic block (scales 2^j)
GridField classical_block(const GridField& f, int j,
                          const CutoffProfile& chi = {});

/// All blocks j = -1..j_max of one field, sharing a single forward transform.
struct DecompositionStack {
    BlockScales scales;
    std::vector<GridField> blocks;  // blocks[i] is level i-1

    int j_max() const { return scales.j_max; }
    const GridField& block(int j) const {
        return blocks.at(static_cast<std::size_t>(j + 1));
    }
};

DecompositionStack decompose(const GridField& f, const BlockScales& scales,
                             const CutoffProfile& chi = {});

/// sup_{j} 2^{js} ||Pi_j f||, Luxemburg norm when A is given, max-abs for
/// A = nullopt (the generalized Holder-type block norm).
double besov_norm(const DecompositionStack& stack, double s,
                  const std::optional<NFunction>& A);
double besov_norm(const GridField& f, double s, const std::optional<NFunction>& A,
                  const BlockScales& scales, const CutoffProfile& chi = {});

/// ||f||_inf + sup |f(x)-f(y)| / rho^s(dist(x,y)) over a deterministic
/// stride subsample of pairs with torus separation up to L/4 (at most
/// max_pairs pairs).
double holder_norm(const GridField& f, double s,
                   const std::function<double(double)>& rho,
                   std::size_t max_pairs = 1000000);
double holder_norm(const GridField& f, double s, const SubordinatorSpec& spec,
                   std::size_t max_pairs = 1000000);

/// Luxemburg norm of (1 + psi(sqrt(-Laplace))) f
double bessel_norm(const GridField& f, const NFunction& A,
                   const SubordinatorSpec& spec);

enum class XSpaceWeight { TwoPlusJ, MaxOneJ };

/// sup_j w(j)^s ||Delta_j f||_inf over classical blocks, with
/// w(j) = 2+j (TwoPlusJ) or max{1,j} (MaxOneJ).
double xspace_norm(const GridField& f, double s,
                   XSpaceWeight weight = XSpaceWeight::TwoPlusJ);

struct Paraproduct {
    GridField low_high;    // T_f g
    GridField high_low;    // T_g f
    GridField resonant;    // R(f, g)
    int separation;        // N
    double residual_linf;  // ||f g - (T_f g + T_g f + R)||_inf
};

/// Bony-type splitting of f*g along the psi-decomposition.  N is found by
/// direct search over the grid's band range so that
/// inv(2^{1-N} lambda) <= (3/8) inv(lambda) for lambda = 2^j.
Paraproduct paraproduct(const GridField& f, const GridField& g,
                        const SubordinatorSpec& spec,
                        const CutoffProfile& chi = {});

struct CounterexampleField {
    GridField field;
    double profile_max;      // sup |profile| = profile(0)
    double truncation_tail;  // bound on the omitted terms away from 0
    int j_trunc;
};

/// Lacunary sum f(x) = sum_{j=1..J} j^{-1} profile(2^j x) (f(0) := 0), where
/// the profile is the inverse transform of a radial bump supported in the
/// annulus 1/2 < |xi| < 3/4.  Unbounded near 0 like log log(1/|x|) yet with
/// bounded weighted block norms.
CounterexampleField counterexample_field(double L, int n, int j_trunc,
                                         int dim = 1);

/// Fraction of spectral mass of f outside the annulus [r_lo, r_hi]
/// (relative to total mass); used by band-support checks.
double spectral_mass_outside(const GridField& f, double r_lo, double r_hi);

}  // namespace psidec
