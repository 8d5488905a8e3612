#include "psidec/decomp.hpp"

#include <algorithm>
#include <cmath>

#include "psidec/quadrature.hpp"

namespace psidec {

namespace {

double bump_blend(double t) {
    // smooth monotone 0 -> 1 transition on [0, 1]
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

double norm2(Vec v) { return std::sqrt(v[0] * v[0] + v[1] * v[1]); }

}  // namespace

double CutoffProfile::operator()(double r) const {
    if (r <= 0.75) return 1.0;
    if (r >= 1.0) return 0.0;
    return bump_blend(4.0 * (1.0 - r));
}

BlockScales make_block_scales(const std::function<double(double)>& inverse_symbol,
                              double nyquist, const std::string& label) {
    BlockScales s;
    s.nyquist = nyquist;
    s.label = label;
    if (inverse_symbol(1.0) > nyquist)
        throw OutOfBandError("grid does not resolve the level -1 band of " +
                             label);
    int j = 0;
    while (inverse_symbol(std::pow(2.0, j + 1)) <= nyquist) ++j;
    s.j_max = j - 1;
    for (int i = 0; i <= s.j_max + 1; ++i)
        s.thresholds.push_back(inverse_symbol(std::pow(2.0, i)));
    return s;
}

BlockScales psi_scales(const SubordinatorSpec& spec, const GridField& grid) {
    return make_block_scales(
        [&spec](double y) { return spec.psi_inverse(y); }, grid.nyquist(),
        "psi[" + spec.name() + "]");
}

BlockScales dyadic_scales(const GridField& grid) {
    return make_block_scales([](double y) { return y; }, grid.nyquist(),
                             "dyadic");
}

GridField band_block(const GridField& f, int j, const BlockScales& scales,
                     const CutoffProfile& chi) {
    if (j < -1) throw std::domain_error("block level must be >= -1");
    if (j > scales.j_max)
        throw OutOfBandError("level " + std::to_string(j) +
                             " is out of band for this grid; admissible "
                             "j_max = " +
                             std::to_string(scales.j_max) + " (" +
                             scales.label + ")");
    if (j == -1) {
        const double t0 = scales.threshold(0);
        return f.apply_multiplier(
            [&](Vec xi) { return std::complex<double>(chi(norm2(xi) / t0)); });
    }
    const double tj = scales.threshold(j);
    const double tj1 = scales.threshold(j + 1);
    return f.apply_multiplier([&](Vec xi) {
        const double r = norm2(xi);
        return std::complex<double>(chi(r / tj1) - chi(r / tj));
    });
}

GridField psi_block(const GridField& f, int j, const SubordinatorSpec& spec,
                    const CutoffProfile& chi) {
    return band_block(f, j, psi_scales(spec, f), chi);
}

GridField classical_block(const GridField& f, int j, const CutoffProfile& chi) {
    return band_block(f, j, dyadic_scales(f), chi);
}

DecompositionStack decompose(const GridField& f, const BlockScales& scales,
                             const CutoffProfile& chi) {
    DecompositionStack stack;
    stack.scales = scales;
    stack.blocks.reserve(static_cast<std::size_t>(scales.j_max) + 2);
    for (int j = -1; j <= scales.j_max; ++j)
        stack.blocks.push_back(band_block(f, j, scales, chi));
    return stack;
}

double besov_norm(const DecompositionStack& stack, double s,
                  const std::optional<NFunction>& A) {
    double sup = 0.0;
    const double cell = stack.blocks.front().cell_volume();
    for (int j = -1; j <= stack.j_max(); ++j) {
        const GridField& b = stack.block(j);
        const double nrm =
            A ? luxemburg_norm(b.values(), cell, *A) : b.max_abs();
        sup = std::max(sup, std::pow(2.0, j * s) * nrm);
    }
    return sup;
}

double besov_norm(const GridField& f, double s, const std::optional<NFunction>& A,
                  const BlockScales& scales, const CutoffProfile& chi) {
    return besov_norm(decompose(f, scales, chi), s, A);
}

namespace {

/// Deterministic set of integer offsets 1..k_max: all small ones, then
/// log-spaced.
std::vector<int> offset_set(int k_max) {
    std::vector<int> ks;
    for (int k = 1; k <= std::min(48, k_max); ++k) ks.push_back(k);
    double k = 48.0;
    while (k < k_max) {
        k *= 1.18;
        const int ki = std::min(k_max, static_cast<int>(k));
        if (ks.empty() || ki != ks.back()) ks.push_back(ki);
    }
    return ks;
}

}  // namespace

double holder_norm(const GridField& f, double s,
                   const std::function<double(double)>& rho,
                   std::size_t max_pairs) {
    if (!(s > 0.0)) throw std::domain_error("holder_norm needs s > 0");
    const int n = f.n();
    const double h = f.spacing();
    double quot = 0.0;

    const auto visit = [&](std::size_t i_a, std::size_t i_b, double dist) {
        const double diff = std::abs(f[i_a] - f[i_b]);
        if (diff == 0.0) return;
        quot = std::max(quot, diff / std::pow(rho(dist), s));
    };

    if (f.dim() == 1) {
        const auto ks = offset_set(n / 4);
        const std::size_t stride =
            std::max<std::size_t>(1, ks.size() * static_cast<std::size_t>(n) /
                                         max_pairs);
        for (int k : ks) {
            const double dist = k * h;  // <= L/4, already the torus distance
            for (std::size_t i = 0; i < static_cast<std::size_t>(n); i += stride)
                visit(i, (i + static_cast<std::size_t>(k)) % n, dist);
        }
    } else {
        const auto ks = offset_set(n / 4);
        // axis and diagonal offsets
        std::vector<std::array<int, 2>> offsets;
        for (int k : ks) {
            offsets.push_back({k, 0});
            offsets.push_back({0, k});
            if (k <= static_cast<int>(n / (4.0 * M_SQRT2))) {
                offsets.push_back({k, k});
                offsets.push_back({k, -k});
            }
        }
        const std::size_t total = static_cast<std::size_t>(n) * n;
        const std::size_t stride =
            std::max<std::size_t>(1, offsets.size() * total / max_pairs);
        for (const auto& off : offsets) {
            const double dist = h * std::hypot(off[0], off[1]);
            for (std::size_t i = 0; i < total; i += stride) {
                const int ix = static_cast<int>(i) / n, iy = static_cast<int>(i) % n;
                const int jx = (ix + off[0] + n) % n, jy = (iy + off[1] + n) % n;
                visit(i, static_cast<std::size_t>(jx) * n + jy, dist);
            }
        }
    }
    return f.max_abs() + quot;
}

double holder_norm(const GridField& f, double s, const SubordinatorSpec& spec,
                   std::size_t max_pairs) {
    return holder_norm(
        f, s, [&spec](double r) { return spec.rho(r); }, max_pairs);
}

double bessel_norm(const GridField& f, const NFunction& A,
                   const SubordinatorSpec& spec) {
    GridField g = f.apply_multiplier([&spec](Vec xi) {
        const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
        return std::complex<double>(1.0 + spec.psi(r));
    });
    return luxemburg_norm(g.values(), g.cell_volume(), A);
}

double xspace_norm(const GridField& f, double s, XSpaceWeight weight) {
    const auto scales = dyadic_scales(f);
    const auto stack = decompose(f, scales);
    double sup = 0.0;
    for (int j = -1; j <= scales.j_max; ++j) {
        const double w = weight == XSpaceWeight::TwoPlusJ
                             ? 2.0 + j
                             : std::max(1.0, static_cast<double>(j));
        sup = std::max(sup, std::pow(w, s) * stack.block(j).max_abs());
    }
    return sup;
}

Paraproduct paraproduct(const GridField& f, const GridField& g,
                        const SubordinatorSpec& spec,
                        const CutoffProfile& chi) {
    if (!f.same_grid(g)) throw std::domain_error("paraproduct: grid mismatch");
    const auto scales = psi_scales(spec, f);

    // eq-separation constant: smallest N >= 1 with
    // inv(2^{1-N} lambda) <= (3/8) inv(lambda) across the band range.
    int N = 0;
    for (N = 1; N <= 40; ++N) {
        bool ok = true;
        for (int j = 0; j <= scales.j_max + 1 && ok; ++j) {
            const double lam = std::pow(2.0, j);
            ok = spec.psi_inverse(std::pow(2.0, 1 - N) * lam) <=
                 0.375 * spec.psi_inverse(lam);
        }
        if (ok) break;
    }
    if (N > 40)
        throw std::runtime_error("paraproduct: no admissible separation N");

    const auto fs = decompose(f, scales, chi);
    const auto gs = decompose(g, scales, chi);
    const int jm = scales.j_max;

    // partial sums S_k = sum_{l < k-N} Pi_l
    std::vector<GridField> partial_f, partial_g;
    partial_f.reserve(static_cast<std::size_t>(jm) + 2);
    partial_g.reserve(static_cast<std::size_t>(jm) + 2);
    GridField acc_f(f.dim(), f.n(), f.L()), acc_g(f.dim(), f.n(), f.L());
    for (int l = -1; l <= jm; ++l) {
        partial_f.push_back(acc_f);  // S at k = l + N + 1 uses levels < k-N
        partial_g.push_back(acc_g);
        acc_f += fs.block(l);
        acc_g += gs.block(l);
    }
    const auto low_sum = [&](const std::vector<GridField>& partial, int k) {
        const int idx = std::clamp(k - N + 1, 0, jm + 1);
        return partial[static_cast<std::size_t>(idx)];
    };

    Paraproduct out{GridField(f.dim(), f.n(), f.L()),
                    GridField(f.dim(), f.n(), f.L()),
                    GridField(f.dim(), f.n(), f.L()), N, 0.0};
    for (int k = -1; k <= jm; ++k) {
        out.low_high += low_sum(partial_f, k).pointwise_product(gs.block(k));
        out.high_low += low_sum(partial_g, k).pointwise_product(fs.block(k));
        for (int l = std::max(-1, k - N); l <= std::min(jm, k + N); ++l)
            out.resonant += fs.block(k).pointwise_product(gs.block(l));
    }

    GridField recon = out.low_high;
    recon += out.high_low;
    recon += out.resonant;
    GridField prod = f.pointwise_product(g);
    prod -= recon;
    out.residual_linf = prod.max_abs();
    return out;
}

CounterexampleField counterexample_field(double L, int n, int j_trunc, int dim) {
    GridField probe(dim, n, L);
    const auto dyn = dyadic_scales(probe);
    if (j_trunc < 1 || j_trunc > dyn.j_max + 1)
        throw OutOfBandError("j_trunc=" + std::to_string(j_trunc) +
                             " out of band; grid admits at most " +
                             std::to_string(dyn.j_max + 1));

    // radial bump: C_c^inf((1/2,3/4)), = 1 on [9/16, 11/16]
    const auto bump = [](double r) {
        if (r <= 0.5 || r >= 0.75) return 0.0;
        if (r < 0.5625) return bump_blend((r - 0.5) * 16.0);
        if (r <= 0.6875) return 1.0;
        return bump_blend((0.75 - r) * 16.0);
    };

    const std::size_t total = dim == 1 ? static_cast<std::size_t>(n)
                                       : static_cast<std::size_t>(n) * n;
    std::vector<std::complex<double>> spec(total);
    const double coeff_scale =
        std::pow(static_cast<double>(n) / L, dim);  // n^d / L^d
    for (std::size_t k = 0; k < total; ++k) {
        const Vec xi = probe.frequency(k);
        const double r = norm2(xi);
        double sum = 0.0;
        for (int j = 1; j <= j_trunc; ++j) {
            const double scale = std::pow(2.0, j);
            if (r > 0.75 * scale) continue;
            sum += bump(r / scale) / (j * std::pow(scale, dim));
        }
        spec[k] = coeff_scale * sum;
    }

    CounterexampleField out{GridField::from_spectrum(dim, n, L, spec), 0.0, 0.0,
                            j_trunc};

    // profile(0) = (2 pi)^{-d} \int bump(|xi|) dxi, the profile's sup
    if (dim == 1) {
        out.profile_max =
            adaptive_log_quadrature(bump, 0.5, 0.75, 1e-10) / M_PI;
    } else {
        out.profile_max = adaptive_log_quadrature(
                              [&](double r) { return bump(r) * r; }, 0.5, 0.75,
                              1e-10) /
                          (2.0 * M_PI);
    }

    // |profile(x)| <= c2 / |x|^2 with c2 = (2 pi)^{-d} \int |bump''|;
    // omitted terms at |x| >= h sum to a convergent series.
    double c2 = 0.0;
    {
        const int m = 20001;
        const double dr = 0.25 / (m - 1);
        for (int i = 1; i + 1 < m; ++i) {
            const double r = 0.5 + i * dr;
            const double dd =
                (bump(r + dr) - 2.0 * bump(r) + bump(r - dr)) / (dr * dr);
            c2 += std::abs(dd) * dr * (dim == 1 ? 1.0 : r);
        }
        c2 /= dim == 1 ? M_PI : 2.0 * M_PI;
    }
    const double h = L / n;
    double tail = 0.0;
    for (int j = j_trunc + 1; j <= j_trunc + 80; ++j)
        tail += std::min(out.profile_max, c2 / std::pow(std::pow(2.0, j) * h, 2)) / j;
    out.truncation_tail = tail;

    // the defining series is 0 at the origin by fiat
    auto vals = std::vector<double>(out.field.values().begin(),
                                    out.field.values().end());
    vals[0] = 0.0;
    out.field = GridField::from_values(dim, n, L, std::move(vals));
    return out;
}

double spectral_mass_outside(const GridField& f, double r_lo, double r_hi) {
    const auto& spec = f.spectrum();
    double inside = 0.0, outside = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const Vec xi = f.frequency(k);
        const double r = norm2(xi);
        const double m = std::norm(spec[k]);
        (r >= r_lo && r <= r_hi ? inside : outside) += m;
    }
    const double total = inside + outside;
    return total == 0.0 ? 0.0 : outside / total;
}

}  // namespace psidec
