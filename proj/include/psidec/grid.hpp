#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace psidec {

using Vec = std::array<double, 2>;  // point in R^d, second entry unused when d=1

/// Real-valued function sampled on a periodic uniform grid (torus [0,L)^d),
/// with a lazily computed discrete Fourier transform.  n must be a power of
/// two and d in {1,2}.  Values are immutable after construction.
class GridField {
public:
    GridField(int dim, int n, double L);  // zero field
    static GridField from_values(int dim, int n, double L,
                                 std::vector<double> values);
    static GridField from_function(int dim, int n, double L,
                                   const std::function<double(Vec)>& f);
    /// spectrum[k] must equal the forward DFT of the values.
    static GridField from_spectrum(int dim, int n, double L,
                                   const std::vector<std::complex<double>>& spec);

    int dim() const { return dim_; }
    int n() const { return n_; }
    double L() const { return L_; }
    std::size_t size() const { return values_.size(); }
    double spacing() const { return L_ / n_; }
    double cell_volume() const;
    /// largest frequency magnitude representable along an axis, pi*n/L
    double nyquist() const { return M_PI * n_ / L_; }

    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    /// coordinates of grid index (flattened row-major for d=2)
    Vec point(std::size_t i) const;
    /// frequency vector of spectral index (flattened row-major for d=2)
    Vec frequency(std::size_t k) const;

    /// forward DFT of the values (cached)
    const std::vector<std::complex<double>>& spectrum() const;

    /// F^{-1}(m(xi) F f), real part
    GridField apply_multiplier(
        const std::function<std::complex<double>(Vec)>& m) const;

    /// f(x + z) for all grid x via the spectral phase shift (exact
    /// trigonometric interpolation)
    GridField shifted(Vec z) const;

    /// periodic linear interpolation at an arbitrary point
    double value_at(Vec x) const;

    double max_abs() const;

    GridField& operator+=(const GridField& other);
    GridField& operator-=(const GridField& other);
    GridField& operator*=(double c);
    friend GridField operator+(GridField a, const GridField& b) { return a += b; }
    friend GridField operator-(GridField a, const GridField& b) { return a -= b; }
    friend GridField operator*(double c, GridField a) { return a *= c; }
    GridField pointwise_product(const GridField& other) const;

    bool same_grid(const GridField& other) const {
        return dim_ == other.dim_ && n_ == other.n_ && L_ == other.L_;
    }

    /// flat binary container: d, n (little-endian u64), L (f64), row-major
    /// f64 values
    void save(const std::string& path) const;
    static GridField load(const std::string& path);
    /// CSV export of a 1-d slice (the first row for d=2): x,value
    void export_csv_slice(const std::string& path) const;

private:
    void check_compatible(const GridField& other) const;

    int dim_;
    int n_;
    double L_;
    std::vector<double> values_;
    mutable std::optional<std::vector<std::complex<double>>> spectrum_;
};

namespace detail {
/// cached-plan complex FFT; out-of-place, unnormalized
void fft(int dim, int n, const std::complex<double>* in,
         std::complex<double>* out, bool forward);
}  // namespace detail

}  // namespace psidec
