#include "psidec/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>

namespace psidec {

namespace detail {

namespace {
std::mutex plan_mutex;
std::map<std::tuple<int, int, bool>, fftw_plan> plan_cache;

fftw_plan get_plan(int dim, int n, bool forward) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    const auto key = std::make_tuple(dim, n, forward);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;
    const std::size_t total = dim == 1 ? static_cast<std::size_t>(n)
                                       : static_cast<std::size_t>(n) * n;
    std::vector<std::complex<double>> a(total), b(total);
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = reinterpret_cast<fftw_complex*>(b.data());
    const int sign = forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan = dim == 1
        ? fftw_plan_dft_1d(n, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
        : fftw_plan_dft_2d(n, n, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_cache.emplace(key, plan);
    return plan;
}
}  // namespace

void fft(int dim, int n, const std::complex<double>* in,
         std::complex<double>* out, bool forward) {
    fftw_plan plan = get_plan(dim, n, forward);
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(
                         const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

}  // namespace detail

GridField::GridField(int dim, int n, double L) : dim_(dim), n_(n), L_(L) {
    if (dim != 1 && dim != 2) throw std::domain_error("dim must be 1 or 2");
    if (n < 2 || (n & (n - 1)) != 0)
        throw std::domain_error("n must be a power of two >= 2");
    if (!(L > 0.0)) throw std::domain_error("L must be > 0");
    values_.assign(dim == 1 ? n : static_cast<std::size_t>(n) * n, 0.0);
}

GridField GridField::from_values(int dim, int n, double L,
                                 std::vector<double> values) {
    GridField f(dim, n, L);
    if (values.size() != f.values_.size())
        throw std::domain_error("value count does not match grid");
    for (double v : values)
        if (!std::isfinite(v)) throw std::domain_error("values must be finite");
    f.values_ = std::move(values);
    return f;
}

GridField GridField::from_function(int dim, int n, double L,
                                   const std::function<double(Vec)>& fn) {
    GridField f(dim, n, L);
    for (std::size_t i = 0; i < f.values_.size(); ++i)
        f.values_[i] = fn(f.point(i));
    return f;
}

GridField GridField::from_spectrum(int dim, int n, double L,
                                   const std::vector<std::complex<double>>& spec) {
    GridField f(dim, n, L);
    if (spec.size() != f.values_.size())
        throw std::domain_error("spectrum size does not match grid");
    std::vector<std::complex<double>> out(spec.size());
    detail::fft(dim, n, spec.data(), out.data(), false);
    const double inv = 1.0 / static_cast<double>(spec.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        f.values_[i] = out[i].real() * inv;
    f.spectrum_ = spec;
    return f;
}

double GridField::cell_volume() const {
    const double h = spacing();
    return dim_ == 1 ? h : h * h;
}

Vec GridField::point(std::size_t i) const {
    const double h = spacing();
    if (dim_ == 1) return {h * static_cast<double>(i), 0.0};
    return {h * static_cast<double>(i / n_), h * static_cast<double>(i % n_)};
}

Vec GridField::frequency(std::size_t k) const {
    const double base = 2.0 * M_PI / L_;
    const auto wrap = [this, base](std::size_t idx) {
        const int ki = static_cast<int>(idx);
        return base * (ki <= n_ / 2 ? ki : ki - n_);
    };
    if (dim_ == 1) return {wrap(k), 0.0};
    return {wrap(k / n_), wrap(k % n_)};
}

const std::vector<std::complex<double>>& GridField::spectrum() const {
    if (!spectrum_) {
        std::vector<std::complex<double>> in(values_.begin(), values_.end());
        std::vector<std::complex<double>> out(in.size());
        detail::fft(dim_, n_, in.data(), out.data(), true);
        spectrum_ = std::move(out);
    }
    return *spectrum_;
}

GridField GridField::apply_multiplier(
    const std::function<std::complex<double>(Vec)>& m) const {
    const auto& spec = spectrum();
    std::vector<std::complex<double>> filtered(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k)
        filtered[k] = m(frequency(k)) * spec[k];
    std::vector<std::complex<double>> out(spec.size());
    detail::fft(dim_, n_, filtered.data(), out.data(), false);
    GridField g(dim_, n_, L_);
    const double inv = 1.0 / static_cast<double>(spec.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        g.values_[i] = out[i].real() * inv;
    return g;
}

GridField GridField::shifted(Vec z) const {
    return apply_multiplier([z](Vec xi) {
        const double phase = xi[0] * z[0] + xi[1] * z[1];
        return std::complex<double>(std::cos(phase), std::sin(phase));
    });
}

double GridField::value_at(Vec x) const {
    const double h = spacing();
    const auto locate = [this, h](double coord) {
        double s = coord / h;
        s -= std::floor(s / n_) * n_;
        const auto i0 = static_cast<std::size_t>(s);
        return std::pair<std::size_t, double>(i0 % n_, s - static_cast<double>(i0));
    };
    if (dim_ == 1) {
        const auto [i0, w] = locate(x[0]);
        const std::size_t i1 = (i0 + 1) % n_;
        return (1.0 - w) * values_[i0] + w * values_[i1];
    }
    const auto [i0, wx] = locate(x[0]);
    const auto [j0, wy] = locate(x[1]);
    const std::size_t i1 = (i0 + 1) % n_, j1 = (j0 + 1) % n_;
    const auto at = [this](std::size_t i, std::size_t j) {
        return values_[i * n_ + j];
    };
    return (1.0 - wx) * ((1.0 - wy) * at(i0, j0) + wy * at(i0, j1)) +
           wx * ((1.0 - wy) * at(i1, j0) + wy * at(i1, j1));
}

double GridField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

void GridField::check_compatible(const GridField& other) const {
    if (!same_grid(other))
        throw std::domain_error("grid mismatch between fields");
}

GridField& GridField::operator+=(const GridField& other) {
    check_compatible(other);
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] += other.values_[i];
    spectrum_.reset();
    return *this;
}

GridField& GridField::operator-=(const GridField& other) {
    check_compatible(other);
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] -= other.values_[i];
    spectrum_.reset();
    return *this;
}

GridField& GridField::operator*=(double c) {
    for (double& v : values_) v *= c;
    spectrum_.reset();
    return *this;
}

GridField GridField::pointwise_product(const GridField& other) const {
    check_compatible(other);
    GridField g(dim_, n_, L_);
    for (std::size_t i = 0; i < values_.size(); ++i)
        g.values_[i] = values_[i] * other.values_[i];
    return g;
}

void GridField::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const std::uint64_t d64 = static_cast<std::uint64_t>(dim_);
    const std::uint64_t n64 = static_cast<std::uint64_t>(n_);
    out.write(reinterpret_cast<const char*>(&d64), 8);
    out.write(reinterpret_cast<const char*>(&n64), 8);
    out.write(reinterpret_cast<const char*>(&L_), 8);
    out.write(reinterpret_cast<const char*>(values_.data()),
              static_cast<std::streamsize>(values_.size() * sizeof(double)));
}

GridField GridField::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::uint64_t d64 = 0, n64 = 0;
    double L = 0;
    in.read(reinterpret_cast<char*>(&d64), 8);
    in.read(reinterpret_cast<char*>(&n64), 8);
    in.read(reinterpret_cast<char*>(&L), 8);
    GridField f(static_cast<int>(d64), static_cast<int>(n64), L);
    in.read(reinterpret_cast<char*>(f.values_.data()),
            static_cast<std::streamsize>(f.values_.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated field container: " + path);
    return f;
}

void GridField::export_csv_slice(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "x,value\n";
    out.precision(17);
    // indices 0..n-1 are the whole field (d=1) or the first row (d=2)
    const std::size_t count = static_cast<std::size_t>(n_);
    for (std::size_t i = 0; i < count; ++i) {
        const Vec p = point(i);
        out << (dim_ == 1 ? p[0] : p[1]) << "," << values_[i] << "\n";
    }
}

}  // namespace psidec
