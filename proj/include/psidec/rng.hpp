#pragma once

#include <cmath>
#include <cstdint>

namespace psidec {

/// splitmix64 step; used to expand a seed into stream state.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// xoshiro256++ generator with fully specified output, so that every stream
/// is bit-reproducible across platforms and build modes.  Gaussian draws use
/// Box-Muller (the std distributions are implementation-defined, which would
/// break byte-identical reports).
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
        has_gauss_ = false;
        gauss_ = 0.0;
    }

    /// Independent counter-based substream: hash (base_seed, index) into a
    /// fresh state.  Streams for distinct indices never share state.
    static Rng substream(std::uint64_t base_seed, std::uint64_t index) {
        std::uint64_t sm = base_seed;
        std::uint64_t a = splitmix64_next(sm);
        sm = a ^ (index * 0x9e3779b97f4a7c15ull + 0x243f6a8885a308d3ull);
        return Rng(splitmix64_next(sm));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// uniform in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// uniform in (0,1)
    double uniform_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// standard normal (Box-Muller, pairs cached)
    double normal() {
        if (has_gauss_) {
            has_gauss_ = false;
            return gauss_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        gauss_ = r * std::sin(a);
        has_gauss_ = true;
        return r * std::cos(a);
    }

    double exponential(double rate) { return -std::log(uniform_open()) / rate; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    bool has_gauss_;
    double gauss_;
};

}  // namespace psidec
