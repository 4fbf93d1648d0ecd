#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace plnc {

namespace detail {

// splitmix64 finalizer; full 64-bit avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// Small deterministic generator (splitmix64 stream). All randomness in
// the library flows through this type so results are reproducible
// independent of platform and standard-library version.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bit() { return (next_u64() >> 63) != 0; }

    // Uniform in {0, ..., n-1}; n must be > 0. Rejection-free modulo is fine
    // here: n is tiny compared to 2^64 in every call site.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    // Word with each bit i.i.d. Bernoulli(1/2), masked to `bits` low bits.
    std::uint64_t next_bits(int bits) {
        std::uint64_t w = next_u64();
        return bits >= 64 ? w : (w & ((std::uint64_t(1) << bits) - 1));
    }

    // Standard normal via Box-Muller (explicit so output is reproducible).
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - next_unit();  // (0, 1]
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

    // Circularly-symmetric complex Gaussian, variance sigma2 per real part.
    std::complex<double> next_cnormal(double sigma2) {
        const double u1 = 1.0 - next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * sigma2 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    // Derive a well-separated seed from a list of words (stream ids,
    // trial indices, bit patterns of parameters, ...).
    static std::uint64_t mix(std::initializer_list<std::uint64_t> words) {
        std::uint64_t s = 0x243f6a8885a308d3ULL;
        for (std::uint64_t w : words) s = detail::mix64(s ^ w);
        return s;
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace plnc
