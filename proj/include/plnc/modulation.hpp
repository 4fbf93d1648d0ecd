#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "plnc/errors.hpp"
#include "plnc/f2.hpp"

namespace plnc {

using cplx = std::complex<double>;

// 2^ell unit-average-energy points indexed by their binary address.
// Address packing: level k (1-based) is bit k-1, so the paper's label
// string "x1 x2 ... xl" reads LSB first.
struct LabeledConstellation {
    int ell = 0;
    std::vector<cplx> points;  // index = address

    LabeledConstellation(int ell_, std::vector<cplx> pts);

    cplx point(std::uint64_t addr) const { return points[addr]; }
    int size() const { return static_cast<int>(points.size()); }
};

// QPSK with Gray labeling: {M(00), M(01), M(11), M(10)} = {1, j, -1, -j}.
LabeledConstellation qpsk_gray();

// 2^ell-PSK with binary-reflected Gray labels; ell = 2 coincides with
// qpsk_gray, ell = 1 is BPSK. 1 <= ell <= 4.
LabeledConstellation psk_gray(int ell);

// Points whose address agrees with every fixed (level, bit) entry;
// 2^(ell - #fixed) points in ascending address order.
std::vector<cplx> label_subset(const LabeledConstellation& c,
                               std::span<const std::pair<int, int>> fixed);

struct ChannelPair {
    cplx h_a{1.0, 0.0};
    cplx h_b{1.0, 0.0};

    static ChannelPair from_thetas(double theta_a, double theta_b) {
        return {std::polar(1.0, theta_a), std::polar(1.0, theta_b)};
    }
};

// sigma2 is the noise variance per real component; total noise power is
// 2*sigma2 and SNR = Es/N0 = 1/(2*sigma2) for unit-energy constellations.
struct NoiseModel {
    double sigma2 = 0.0;

    static NoiseModel from_snr_db(double snr_db);
    double snr_db() const;
};

struct RelayEntry {
    std::uint32_t addr_a;
    std::uint32_t addr_b;
    cplx point;                // h_a M(addr_a) + h_b M(addr_b)
    std::uint32_t relay_label; // f(addr_a, addr_b)
};

// The effective constellation seen by the relay together with the label
// map induced by a decoding function. Entry index = addr_a | addr_b<<ell.
struct RelayConstellation {
    int ell = 0;
    ChannelPair h;
    std::vector<RelayEntry> entries;

    // Multiset of points over all (addr_a, addr_b) pairs whose relay label
    // agrees with the fixed (level, bit) entries; one element per pair, so
    // geometric multiplicity is preserved.
    std::vector<cplx> label_multiset(std::span<const std::pair<int, int>> fixed) const;

    // All 2^(2*ell) pair points in entry order.
    std::vector<cplx> pair_points() const;
};

RelayConstellation relay_constellation(const LabeledConstellation& c,
                                       const ChannelPair& h,
                                       const DecodeFunction& f);

// y[n] = h_a M(s_a[n]) + h_b M(s_b[n]) + w[n]; deterministic given seed.
std::vector<cplx> channel_sample(const LabeledConstellation& c, const ChannelPair& h,
                                 std::span<const std::uint32_t> s_a,
                                 std::span<const std::uint32_t> s_b,
                                 const NoiseModel& noise, std::uint64_t seed);

// Equal-weight mixture of complex Gaussian densities centered at the
// subset points, evaluated at y. Weighting is per element, so passing a
// multiset gives the multiplicity-correct conditional density.
double likelihood(cplx y, std::span<const cplx> subset, const NoiseModel& noise);

}  // namespace plnc
