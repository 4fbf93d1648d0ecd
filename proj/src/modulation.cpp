#include "plnc/modulation.hpp"

#include <cmath>
#include <numbers>

#include "plnc/rng.hpp"

namespace plnc {

LabeledConstellation::LabeledConstellation(int ell_, std::vector<cplx> pts)
    : ell(ell_), points(std::move(pts)) {
    if (ell < 1 || ell > 6) throw DimensionMismatch("unsupported level count");
    if (points.size() != (std::size_t(1) << ell))
        throw DimensionMismatch("constellation needs 2^ell points");
    double energy = 0.0;
    for (const cplx& p : points) energy += std::norm(p);
    energy /= static_cast<double>(points.size());
    if (std::abs(energy - 1.0) > 1e-12)
        throw DimensionMismatch("constellation must have unit average energy");
}

LabeledConstellation qpsk_gray() { return psk_gray(2); }

LabeledConstellation psk_gray(int ell) {
    if (ell < 1 || ell > 4) throw EllTooLarge("PSK constellations support 1 <= ell <= 4");
    const int n = 1 << ell;
    std::vector<cplx> pts(n);
    for (int k = 0; k < n; ++k) {
        // Label strings read as binary numbers (level 1 = LSB), so the
        // address of the k-th point around the circle is its Gray code.
        const unsigned gray = unsigned(k) ^ (unsigned(k) >> 1);
        const double angle = 2.0 * std::numbers::pi * k / n;
        pts[gray] = std::polar(1.0, angle);
    }
    // Snap exact axis points so special angles come out bit-clean.
    for (cplx& p : pts) {
        if (std::abs(p.real()) < 1e-15) p = {0.0, p.imag()};
        if (std::abs(p.imag()) < 1e-15) p = {p.real(), 0.0};
    }
    return {ell, std::move(pts)};
}

std::vector<cplx> label_subset(const LabeledConstellation& c,
                               std::span<const std::pair<int, int>> fixed) {
    std::uint64_t mask = 0, want = 0;
    for (const auto& [level, bit] : fixed) {
        if (level < 1 || level > c.ell) throw DimensionMismatch("fixed level out of range");
        mask |= std::uint64_t(1) << (level - 1);
        if (bit) want |= std::uint64_t(1) << (level - 1);
    }
    std::vector<cplx> out;
    for (std::uint64_t addr = 0; addr < (std::uint64_t(1) << c.ell); ++addr)
        if ((addr & mask) == want) out.push_back(c.points[addr]);
    return out;
}

NoiseModel NoiseModel::from_snr_db(double snr_db) {
    const double snr = std::pow(10.0, snr_db / 10.0);
    return {1.0 / (2.0 * snr)};
}

double NoiseModel::snr_db() const { return 10.0 * std::log10(1.0 / (2.0 * sigma2)); }

RelayConstellation relay_constellation(const LabeledConstellation& c,
                                       const ChannelPair& h,
                                       const DecodeFunction& f) {
    if (c.ell != f.ell()) throw DimensionMismatch("constellation/function level mismatch");
    RelayConstellation rc;
    rc.ell = c.ell;
    rc.h = h;
    const std::uint64_t n = std::uint64_t(1) << c.ell;
    rc.entries.reserve(n * n);
    // entry index = addr_a | addr_b << ell
    for (std::uint64_t b = 0; b < n; ++b)
        for (std::uint64_t a = 0; a < n; ++a)
            rc.entries.push_back({static_cast<std::uint32_t>(a),
                                  static_cast<std::uint32_t>(b),
                                  h.h_a * c.points[a] + h.h_b * c.points[b],
                                  static_cast<std::uint32_t>(f.label_of(a, b))});
    return rc;
}

std::vector<cplx> RelayConstellation::label_multiset(
    std::span<const std::pair<int, int>> fixed) const {
    std::uint32_t mask = 0, want = 0;
    for (const auto& [level, bit] : fixed) {
        if (level < 1 || level > ell) throw DimensionMismatch("fixed level out of range");
        mask |= std::uint32_t(1) << (level - 1);
        if (bit) want |= std::uint32_t(1) << (level - 1);
    }
    std::vector<cplx> out;
    for (const RelayEntry& e : entries)
        if ((e.relay_label & mask) == want) out.push_back(e.point);
    return out;
}

std::vector<cplx> RelayConstellation::pair_points() const {
    std::vector<cplx> out;
    out.reserve(entries.size());
    for (const RelayEntry& e : entries) out.push_back(e.point);
    return out;
}

std::vector<cplx> channel_sample(const LabeledConstellation& c, const ChannelPair& h,
                                 std::span<const std::uint32_t> s_a,
                                 std::span<const std::uint32_t> s_b,
                                 const NoiseModel& noise, std::uint64_t seed) {
    if (s_a.size() != s_b.size()) throw DimensionMismatch("sequence length mismatch");
    Rng rng(seed);
    std::vector<cplx> y(s_a.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = h.h_a * c.points[s_a[i]] + h.h_b * c.points[s_b[i]];
        if (noise.sigma2 > 0.0) y[i] += rng.next_cnormal(noise.sigma2);
    }
    return y;
}

double likelihood(cplx y, std::span<const cplx> subset, const NoiseModel& noise) {
    if (subset.empty()) throw EmptySubset("likelihood over empty point set");
    if (!(noise.sigma2 > 0.0)) throw DimensionMismatch("likelihood needs sigma2 > 0");
    const double inv2s = 1.0 / (2.0 * noise.sigma2);
    double acc = 0.0;
    for (const cplx& q : subset) acc += std::exp(-std::norm(y - q) * inv2s);
    const double norm = 1.0 / (2.0 * std::numbers::pi * noise.sigma2);
    return acc * norm / static_cast<double>(subset.size());
}

}  // namespace plnc
