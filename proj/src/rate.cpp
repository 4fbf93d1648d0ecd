#include "plnc/rate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "plnc/parallel.hpp"
#include "plnc/quadrature.hpp"
#include "plnc/rng.hpp"

namespace plnc {

namespace {

constexpr double kLn2 = std::numbers::ln2;

struct WeightedMixture {
    std::vector<cplx> centers;
    std::vector<double> weights;     // sums to 1
    std::vector<int> owner;          // element index -> merged component
};

// Collapse exact duplicates; weights become multiplicity / total.
WeightedMixture merge_points(std::span<const cplx> points) {
    WeightedMixture m;
    std::map<std::pair<double, double>, int> index;
    m.owner.reserve(points.size());
    for (const cplx& p : points) {
        auto [it, inserted] = index.try_emplace({p.real(), p.imag()},
                                                static_cast<int>(m.centers.size()));
        if (inserted) {
            m.centers.push_back(p);
            m.weights.push_back(0.0);
        }
        m.owner.push_back(it->second);
        m.weights[it->second] += 1.0;
    }
    const double inv = 1.0 / static_cast<double>(points.size());
    for (double& w : m.weights) w *= inv;
    return m;
}

// ln of the mixture density at y, up to the common 1/(2 pi sigma2) factor.
double log_mixture_unnormalized(const WeightedMixture& m, cplx y, double inv2s) {
    double best = -std::numeric_limits<double>::infinity();
    const std::size_t k = m.centers.size();
    // two passes: max for the log-sum-exp shift, then the sum
    std::vector<double> expo(k);
    for (std::size_t j = 0; j < k; ++j) {
        expo[j] = std::log(m.weights[j]) - std::norm(y - m.centers[j]) * inv2s;
        best = std::max(best, expo[j]);
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += std::exp(expo[j] - best);
    return best + std::log(acc);
}

}  // namespace

double mixture_entropy_bits(std::span<const cplx> points, const NoiseModel& noise) {
    if (points.empty()) throw EmptySubset("mixture entropy over empty point set");
    if (!(noise.sigma2 > 0.0))
        throw std::invalid_argument("mixture entropy needs sigma2 > 0");

    const WeightedMixture m = merge_points(points);
    const double sigma = std::sqrt(noise.sigma2);
    const double inv2s = 1.0 / (2.0 * noise.sigma2);
    const GaussHermite& gh = GaussHermite::order24();
    const int q = static_cast<int>(gh.nodes.size());
    const double scale = std::numbers::sqrt2 * sigma;

    // H = -sum_i w_i E_{Y ~ N(q_i)}[ln p(Y)]; the Gaussian expectation is
    // the GH product rule with nodes scaled by sqrt(2) sigma.
    double h_nats = 0.0;
    for (std::size_t i = 0; i < m.centers.size(); ++i) {
        double comp = 0.0;
        for (int a = 0; a < q; ++a) {
            const double ya_re = m.centers[i].real() + scale * gh.nodes[a];
            double inner = 0.0;
            for (int b = 0; b < q; ++b) {
                const cplx y(ya_re, m.centers[i].imag() + scale * gh.nodes[b]);
                inner += gh.weights[b] * log_mixture_unnormalized(m, y, inv2s);
            }
            comp += gh.weights[a] * inner;
        }
        h_nats -= m.weights[i] * comp / std::numbers::pi;
    }
    h_nats += std::log(2.0 * std::numbers::pi * noise.sigma2);
    if (!std::isfinite(h_nats))
        throw QuadratureDivergence("entropy quadrature produced a non-finite value");
    return h_nats / kLn2;
}

double mc_mixture_entropy_bits(std::span<const cplx> points, const NoiseModel& noise,
                               std::uint64_t samples, std::uint64_t seed) {
    if (points.empty()) throw EmptySubset("mixture entropy over empty point set");
    if (!(noise.sigma2 > 0.0))
        throw std::invalid_argument("mixture entropy needs sigma2 > 0");

    const WeightedMixture m = merge_points(points);
    const double inv2s = 1.0 / (2.0 * noise.sigma2);

    // E[-ln p(Y)] with the sampled component's own log-density as control
    // variate; its expectation is known in closed form.
    constexpr std::uint64_t kChunk = 1 << 16;
    const std::uint64_t nchunks = (samples + kChunk - 1) / kChunk;
    double acc = 0.0;
    std::uint64_t done = 0;
    for (std::uint64_t chunk = 0; chunk < nchunks; ++chunk) {
        Rng rng(Rng::mix({seed, 0x6d63656e74ULL, chunk}));
        const std::uint64_t todo = std::min<std::uint64_t>(kChunk, samples - done);
        double part = 0.0;
        for (std::uint64_t s = 0; s < todo; ++s) {
            const int elem = static_cast<int>(rng.next_below(m.owner.size()));
            const int comp = m.owner[elem];
            const cplx y = m.centers[comp] + rng.next_cnormal(noise.sigma2);
            const double ln_comp =
                std::log(m.weights[comp]) - std::norm(y - m.centers[comp]) * inv2s;
            part += ln_comp - log_mixture_unnormalized(m, y, inv2s);
        }
        acc += part;
        done += todo;
    }
    double cv_mean = 1.0 + std::log(2.0 * std::numbers::pi * noise.sigma2);
    for (double w : m.weights) cv_mean -= w * std::log(w);
    const double h_nats = acc / static_cast<double>(samples) + cv_mean;
    return h_nats / kLn2;
}

namespace {

// Reduced echelon basis of the span of `rows`; canonical for the row
// space, packed one byte per pivot column (dimensions stay <= 8 bits).
struct Subspace {
    std::array<std::uint64_t, 8> pivot{};  // pivot column -> basis row
    int rank = 0;
    int dim = 0;

    Subspace(std::span<const std::uint64_t> rows, int dim_) : dim(dim_) {
        for (std::uint64_t w : rows) {
            for (int c = 0; c < dim; ++c) {
                if (!((w >> c) & 1)) continue;
                if (pivot[c]) {
                    w ^= pivot[c];
                } else {
                    pivot[c] = w;
                    ++rank;
                    break;
                }
            }
        }
        // back-substitute for the reduced form
        for (int c = dim - 1; c >= 0; --c) {
            if (!pivot[c]) continue;
            for (int c2 = c + 1; c2 < dim; ++c2)
                if (((pivot[c] >> c2) & 1) && pivot[c2]) pivot[c] ^= pivot[c2];
        }
    }

    std::uint64_t key() const {
        std::uint64_t k = 0;
        int slot = 0;
        for (int c = 0; c < dim; ++c)
            if (pivot[c]) k |= pivot[c] << (8 * slot++);
        return k;
    }

    std::vector<std::uint64_t> basis() const {
        std::vector<std::uint64_t> rows;
        for (int c = 0; c < dim; ++c)
            if (pivot[c]) rows.push_back(pivot[c]);
        return rows;
    }
};

}  // namespace

RateEvaluator::RateEvaluator(const LabeledConstellation& c, const ChannelPair& h,
                             const NoiseModel& noise)
    : ell_(c.ell), h_(h), noise_(noise) {
    const std::uint64_t n = std::uint64_t(1) << ell_;
    pair_points_.reserve(n * n);
    // pair index = addr_a | addr_b << ell
    for (std::uint64_t b = 0; b < n; ++b)
        for (std::uint64_t a = 0; a < n; ++a)
            pair_points_.push_back(h.h_a * c.points[a] + h.h_b * c.points[b]);
}

double RateEvaluator::conditional_entropy_bits(std::span<const std::uint64_t> rows) {
    const Subspace sub(rows, 2 * ell_);
    const std::uint64_t key = sub.key();
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    const std::vector<std::uint64_t> basis = sub.basis();
    const std::size_t ncells = std::size_t(1) << sub.rank;
    std::vector<std::vector<cplx>> cells(ncells);
    for (std::size_t pair = 0; pair < pair_points_.size(); ++pair) {
        std::size_t cell = 0;
        for (std::size_t i = 0; i < basis.size(); ++i)
            cell |= std::size_t(std::popcount(basis[i] & pair) & 1) << i;
        cells[cell].push_back(pair_points_[pair]);
    }
    // linear conditioning on uniform inputs: every cell is equiprobable
    double h = 0.0;
    for (const std::vector<cplx>& cell : cells)
        h += mixture_entropy_bits(cell, noise_);
    h /= static_cast<double>(ncells);
    cache_.emplace(key, h);
    return h;
}

double RateEvaluator::bound_term_rows_bits(const BinMatrix& label_map,
                                           const PartitionSpec& spec) {
    if (label_map.cols() != 2 * ell_)
        throw DimensionMismatch("label map must act on stacked addresses");
    if (spec.ell() != label_map.rows())
        throw DimensionMismatch("partition levels must index label-map rows");

    std::vector<std::uint64_t> cond;
    const std::uint64_t sbar = spec.sbar_mask();
    for (int k = 0; k < label_map.rows(); ++k)
        if ((sbar >> k) & 1) cond.push_back(label_map.row_word(k));
    for (std::uint64_t block : spec.blocks()) {
        const int t = std::countr_zero(block);
        std::uint64_t rest = block & (block - 1);
        while (rest) {
            const int k = std::countr_zero(rest);
            cond.push_back(label_map.row_word(k) ^ label_map.row_word(t));
            rest &= rest - 1;
        }
    }
    std::vector<std::uint64_t> full(label_map.rows());
    for (int k = 0; k < label_map.rows(); ++k) full[k] = label_map.row_word(k);

    const double term =
        conditional_entropy_bits(cond) - conditional_entropy_bits(full);
    return std::max(term, 0.0);
}

double RateEvaluator::bound_term_bits(const DecodeFunction& f, const PartitionSpec& spec) {
    if (f.ell() != ell_) throw DimensionMismatch("function/constellation level mismatch");
    return bound_term_rows_bits(f.combined(), spec);
}

RateReport RateEvaluator::rate_f(const DecodeFunction& f) {
    RateReport report;
    report.f_id = f.id();
    report.h = h_;
    report.snr_db = noise_.snr_db();
    const BinMatrix map = f.combined();
    double rate = std::numeric_limits<double>::infinity();
    for (const PartitionSpec& spec : enumerate_partitions(ell_)) {
        const double term = bound_term_rows_bits(map, spec);
        rate = std::min(rate, term / spec.p());
        report.terms.emplace_back(spec, term);
    }
    report.rate = rate;
    report.sum_rate = ell_ * rate;
    return report;
}

double RateEvaluator::gf4_rate_bits(Gf4 alpha, Gf4 beta) {
    if (ell_ != 2) throw EllTooLarge("GF(4) rates are defined for ell = 2");
    const DecodeFunction f = gf4_embed(alpha, beta);
    const BinMatrix map = f.combined();
    std::vector<std::uint64_t> rows(2);
    for (int k = 0; k < 2; ++k) rows[k] = map.row_word(k);
    return conditional_entropy_bits({}) - conditional_entropy_bits(rows);
}

double RateEvaluator::df_rate_per_level_bits() {
    if (ell_ > 2) throw EllTooLarge("decode-and-forward enumeration needs 2*ell <= 4");
    const BinMatrix map = BinMatrix::identity(2 * ell_);
    double rate = std::numeric_limits<double>::infinity();
    for (const PartitionSpec& spec : enumerate_partitions(2 * ell_))
        rate = std::min(rate, bound_term_rows_bits(map, spec) / spec.p());
    return rate;
}

double mc_conditional_entropy_bits(std::span<const std::vector<cplx>> cells,
                                   const NoiseModel& noise, std::uint64_t samples,
                                   std::uint64_t seed) {
    const std::uint64_t per_cell = samples / cells.size();
    double h = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i)
        h += mc_mixture_entropy_bits(cells[i], noise, per_cell, Rng::mix({seed, i}));
    return h / static_cast<double>(cells.size());
}

GainSet GainSet::theta_difference_grid(int steps) {
    GainSet g;
    g.gains.reserve(steps);
    for (int k = 0; k < steps; ++k)
        g.gains.push_back(ChannelPair::from_thetas(2.0 * std::numbers::pi * k / steps, 0.0));
    return g;
}

GainSet GainSet::theta_grid_2d(int steps) {
    GainSet g;
    g.gains.reserve(std::size_t(steps) * steps);
    for (int a = 0; a < steps; ++a)
        for (int b = 0; b < steps; ++b)
            g.gains.push_back(ChannelPair::from_thetas(2.0 * std::numbers::pi * a / steps,
                                                       2.0 * std::numbers::pi * b / steps));
    return g;
}

UniversalRateResult universal_rate(const LabeledConstellation& c, const GainSet& gains,
                                   std::span<const DecodeFunction> funcs,
                                   const NoiseModel& noise, int jobs) {
    if (gains.gains.empty() || funcs.empty())
        throw DimensionMismatch("universal rate needs gains and functions");
    UniversalRateResult out;
    out.table.resize(gains.gains.size());
    parallel_for(gains.gains.size(), jobs, [&](std::size_t gi) {
        RateEvaluator ev(c, gains.gains[gi], noise);
        UniversalChoice choice;
        choice.h = gains.gains[gi];
        for (std::size_t fi = 0; fi < funcs.size(); ++fi) {
            const double r = ev.rate_f(funcs[fi]).rate;
            if (r > choice.best_rate) {
                choice.best_rate = r;
                choice.best_index = static_cast<int>(fi);
            }
        }
        out.table[gi] = choice;
    });
    double rate = std::numeric_limits<double>::infinity();
    for (const UniversalChoice& ch : out.table) rate = std::min(rate, ch.best_rate);
    out.rate_per_level = rate;
    out.sum_rate = c.ell * rate;
    return out;
}

Gf4UniversalResult gf4_universal_rate(const LabeledConstellation& c, const GainSet& gains,
                                      const NoiseModel& noise, int jobs) {
    if (gains.gains.empty()) throw DimensionMismatch("universal rate needs gains");
    std::vector<double> best_rate(gains.gains.size(), 0.0);
    Gf4UniversalResult out;
    out.best.resize(gains.gains.size(), {Gf4(1), Gf4(1)});
    parallel_for(gains.gains.size(), jobs, [&](std::size_t gi) {
        RateEvaluator ev(c, gains.gains[gi], noise);
        for (unsigned a = 1; a < 4; ++a) {
            for (unsigned b = 1; b < 4; ++b) {
                const double r = ev.gf4_rate_bits(Gf4(a), Gf4(b));
                if (r > best_rate[gi]) {
                    best_rate[gi] = r;
                    out.best[gi] = {Gf4(a), Gf4(b)};
                }
            }
        }
    });
    out.rate_bits = *std::min_element(best_rate.begin(), best_rate.end());
    return out;
}

namespace {

double best_rate_at(const LabeledConstellation& c, const ChannelPair& h,
                    std::span<const DecodeFunction> funcs, const NoiseModel& noise,
                    int* argmax = nullptr) {
    RateEvaluator ev(c, h, noise);
    double best = -1.0;
    for (std::size_t fi = 0; fi < funcs.size(); ++fi) {
        const double r = ev.rate_f(funcs[fi]).rate;
        if (r > best) {
            best = r;
            if (argmax) *argmax = static_cast<int>(fi);
        }
    }
    return best;
}

}  // namespace

double threshold_snr_db(const LabeledConstellation& c, const ChannelPair& h,
                        std::span<const DecodeFunction> funcs, double target_rate,
                        double lo_db, double hi_db, double tol_db) {
    auto rate_at = [&](double snr) {
        return best_rate_at(c, h, funcs, NoiseModel::from_snr_db(snr));
    };
    if (!(rate_at(hi_db) >= target_rate) || rate_at(lo_db) >= target_rate)
        throw WindowNotBracketing("threshold window does not straddle the target rate");
    while (hi_db - lo_db > tol_db) {
        const double mid = 0.5 * (lo_db + hi_db);
        (rate_at(mid) >= target_rate ? hi_db : lo_db) = mid;
    }
    return hi_db;
}

int best_function_index(const LabeledConstellation& c, const ChannelPair& h,
                        std::span<const DecodeFunction> funcs, const NoiseModel& noise) {
    int idx = -1;
    best_rate_at(c, h, funcs, noise, &idx);
    return idx;
}

}  // namespace plnc
