#include "plnc/ldpc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "plnc/errors.hpp"
#include "plnc/parallel.hpp"
#include "plnc/rng.hpp"

namespace plnc {

namespace {

constexpr double kLlrClip = 30.0;

std::uint64_t pair_key(int c1, int c2, int m) {
    if (c1 > c2) std::swap(c1, c2);
    return std::uint64_t(c1) * std::uint64_t(m) + std::uint64_t(c2);
}

bool try_build(int n, std::uint64_t seed, LdpcCode& out) {
    const int m = n / 2;
    Rng rng(seed);
    std::vector<int> deg(m, 0);
    // degree buckets with swap-remove so min-degree checks are cheap to find
    std::vector<std::vector<int>> bucket(LdpcCode::check_degree + 1);
    std::vector<int> pos(m), level(m, 0);
    bucket[0].resize(m);
    for (int c = 0; c < m; ++c) {
        bucket[0][c] = c;
        pos[c] = c;
    }
    auto promote = [&](int c) {
        std::vector<int>& b = bucket[level[c]];
        const int p = pos[c];
        b[p] = b.back();
        pos[b[p]] = p;
        b.pop_back();
        ++level[c];
        pos[c] = static_cast<int>(bucket[level[c]].size());
        bucket[level[c]].push_back(c);
    };

    std::unordered_set<std::uint64_t> used_pairs;
    used_pairs.reserve(std::size_t(3) * n * 2);
    out.edge_check.assign(std::size_t(3) * n, -1);

    std::array<int, 3> chosen{};
    for (int v = 0; v < n; ++v) {
        int picked = 0;
        for (int d = 0; d <= 5 && picked < 3; ++d) {
            const std::vector<int>& b = bucket[d];
            if (b.empty()) continue;
            const std::size_t start = rng.next_below(b.size());
            for (std::size_t i = 0; i < b.size() && picked < 3; ++i) {
                const int cand = b[(start + i) % b.size()];
                bool ok = true;
                for (int t = 0; t < picked; ++t) {
                    if (cand == chosen[t] ||
                        used_pairs.count(pair_key(cand, chosen[t], m))) {
                        ok = false;
                        break;
                    }
                }
                if (ok) chosen[picked++] = cand;
            }
        }
        if (picked < 3) return false;
        for (int t = 0; t < 3; ++t) {
            out.edge_check[std::size_t(3) * v + t] = chosen[t];
            promote(chosen[t]);
        }
        used_pairs.insert(pair_key(chosen[0], chosen[1], m));
        used_pairs.insert(pair_key(chosen[0], chosen[2], m));
        used_pairs.insert(pair_key(chosen[1], chosen[2], m));
    }

    out.n = n;
    out.m = m;
    out.check_edges.assign(m, {});
    std::vector<int> fill(m, 0);
    for (int e = 0; e < 3 * n; ++e) {
        const int c = out.edge_check[e];
        if (fill[c] >= LdpcCode::check_degree) return false;
        out.check_edges[c][fill[c]++] = e;
    }
    for (int c = 0; c < m; ++c)
        if (fill[c] != LdpcCode::check_degree) return false;
    return true;
}

}  // namespace

bool LdpcCode::syndrome_ok(std::span<const std::uint8_t> bits) const {
    for (int c = 0; c < m; ++c) {
        unsigned parity = 0;
        for (int e : check_edges[c]) parity ^= bits[var_of_edge(e)];
        if (parity & 1) return false;
    }
    return true;
}

LdpcCode build_code(int n, std::uint64_t seed) {
    if (n < 96 || n % 2 != 0)
        throw std::invalid_argument("block length must be even and >= 96");
    constexpr int kMaxAttempts = 64;
    LdpcCode code;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt)
        if (try_build(n, Rng::mix({seed, std::uint64_t(attempt)}), code)) return code;
    throw ConstructionFailed("could not place a 4-cycle-free (3,6) graph");
}

BpResult bp_decode(const LdpcCode& code, std::span<const double> llr, int max_iter) {
    if (static_cast<int>(llr.size()) != code.n)
        throw DimensionMismatch("LLR length must equal the block length");
    const int n = code.n;
    const std::size_t edges = code.edge_check.size();
    std::vector<double> v2c(edges), c2v(edges, 0.0);
    for (std::size_t e = 0; e < edges; ++e) v2c[e] = llr[code.var_of_edge(e)];

    BpResult res;
    res.hard.assign(n, 0);
    res.posterior.assign(n, 0.0);

    for (int iter = 1; iter <= max_iter; ++iter) {
        // check update, tanh rule with prefix/suffix products
        for (int c = 0; c < code.m; ++c) {
            const auto& ce = code.check_edges[c];
            std::array<double, 6> t;
            for (int i = 0; i < 6; ++i) t[i] = std::tanh(0.5 * v2c[ce[i]]);
            std::array<double, 6> pre, suf;
            pre[0] = 1.0;
            for (int i = 1; i < 6; ++i) pre[i] = pre[i - 1] * t[i - 1];
            suf[5] = 1.0;
            for (int i = 4; i >= 0; --i) suf[i] = suf[i + 1] * t[i + 1];
            for (int i = 0; i < 6; ++i) {
                const double prod = std::clamp(pre[i] * suf[i], -(1.0 - 1e-12), 1.0 - 1e-12);
                c2v[ce[i]] = 2.0 * std::atanh(prod);
            }
        }
        // variable update and decision
        for (int v = 0; v < n; ++v) {
            const std::size_t base = std::size_t(3) * v;
            const double sum = llr[v] + c2v[base] + c2v[base + 1] + c2v[base + 2];
            res.posterior[v] = sum;
            res.hard[v] = sum < 0.0 ? 1 : 0;
            for (int t2 = 0; t2 < 3; ++t2)
                v2c[base + t2] = std::clamp(sum - c2v[base + t2], -50.0, 50.0);
        }
        res.iterations = iter;
        if (code.syndrome_ok(res.hard)) {
            res.converged = true;
            break;
        }
    }
    return res;
}

namespace {

// Shared demapping core over a precomputed per-symbol likelihood table.
// like[i * npairs + p] = exp(-|y_i - q_p|^2 / (2 sigma2)).
void demap_core(const std::vector<double>& like, std::size_t nsym,
                const RelayConstellation& rc, int level,
                std::span<const std::vector<double>> priors_x,
                std::span<const std::uint8_t> lambda_row, std::vector<double>& out) {
    const int ell = rc.ell;
    const std::size_t npairs = rc.entries.size();
    const std::uint32_t kbit = std::uint32_t(1) << (level - 1);

    // per-symbol bit probabilities of the other levels
    std::vector<double> p0(std::size_t(ell) * nsym);
    for (int k = 0; k < ell; ++k) {
        if (k == level - 1) continue;
        const std::vector<double>& l = priors_x[k];
        for (std::size_t i = 0; i < nsym; ++i)
            p0[std::size_t(k) * nsym + i] = 1.0 / (1.0 + std::exp(-l[i]));
    }

    out.resize(nsym);
    for (std::size_t i = 0; i < nsym; ++i) {
        double num = 0.0, den = 0.0;
        for (std::size_t p = 0; p < npairs; ++p) {
            const std::uint32_t label = rc.entries[p].relay_label;
            double w = like[i * npairs + p];
            for (int k = 0; k < ell; ++k) {
                if (k == level - 1) continue;
                const double q0 = p0[std::size_t(k) * nsym + i];
                w *= (label >> k) & 1 ? 1.0 - q0 : q0;
            }
            if (label & kbit)
                den += w;
            else
                num += w;
        }
        double llr;
        if (num <= 0.0)
            llr = -kLlrClip;
        else if (den <= 0.0)
            llr = kLlrClip;
        else
            llr = std::clamp(std::log(num / den), -kLlrClip, kLlrClip);
        if (lambda_row[i]) llr = -llr;
        out[i] = llr;
    }
}

std::vector<double> likelihood_table(std::span<const cplx> y,
                                     const RelayConstellation& rc,
                                     const NoiseModel& noise) {
    const std::size_t npairs = rc.entries.size();
    const double inv2s = 1.0 / (2.0 * noise.sigma2);
    std::vector<double> like(y.size() * npairs);
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t p = 0; p < npairs; ++p)
            like[i * npairs + p] = std::exp(-std::norm(y[i] - rc.entries[p].point) * inv2s);
    return like;
}

}  // namespace

std::vector<double> demap_llr(std::span<const cplx> y, const RelayConstellation& rc,
                              int level, std::span<const std::vector<double>> priors,
                              std::span<const std::uint8_t> lambda_row,
                              const NoiseModel& noise) {
    if (level < 1 || level > rc.ell) throw DimensionMismatch("level out of range");
    if (!(noise.sigma2 > 0.0)) throw std::invalid_argument("demapping needs sigma2 > 0");
    if (lambda_row.size() != y.size()) throw DimensionMismatch("coset row length mismatch");
    const std::vector<double> like = likelihood_table(y, rc, noise);
    std::vector<double> out;
    demap_core(like, y.size(), rc, level, priors, lambda_row, out);
    return out;
}

JointDecodeResult joint_decode(std::span<const cplx> y, const LdpcCode& code,
                               const RelayConstellation& rc, const BitRows& lambda_fr,
                               const NoiseModel& noise, int max_outer, int max_inner) {
    const int ell = rc.ell;
    const std::size_t nsym = y.size();
    if (static_cast<int>(nsym) != code.n)
        throw DimensionMismatch("block length mismatch");
    if (static_cast<int>(lambda_fr.size()) != ell)
        throw DimensionMismatch("coset matrix must have ell rows");

    const std::vector<double> like = likelihood_table(y, rc, noise);

    std::vector<std::vector<double>> priors_x(ell, std::vector<double>(nsym, 0.0));
    std::vector<std::vector<double>> channel_c(ell);
    std::vector<std::uint8_t> level_ok(ell, 0);

    JointDecodeResult res;
    res.x_hat.assign(ell, std::vector<std::uint8_t>(nsym, 0));

    for (int outer = 1; outer <= max_outer; ++outer) {
        res.outer_iterations = outer;
        for (int k = 1; k <= ell; ++k) {
            demap_core(like, nsym, rc, k, priors_x, lambda_fr[k - 1], channel_c[k - 1]);
            const BpResult bp = bp_decode(code, channel_c[k - 1], max_inner);
            level_ok[k - 1] = bp.converged ? 1 : 0;
            for (std::size_t i = 0; i < nsym; ++i) {
                res.x_hat[k - 1][i] = bp.hard[i] ^ lambda_fr[k - 1][i];
                // decoder extrinsic, back in the x domain for the other levels
                const double ext = bp.posterior[i] - channel_c[k - 1][i];
                priors_x[k - 1][i] = lambda_fr[k - 1][i] ? -ext : ext;
            }
        }
        if (std::all_of(level_ok.begin(), level_ok.end(), [](std::uint8_t v) { return v; })) {
            res.converged = true;
            break;
        }
    }
    return res;
}

namespace {

struct TrialResult {
    long long bit_errors = 0;
    bool frame_error = false;
};

TrialResult run_one_trial(const LdpcCode& code, const LabeledConstellation& c,
                          const RelayConstellation& rc, const DecodeFunction& f,
                          double theta, double snr_db, std::uint64_t seed, int trial) {
    const int ell = c.ell;
    const int n = code.n;
    Rng rng(Rng::mix({seed, std::bit_cast<std::uint64_t>(theta),
                      std::bit_cast<std::uint64_t>(snr_db), std::uint64_t(trial)}));

    // random coset leaders, zero messages: the transmitted rows equal the
    // coset leaders and are valid coset codewords
    std::vector<std::uint32_t> addr_a(n), addr_b(n);
    BitRows lambda_fr(ell, std::vector<std::uint8_t>(n));
    for (int i = 0; i < n; ++i) {
        addr_a[i] = static_cast<std::uint32_t>(rng.next_bits(ell));
        addr_b[i] = static_cast<std::uint32_t>(rng.next_bits(ell));
        const std::uint64_t label = f.label_of(addr_a[i], addr_b[i]);
        for (int k = 0; k < ell; ++k) lambda_fr[k][i] = (label >> k) & 1;
    }

    const NoiseModel noise = NoiseModel::from_snr_db(snr_db);
    const ChannelPair h = rc.h;
    std::vector<cplx> y(n);
    for (int i = 0; i < n; ++i)
        y[i] = h.h_a * c.points[addr_a[i]] + h.h_b * c.points[addr_b[i]] +
               rng.next_cnormal(noise.sigma2);

    const JointDecodeResult dec = joint_decode(y, code, rc, lambda_fr, noise);
    TrialResult out;
    for (int k = 0; k < ell; ++k)
        for (int i = 0; i < n; ++i)
            if (dec.x_hat[k][i] != lambda_fr[k][i]) ++out.bit_errors;
    out.frame_error = out.bit_errors != 0;
    return out;
}

}  // namespace

SimOutcome run_relay_trials(const LdpcCode& code, const LabeledConstellation& c,
                            double theta, const DecodeFunction& f, double snr_db,
                            int trials, std::uint64_t seed, int jobs, bool early_exit) {
    const ChannelPair h = ChannelPair::from_thetas(theta, 0.0);
    const RelayConstellation rc = relay_constellation(c, h, f);

    SimOutcome out;
    out.snr_db = snr_db;
    out.theta = theta;

    std::vector<TrialResult> results(trials);
    const int wave = std::max(1, jobs);
    for (int first = 0; first < trials; first += wave) {
        const int count = std::min(wave, trials - first);
        parallel_for(count, jobs, [&](std::size_t i) {
            results[first + i] =
                run_one_trial(code, c, rc, f, theta, snr_db, seed, first + static_cast<int>(i));
        });
        if (early_exit) {
            bool failed = false;
            for (int i = 0; i < first + count; ++i) failed |= results[i].frame_error;
            if (failed) {
                trials = first + count;  // trials actually run
                break;
            }
        }
    }
    out.trials = trials;
    for (int i = 0; i < trials; ++i) {
        out.bit_errors += results[i].bit_errors;
        out.frame_errors += results[i].frame_error ? 1 : 0;
    }
    return out;
}

double required_snr_db(const LdpcCode& code, const LabeledConstellation& c,
                       double theta, const DecodeFunction& f, int trials,
                       double lo_db, double hi_db, std::uint64_t seed, int jobs) {
    auto zero_errors = [&](double snr) {
        return run_relay_trials(code, c, theta, f, snr, trials, seed, jobs, true)
                   .frame_errors == 0;
    };
    if (!zero_errors(hi_db))
        throw WindowNotBracketing("no zero-error run at the window top");
    if (zero_errors(lo_db))
        throw WindowNotBracketing("zero-error run already at the window bottom");
    while (hi_db - lo_db > 0.1) {
        const double mid = 0.5 * (lo_db + hi_db);
        (zero_errors(mid) ? hi_db : lo_db) = mid;
    }
    return hi_db;
}

}  // namespace plnc
