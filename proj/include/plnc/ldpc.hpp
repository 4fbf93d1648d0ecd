#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "plnc/f2.hpp"
#include "plnc/modulation.hpp"

namespace plnc {

// Regular (3,6) LDPC code, rate 1/2, girth >= 6. Edges are numbered
// var-major: edge e = 3*v + t connects variable v to edge_check[e].
struct LdpcCode {
    int n = 0;
    int m = 0;
    std::vector<std::int32_t> edge_check;
    std::vector<std::array<std::int32_t, 6>> check_edges;

    static constexpr int var_degree = 3;
    static constexpr int check_degree = 6;

    int var_of_edge(int e) const { return e / var_degree; }
    double rate() const { return 1.0 - static_cast<double>(m) / n; }

    bool syndrome_ok(std::span<const std::uint8_t> bits) const;
};

// Greedy degree-balanced placement that never reuses a check pair, so the
// Tanner graph has no 4-cycles. Deterministic given the seed; restarts
// with derived seeds before giving up.
LdpcCode build_code(int n, std::uint64_t seed);

struct BpResult {
    std::vector<std::uint8_t> hard;
    std::vector<double> posterior;
    bool converged = false;
    int iterations = 0;
};

// Sum-product decoding (tanh rule) of one codeword; llr[v] > 0 favors 0.
BpResult bp_decode(const LdpcCode& code, std::span<const double> llr, int max_iter);

using BitRows = std::vector<std::vector<std::uint8_t>>;  // ell rows of n bits

// Per-level soft demapping against the relay constellation: the LLR of
// effective codeword bit x_fr^k[i] with the other levels marginalized
// under the supplied priors (x-domain LLRs, row k ignored), then
// translated to the code domain by the coset row (sign flip where
// lambda = 1). Clipped to +-30.
std::vector<double> demap_llr(std::span<const cplx> y, const RelayConstellation& rc,
                              int level, std::span<const std::vector<double>> priors,
                              std::span<const std::uint8_t> lambda_row,
                              const NoiseModel& noise);

struct JointDecodeResult {
    BitRows x_hat;
    bool converged = false;
    int outer_iterations = 0;
};

// Iterative demapping and decoding of all ell effective codewords from
// one received block: outer rounds alternate per-level demapping (with
// extrinsic soft values from the other levels) and inner sum-product
// decoding; stops early once every level has a zero syndrome.
JointDecodeResult joint_decode(std::span<const cplx> y, const LdpcCode& code,
                               const RelayConstellation& rc, const BitRows& lambda_fr,
                               const NoiseModel& noise, int max_outer = 8,
                               int max_inner = 50);

struct SimOutcome {
    int trials = 0;
    long long bit_errors = 0;
    int frame_errors = 0;
    double snr_db = 0.0;
    double theta = 0.0;
};

// Monte-Carlo link trials: random coset leaders, zero messages (the
// transmitted rows are then valid coset codewords), relay-side joint
// decoding, errors counted against the true effective codewords.
// Per-trial seeds derive from (seed, theta, snr, trial) so outcomes do
// not depend on scheduling; early_exit stops after the first errored
// trial (the zero-error verdict is unchanged).
SimOutcome run_relay_trials(const LdpcCode& code, const LabeledConstellation& c,
                            double theta, const DecodeFunction& f, double snr_db,
                            int trials, std::uint64_t seed, int jobs,
                            bool early_exit);

// Smallest SNR (to 0.1 dB) with zero bit errors over `trials` blocks.
// Requires failure at lo_db and success at hi_db.
double required_snr_db(const LdpcCode& code, const LabeledConstellation& c,
                       double theta, const DecodeFunction& f, int trials,
                       double lo_db, double hi_db, std::uint64_t seed, int jobs);

}  // namespace plnc
