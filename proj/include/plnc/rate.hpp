#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "plnc/f2.hpp"
#include "plnc/modulation.hpp"

namespace plnc {

// Differential entropy (base 2) of the equal-weight Gaussian mixture
// centered at `points` (multiset; duplicates raise component weights).
// Deterministic order-24 Gauss-Hermite product rule per component.
double mixture_entropy_bits(std::span<const cplx> points, const NoiseModel& noise);

// Independent Monte-Carlo estimate of the same quantity: counter-based
// chunk seeding, control variate against the sampled component. Used as
// the cross-check oracle for the quadrature path.
double mc_mixture_entropy_bits(std::span<const cplx> points, const NoiseModel& noise,
                               std::uint64_t samples, std::uint64_t seed);

struct RateReport {
    std::string f_id;
    ChannelPair h;
    double snr_db = 0.0;
    std::vector<std::pair<PartitionSpec, double>> terms;  // spec -> I bits
    double rate = 0.0;      // bits per binary code symbol: min term/p
    double sum_rate = 0.0;  // ell * rate, bits per complex symbol
};

// Mutual-information engine for one (constellation, gains, noise) triple.
// Every term is a difference of conditional entropies H(Y | T [x_a; x_b]);
// those are cached keyed by the row space of T, so equivalent
// conditionings across functions and partitions are computed once.
class RateEvaluator {
  public:
    RateEvaluator(const LabeledConstellation& c, const ChannelPair& h,
                  const NoiseModel& noise);

    int ell() const { return ell_; }
    const NoiseModel& noise() const { return noise_; }
    const ChannelPair& gains() const { return h_; }
    const std::vector<cplx>& pair_points() const { return pair_points_; }

    // H(Y | T [x_a; x_b]) for the row space spanned by `rows` (words over
    // F2^(2 ell)); empty span gives H(Y).
    double conditional_entropy_bits(std::span<const std::uint64_t> rows);

    double entropy_bits() { return conditional_entropy_bits({}); }

    // Theorem-1 term I(Y; {X^k, k in S} | {X^k, k in Sbar}, {X^k + Z_i, k in S_i}).
    double bound_term_bits(const DecodeFunction& f, const PartitionSpec& spec);

    // All partition terms for f; rate = min over specs of term / p.
    RateReport rate_f(const DecodeFunction& f);

    // I(Y; alpha x_a + beta x_b) over GF(4), bits per complex symbol (ell = 2).
    double gf4_rate_bits(Gf4 alpha, Gf4 beta);

    // Decode-and-forward: the same partition bound applied to the stacked
    // 2*ell levels; bits per binary code symbol (sum rate is 2*ell times).
    double df_rate_per_level_bits();

    // Generic partition term against an arbitrary label map (rows over
    // F2^(2 ell)); spec levels index the map's rows.
    double bound_term_rows_bits(const BinMatrix& label_map, const PartitionSpec& spec);

  private:
    int ell_;
    ChannelPair h_;
    NoiseModel noise_;
    std::vector<cplx> pair_points_;
    std::map<std::uint64_t, double> cache_;
};

// MC counterpart of RateEvaluator::conditional_entropy_bits for oracle
// use: cells listed explicitly, samples split evenly across cells.
double mc_conditional_entropy_bits(std::span<const std::vector<cplx>> cells,
                                   const NoiseModel& noise, std::uint64_t samples,
                                   std::uint64_t seed);

struct GainSet {
    std::vector<ChannelPair> gains;

    // Unit-magnitude gains sweeping the phase difference only:
    // (e^{j theta_k}, 1), theta_k = 2 pi k / steps.
    static GainSet theta_difference_grid(int steps);

    // The full 2-D grid over (theta_a, theta_b), steps points per angle.
    static GainSet theta_grid_2d(int steps);
};

struct UniversalChoice {
    ChannelPair h;
    int best_index = -1;    // index into the function list
    double best_rate = 0.0; // bits per binary code symbol
};

struct UniversalRateResult {
    double rate_per_level = 0.0;  // min over gains of max over f
    double sum_rate = 0.0;        // ell * rate_per_level
    std::vector<UniversalChoice> table;
};

UniversalRateResult universal_rate(const LabeledConstellation& c, const GainSet& gains,
                                   std::span<const DecodeFunction> funcs,
                                   const NoiseModel& noise, int jobs = 1);

// min over gains of max over the nine nonzero (alpha, beta) pairs of
// I(Y; alpha x_a + beta x_b); bits per complex symbol.
struct Gf4UniversalResult {
    double rate_bits = 0.0;
    std::vector<std::pair<Gf4, Gf4>> best;  // per gain
};

Gf4UniversalResult gf4_universal_rate(const LabeledConstellation& c, const GainSet& gains,
                                      const NoiseModel& noise, int jobs = 1);

// Smallest SNR (dB) at which max over funcs of the per-level rate reaches
// `target_rate`; bisection to tol_db. Throws WindowNotBracketing if the
// window does not straddle the target.
double threshold_snr_db(const LabeledConstellation& c, const ChannelPair& h,
                        std::span<const DecodeFunction> funcs, double target_rate,
                        double lo_db, double hi_db, double tol_db = 0.01);

// Index of the rate-maximizing function at the given operating point.
int best_function_index(const LabeledConstellation& c, const ChannelPair& h,
                        std::span<const DecodeFunction> funcs, const NoiseModel& noise);

}  // namespace plnc
