#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "qiopa/concurrence.hpp"
#include "qiopa/detection.hpp"
#include "qiopa/gain.hpp"
#include "qiopa/sampling.hpp"

namespace qiopa {

enum class Discriminator { OrthogonalityFilter, IdealParity, IdealDifference };

// One full run description. `trials` is per phase point. stream_base offsets
// the per-trial RNG streams so independent runs under one seed (e.g. the two
// witness bases) never share a stream.
struct ExperimentConfig {
    GainParams gain;
    DetectionParams detection;
    double phi_B = 0.0;
    std::vector<double> phi_A_list;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    Discriminator discriminator = Discriminator::OrthogonalityFilter;
    int threads = 0;            // 0 picks hardware concurrency
    bool decorrelate = false;   // control mode: recorded Alice outcome is an
                                // independent coin, physics pipeline untouched
    std::uint64_t stream_base = 0;

    void validate() const;
};

// Conclusive 2x2 coincidence table plus the inconclusive tally for one
// analysis setting. n_total counts every trial; the gap to the sum of the
// other five is trigger loss.
struct CoincidenceCounts {
    std::int64_t n_pp = 0, n_pm = 0, n_mp = 0, n_mm = 0;
    std::int64_t n_inconclusive = 0;
    std::int64_t n_total = 0;

    std::int64_t conclusive() const { return n_pp + n_pm + n_mp + n_mm; }
    std::int64_t triggered() const { return conclusive() + n_inconclusive; }
    CoincidenceCounts& operator+=(const CoincidenceCounts& o);
};

struct TrialRecord {
    bool triggered = false;
    AliceOutcome alice = AliceOutcome::Plus;
    OFOutcome bob = OFOutcome::Inconclusive;
    double detected_plus = 0.0;
    double detected_minus = 0.0;
};

// Per-point aggregates: the coincidence table plus detected-signal sums for
// the photon-number estimates.
struct PointResult {
    double phi_A = 0.0;
    CoincidenceCounts counts;
    double signal_sum_triggered = 0.0; // sum of (d+ + d-) over triggered trials
    double signal_sqsum_triggered = 0.0;
    double signal_sum_accepted = 0.0;  // same, over conclusive trials only
    double signal_sqsum_accepted = 0.0;

    PointResult& merge(const PointResult& o);
};

// Compact retained trial for threshold re-filtering.
struct RawTrial {
    float detected_plus = 0.0f;
    float detected_minus = 0.0f;
    std::uint8_t alice = 0;     // 0 plus, 1 perp
    std::uint8_t triggered = 0;
};

class ExperimentRunner {
public:
    explicit ExperimentRunner(ExperimentConfig config);

    // one trial, fully determined by (seed, stream)
    TrialRecord run_trial(double phi_A, RngStream stream) const;

    // all trials of one phase point, parallel with deterministic aggregation
    PointResult run_point(double phi_A, std::uint64_t point_index) const;

    // as run_point, additionally filling `raw` (resized to trials) so the
    // filter can be re-applied at other thresholds later
    PointResult run_point_retained(double phi_A, std::uint64_t point_index,
                                   std::vector<RawTrial>& raw) const;

    std::vector<PointResult> run_fringe_scan() const;

    const ExperimentConfig& config() const { return config_; }
    const MarginalTables& tables() const { return tables_; }

private:
    ExperimentConfig config_;
    MarginalTables tables_;

    template <typename PerTrial>
    PointResult run_point_impl(double phi_A, std::uint64_t point_index, PerTrial&& sink) const;
};

struct VisibilityEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    int basis = 0; // 1: H/V, 2: R/L, 3: +/-
};

// V = |P(++) + P(--) - P(+-) - P(-+)| over conclusive events only; binomial
// error propagation. Throws when no conclusive events exist.
VisibilityEstimate estimate_visibility(const CoincidenceCounts& counts, int basis);

struct SEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
};

// S = sum of the supplied visibilities (1 to 3, distinct bases; absent bases
// count as zero), errors in quadrature.
SEstimate s_statistic(const std::vector<VisibilityEstimate>& vs);

// Conclusive fraction among triggered trials.
struct FilterProbability {
    double value = 0.0;
    double stderr_ = 0.0;
};

FilterProbability filtering_probability(const CoincidenceCounts& counts);

// Mean inferred source photon number (d+ + d-)/eta; `accepted_only` selects
// the conclusive subset. Throws when the subset is empty.
struct PhotonEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::int64_t samples = 0;
};

PhotonEstimate inferred_source_photons(const PointResult& point, double eta, bool accepted_only);

// Least-squares harmonic fit y ~ offset + amplitude cos(phi + phase). The
// constrained variant fixes phase to -(phi_B + pi), i.e. the model
// A + B cos(phi_A - phi_B + pi), and reports its own R^2.
struct FringeFit {
    double offset = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
    double r2 = 0.0;
    double r2_constrained = 0.0;
    double visibility = 0.0;        // amplitude / offset from the constrained fit
    double visibility_stderr = 0.0;
};

FringeFit fit_fringe(const std::vector<double>& phi, const std::vector<double>& y, double phi_B);

// The witness pipeline: for each of the two usable bases (R/L at phase
// 3pi/2, +/- at phase 0) runs the anticorrelation setting phi_A = phi_B,
// estimates V, and combines into S with V1 excluded (counted as zero).
struct WitnessResult {
    VisibilityEstimate v2, v3;
    SEstimate s;
    FilterProbability p_filter;
    PhotonEstimate n_unfiltered;
    PhotonEstimate n_accepted;
    BellDiagonalReport bell;
    bool violated = false; // S > 1 at >= 3 sigma
};

WitnessResult run_witness(const ExperimentConfig& base);

struct SweepPoint {
    double threshold = 0.0;
    FilterProbability p;
    VisibilityEstimate v2, v3;
    SEstimate s;
};

// Shared-pool threshold sweep at the two anticorrelation settings: raw
// detected signals are generated once per basis and re-filtered per
// threshold. Thresholds must be nonnegative and sorted ascending.
std::vector<SweepPoint> threshold_sweep(const ExperimentConfig& base,
                                        const std::vector<double>& thresholds);

// Analytic mean detected signal per arm, eta_B (4 mbar + 1)/2; the
// "multiple of the mean arm signal" threshold form resolves against this.
double mean_arm_signal(const GainParams& gain, double eta_B);

constexpr double kBasisPhaseRL = 3.0 * M_PI / 2.0; // basis 2, "plus" arm = circular R
constexpr double kBasisPhasePM = 0.0;              // basis 3, "plus" arm = linear +45

} // namespace qiopa
