#include "qiopa/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

#include "qiopa/math_util.hpp"

namespace qiopa {

namespace {

constexpr std::int64_t kChunk = 1 << 16;

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void tabulate(const TrialRecord& rec, PointResult& out) {
    ++out.counts.n_total;
    if (!rec.triggered) return;
    const double signal = rec.detected_plus + rec.detected_minus;
    out.signal_sum_triggered += signal;
    out.signal_sqsum_triggered += signal * signal;
    if (rec.bob == OFOutcome::Inconclusive) {
        ++out.counts.n_inconclusive;
        return;
    }
    out.signal_sum_accepted += signal;
    out.signal_sqsum_accepted += signal * signal;
    const bool alice_plus = rec.alice == AliceOutcome::Plus;
    const bool bob_plus = rec.bob == OFOutcome::Plus;
    if (alice_plus && bob_plus) ++out.counts.n_pp;
    else if (alice_plus) ++out.counts.n_pm;
    else if (bob_plus) ++out.counts.n_mp;
    else ++out.counts.n_mm;
}

} // namespace

void ExperimentConfig::validate() const {
    detection.validate();
    if (trials <= 0) throw std::invalid_argument("trials must be positive");
    if (!std::isfinite(phi_B)) throw std::invalid_argument("phi_B must be finite");
    for (double phi : phi_A_list)
        if (!std::isfinite(phi)) throw std::invalid_argument("scan phases must be finite");
    if (threads < 0) throw std::invalid_argument("threads must be nonnegative");
}

CoincidenceCounts& CoincidenceCounts::operator+=(const CoincidenceCounts& o) {
    n_pp += o.n_pp;
    n_pm += o.n_pm;
    n_mp += o.n_mp;
    n_mm += o.n_mm;
    n_inconclusive += o.n_inconclusive;
    n_total += o.n_total;
    return *this;
}

PointResult& PointResult::merge(const PointResult& o) {
    counts += o.counts;
    signal_sum_triggered += o.signal_sum_triggered;
    signal_sqsum_triggered += o.signal_sqsum_triggered;
    signal_sum_accepted += o.signal_sum_accepted;
    signal_sqsum_accepted += o.signal_sqsum_accepted;
    return *this;
}

ExperimentRunner::ExperimentRunner(ExperimentConfig config) : config_(std::move(config)) {
    config_.validate();
    tables_ = build_marginal_tables(config_.gain, 1e-9);
}

TrialRecord ExperimentRunner::run_trial(double phi_A, RngStream stream) const {
    CounterRng rng(stream);
    TrialRecord rec;
    const DetectionParams& det = config_.detection;
    if (det.eta_A < 1.0 && rng.next_double() >= det.eta_A) return rec;
    rec.triggered = true;

    const AliceResult alice = sample_alice(phi_A, rng);
    rec.alice = alice.outcome;
    if (config_.decorrelate)
        rec.alice = rng.next_bool() ? AliceOutcome::Plus : AliceOutcome::Perp;

    const MixtureWeights w = conditional_mixture(phi_A, alice.outcome, config_.phi_B);
    const MacroLabel label = (rng.next_double() < w.w_parallel)
                                 ? MacroLabel::plus(config_.phi_B)
                                 : MacroLabel::perp(config_.phi_B);
    const FockOccupation occ = sample_occupation(label, tables_, rng);
    const std::int64_t dp = thin_binomial(occ.p, det.eta_B, rng);
    const std::int64_t dq = thin_binomial(occ.q, det.eta_B, rng);
    rec.detected_plus = pm_response(dp, det, rng);
    rec.detected_minus = pm_response(dq, det, rng);

    switch (config_.discriminator) {
    case Discriminator::OrthogonalityFilter:
        rec.bob = orthogonality_filter({rec.detected_plus, rec.detected_minus}, det.threshold);
        break;
    case Discriminator::IdealParity:
        rec.bob = ideal_parity_discriminator(occ);
        break;
    case Discriminator::IdealDifference:
        rec.bob = ideal_difference_discriminator(occ);
        break;
    }
    return rec;
}

template <typename PerTrial>
PointResult ExperimentRunner::run_point_impl(double phi_A, std::uint64_t point_index,
                                             PerTrial&& sink) const {
    const std::int64_t trials = config_.trials;
    const std::int64_t chunks = (trials + kChunk - 1) / kChunk;
    const int nthreads =
        static_cast<int>(std::min<std::int64_t>(resolve_threads(config_.threads), chunks));
    const std::uint64_t base = config_.stream_base
                             + point_index * static_cast<std::uint64_t>(trials);

    std::vector<PointResult> partial(static_cast<std::size_t>(chunks));
    std::atomic<std::int64_t> next{0};

    auto worker = [&] {
        for (;;) {
            const std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= chunks) return;
            PointResult local;
            local.phi_A = phi_A;
            const std::int64_t lo = c * kChunk;
            const std::int64_t hi = std::min(trials, lo + kChunk);
            for (std::int64_t t = lo; t < hi; ++t) {
                const TrialRecord rec =
                    run_trial(phi_A, {config_.seed, base + static_cast<std::uint64_t>(t)});
                tabulate(rec, local);
                sink(t, rec);
            }
            partial[static_cast<std::size_t>(c)] = local;
        }
    };

    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // merge in chunk order: floating sums stay independent of scheduling
    PointResult out;
    out.phi_A = phi_A;
    for (const auto& p : partial) out.merge(p);
    return out;
}

PointResult ExperimentRunner::run_point(double phi_A, std::uint64_t point_index) const {
    return run_point_impl(phi_A, point_index, [](std::int64_t, const TrialRecord&) {});
}

PointResult ExperimentRunner::run_point_retained(double phi_A, std::uint64_t point_index,
                                                 std::vector<RawTrial>& raw) const {
    raw.assign(static_cast<std::size_t>(config_.trials), RawTrial{});
    return run_point_impl(phi_A, point_index, [&raw](std::int64_t t, const TrialRecord& rec) {
        RawTrial& r = raw[static_cast<std::size_t>(t)];
        r.detected_plus = static_cast<float>(rec.detected_plus);
        r.detected_minus = static_cast<float>(rec.detected_minus);
        r.alice = rec.alice == AliceOutcome::Plus ? 0 : 1;
        r.triggered = rec.triggered ? 1 : 0;
    });
}

std::vector<PointResult> ExperimentRunner::run_fringe_scan() const {
    if (config_.phi_A_list.empty())
        throw std::invalid_argument("scan requires at least one phase point");
    std::vector<PointResult> out;
    out.reserve(config_.phi_A_list.size());
    for (std::size_t k = 0; k < config_.phi_A_list.size(); ++k)
        out.push_back(run_point(config_.phi_A_list[k], static_cast<std::uint64_t>(k)));
    return out;
}

VisibilityEstimate estimate_visibility(const CoincidenceCounts& counts, int basis) {
    const std::int64_t n = counts.conclusive();
    if (n == 0) throw std::runtime_error("no conclusive events: visibility undefined");
    const double agree = static_cast<double>(counts.n_pp + counts.n_mm);
    const double f = agree / static_cast<double>(n);
    VisibilityEstimate v;
    v.value = std::abs(2.0 * f - 1.0);
    v.stderr_ = 2.0 * std::sqrt(std::max(0.0, f * (1.0 - f) / static_cast<double>(n)));
    // degenerate tables (all mass in one diagonal) still carry 1/n-scale
    // uncertainty; floor the error at the plus-four binomial estimate
    if (v.stderr_ == 0.0) {
        const double f4 = (agree + 2.0) / (static_cast<double>(n) + 4.0);
        v.stderr_ = 2.0 * std::sqrt(f4 * (1.0 - f4) / (static_cast<double>(n) + 4.0));
    }
    v.basis = basis;
    return v;
}

SEstimate s_statistic(const std::vector<VisibilityEstimate>& vs) {
    if (vs.empty() || vs.size() > 3)
        throw std::invalid_argument("s_statistic takes 1 to 3 visibility estimates");
    std::set<int> bases;
    SEstimate s;
    double var = 0.0;
    for (const auto& v : vs) {
        if (!bases.insert(v.basis).second)
            throw std::invalid_argument("duplicate basis in s_statistic");
        s.value += v.value;
        var += v.stderr_ * v.stderr_;
    }
    s.stderr_ = std::sqrt(var);
    return s;
}

FilterProbability filtering_probability(const CoincidenceCounts& counts) {
    const std::int64_t triggered = counts.triggered();
    if (triggered == 0) throw std::runtime_error("no triggered trials: filter probability undefined");
    FilterProbability fp;
    const double p = static_cast<double>(counts.conclusive()) / static_cast<double>(triggered);
    fp.value = p;
    fp.stderr_ = std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(triggered)));
    return fp;
}

PhotonEstimate inferred_source_photons(const PointResult& point, double eta, bool accepted_only) {
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    const std::int64_t n = accepted_only ? point.counts.conclusive() : point.counts.triggered();
    if (n == 0) throw std::runtime_error("no trials in the requested subset");
    const double sum = accepted_only ? point.signal_sum_accepted : point.signal_sum_triggered;
    const double sq = accepted_only ? point.signal_sqsum_accepted : point.signal_sqsum_triggered;
    const double mean = sum / static_cast<double>(n);
    PhotonEstimate est;
    est.samples = n;
    est.value = mean / eta;
    if (n > 1) {
        const double var = std::max(0.0, (sq - static_cast<double>(n) * mean * mean)
                                             / static_cast<double>(n - 1));
        est.stderr_ = std::sqrt(var / static_cast<double>(n)) / eta;
    }
    return est;
}

FringeFit fit_fringe(const std::vector<double>& phi, const std::vector<double>& y, double phi_B) {
    const std::size_t n = phi.size();
    if (n != y.size() || n < 4)
        throw std::invalid_argument("fringe fit needs matching arrays with at least 4 points");

    // free fit y ~ a + b cos(phi) + c sin(phi): 3x3 normal equations
    double S[3][3] = {{0}};
    double t[3] = {0, 0, 0};
    for (std::size_t k = 0; k < n; ++k) {
        const double x[3] = {1.0, std::cos(phi[k]), std::sin(phi[k])};
        for (int r = 0; r < 3; ++r) {
            t[r] += x[r] * y[k];
            for (int c = 0; c < 3; ++c) S[r][c] += x[r] * x[c];
        }
    }
    // Gaussian elimination with partial pivoting
    double A[3][4];
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) A[r][c] = S[r][c];
        A[r][3] = t[r];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        if (A[col][col] == 0.0) throw std::runtime_error("singular fringe fit system");
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double m = A[r][col] / A[col][col];
            for (int c = col; c < 4; ++c) A[r][c] -= m * A[col][c];
        }
    }
    const double a = A[0][3] / A[0][0];
    const double b = A[1][3] / A[1][1];
    const double c = A[2][3] / A[2][2];

    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(n);
    double sst = 0.0, ssr_free = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sst += sq(y[k] - ybar);
        ssr_free += sq(y[k] - (a + b * std::cos(phi[k]) + c * std::sin(phi[k])));
    }

    FringeFit fit;
    fit.offset = a;
    fit.amplitude = std::sqrt(b * b + c * c);
    fit.phase = std::atan2(-c, b); // y ~ a + amp cos(phi + phase)
    fit.r2 = sst > 0.0 ? 1.0 - ssr_free / sst : 1.0;

    // constrained model A + B cos(phi - phi_B + pi)
    double sx = 0.0, sy_ = 0.0, sxx = 0.0, sxy = 0.0;
    std::vector<double> xc(n);
    for (std::size_t k = 0; k < n; ++k) {
        xc[k] = std::cos(phi[k] - phi_B + M_PI);
        sx += xc[k];
        sy_ += y[k];
        sxx += xc[k] * xc[k];
        sxy += xc[k] * y[k];
    }
    const double nn = static_cast<double>(n);
    const double det = nn * sxx - sx * sx;
    if (det == 0.0) throw std::runtime_error("degenerate constrained fringe fit");
    const double B = (nn * sxy - sx * sy_) / det;
    const double Aoff = (sy_ - B * sx) / nn;
    double ssr_con = 0.0;
    for (std::size_t k = 0; k < n; ++k) ssr_con += sq(y[k] - (Aoff + B * xc[k]));
    fit.r2_constrained = sst > 0.0 ? 1.0 - ssr_con / sst : 1.0;

    fit.visibility = Aoff != 0.0 ? std::abs(B) / Aoff : 0.0;
    if (n > 2 && Aoff != 0.0) {
        const double s2 = ssr_con / static_cast<double>(n - 2);
        const double var_b = s2 * nn / det;
        const double var_a = s2 * sxx / det;
        const double cov_ab = -s2 * sx / det;
        const double db = (B >= 0 ? 1.0 : -1.0) / Aoff;
        const double da = -std::abs(B) / (Aoff * Aoff);
        fit.visibility_stderr =
            std::sqrt(std::max(0.0, db * db * var_b + da * da * var_a + 2.0 * da * db * cov_ab));
    }
    return fit;
}

double mean_arm_signal(const GainParams& gain, double eta_B) {
    return eta_B * (4.0 * gain.mbar + 1.0) / 2.0;
}

namespace {

struct BasisRun {
    int basis;
    double phase;
};

constexpr BasisRun kWitnessBases[2] = {{2, kBasisPhaseRL}, {3, kBasisPhasePM}};

} // namespace

WitnessResult run_witness(const ExperimentConfig& base) {
    WitnessResult res;
    std::vector<VisibilityEstimate> vs;
    PointResult pooled;
    for (const BasisRun& b : kWitnessBases) {
        ExperimentConfig cfg = base;
        cfg.phi_B = b.phase;
        cfg.phi_A_list = {b.phase};
        cfg.stream_base = base.stream_base
                        + (static_cast<std::uint64_t>(b.basis) << 48);
        ExperimentRunner runner(cfg);
        const PointResult point = runner.run_point(b.phase, 0);
        const VisibilityEstimate v = estimate_visibility(point.counts, b.basis);
        vs.push_back(v);
        if (b.basis == 2) res.v2 = v;
        else res.v3 = v;
        pooled.merge(point);
    }
    res.s = s_statistic(vs);
    res.p_filter = filtering_probability(pooled.counts);
    res.n_unfiltered = inferred_source_photons(pooled, base.detection.eta_B, false);
    res.n_accepted = inferred_source_photons(pooled, base.detection.eta_B, true);
    res.bell = bell_diagonal_report(0.0, res.v2.value, res.v3.value);
    res.violated = res.s.value > 1.0 && (res.s.value - 1.0) >= 3.0 * res.s.stderr_;
    return res;
}

std::vector<SweepPoint> threshold_sweep(const ExperimentConfig& base,
                                        const std::vector<double>& thresholds) {
    if (thresholds.empty()) throw std::invalid_argument("thresholds list is empty");
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        if (thresholds[k] < 0.0) throw std::invalid_argument("thresholds must be nonnegative");
        if (k > 0 && thresholds[k] < thresholds[k - 1])
            throw std::invalid_argument("thresholds must be sorted ascending");
    }

    // one retained pool per basis; the discriminator is necessarily the filter
    std::vector<RawTrial> raw[2];
    for (int bi = 0; bi < 2; ++bi) {
        ExperimentConfig cfg = base;
        cfg.discriminator = Discriminator::OrthogonalityFilter;
        cfg.phi_B = kWitnessBases[bi].phase;
        cfg.phi_A_list = {kWitnessBases[bi].phase};
        cfg.stream_base = base.stream_base
                        + (static_cast<std::uint64_t>(kWitnessBases[bi].basis) << 48);
        ExperimentRunner runner(cfg);
        runner.run_point_retained(kWitnessBases[bi].phase, 0, raw[bi]);
    }

    std::vector<SweepPoint> out;
    out.reserve(thresholds.size());
    for (double xi : thresholds) {
        SweepPoint sp;
        sp.threshold = xi;
        CoincidenceCounts pooled;
        std::vector<VisibilityEstimate> vs;
        for (int bi = 0; bi < 2; ++bi) {
            CoincidenceCounts counts;
            for (const RawTrial& r : raw[bi]) {
                ++counts.n_total;
                if (!r.triggered) continue;
                const OFOutcome o = orthogonality_filter(
                    {static_cast<double>(r.detected_plus), static_cast<double>(r.detected_minus)}, xi);
                if (o == OFOutcome::Inconclusive) {
                    ++counts.n_inconclusive;
                    continue;
                }
                const bool ap = r.alice == 0;
                const bool bp = o == OFOutcome::Plus;
                if (ap && bp) ++counts.n_pp;
                else if (ap) ++counts.n_pm;
                else if (bp) ++counts.n_mp;
                else ++counts.n_mm;
            }
            const VisibilityEstimate v = estimate_visibility(counts, kWitnessBases[bi].basis);
            vs.push_back(v);
            if (bi == 0) sp.v2 = v;
            else sp.v3 = v;
            pooled += counts;
        }
        sp.p = filtering_probability(pooled);
        sp.s = s_statistic(vs);
        out.push_back(sp);
    }
    return out;
}

} // namespace qiopa
