#include "qiopa/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "qiopa/dense_state.hpp"
#include "qiopa/math_util.hpp"

namespace qiopa {

namespace {

constexpr std::int64_t kTermBudget = 10'000'000;

enum class Marginal { F, H };

std::vector<double> build_cdf(Marginal which, const GainParams& gain, double epsilon) {
    std::vector<double> cdf;
    if (gain.Gamma == 0.0) {
        cdf.push_back(1.0);
        return cdf;
    }
    double term = std::exp(which == Marginal::F ? log_f_term(0, gain) : log_h_term(0, gain));
    double cum = 0.0;
    for (std::int64_t k = 0;; ++k) {
        cum += term;
        cdf.push_back(cum);
        if (static_cast<std::int64_t>(cdf.size()) > kTermBudget)
            throw std::runtime_error("marginal table did not converge within budget (g = "
                                     + std::to_string(gain.g) + ")");
        const double tail = (which == Marginal::F) ? f_tail_bound(k, term, gain)
                                                   : h_tail_bound(k, term, gain);
        if (tail < epsilon && std::isfinite(tail)) break;
        term *= (which == Marginal::F) ? f_ratio(k, gain) : h_ratio(k, gain);
    }
    return cdf;
}

std::int64_t draw_index(const std::vector<double>& cdf, CounterRng& rng) {
    // u is rescaled to the realized table mass so the truncated tail folds
    // into the last bucket instead of biasing toward it
    const double u = rng.next_double() * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return it == cdf.end() ? static_cast<std::int64_t>(cdf.size()) - 1
                           : static_cast<std::int64_t>(it - cdf.begin());
}

} // namespace

MarginalTables build_marginal_tables(const GainParams& gain, double tail_epsilon) {
    if (tail_epsilon <= 0.0) throw std::invalid_argument("tail_epsilon must be positive");
    MarginalTables t;
    t.gain = gain;
    t.cdf_i = build_cdf(Marginal::F, gain, tail_epsilon / 2.0);
    t.cdf_j = build_cdf(Marginal::H, gain, tail_epsilon / 2.0);
    t.tail_epsilon = tail_epsilon;
    return t;
}

FockOccupation sample_occupation(const MacroLabel& label, const MarginalTables& tables,
                                 CounterRng& rng) {
    const std::int64_t i = draw_index(tables.cdf_i, rng);
    const std::int64_t j = draw_index(tables.cdf_j, rng);
    const std::int64_t odd = 2 * i + 1;
    const std::int64_t even = 2 * j;
    if (label.kind == MacroLabel::Kind::Plus) return {odd, even};
    return {even, odd};
}

MixtureWeights conditional_mixture(double phi_A, AliceOutcome outcome, double phi_B) {
    if (!std::isfinite(phi_A) || !std::isfinite(phi_B))
        throw std::invalid_argument("phases must be finite");
    const double half = 0.5 * (phi_B - phi_A);
    const double s = std::sin(half) * std::sin(half);
    MixtureWeights w;
    if (outcome == AliceOutcome::Plus) {
        w.w_parallel = s;
        w.w_perp = 1.0 - s;
    } else {
        w.w_parallel = 1.0 - s;
        w.w_perp = s;
    }
    return w;
}

AliceResult sample_alice(double phi_A, CounterRng& rng) {
    AliceResult r;
    r.outcome = rng.next_bool() ? AliceOutcome::Plus : AliceOutcome::Perp;
    r.projector_phase = r.outcome == AliceOutcome::Plus ? wrap_phase(phi_A)
                                                        : wrap_phase(phi_A + M_PI);
    return r;
}

namespace {

// both amplified components expressed in the phi_B number basis
struct ConditionalParts {
    DenseTwoModeState parallel, perp;
    std::complex<double> c_parallel, c_perp; // exact projection amplitudes
};

ConditionalParts conditional_parts(const GainParams& gain, double phi_A, AliceOutcome outcome,
                                   double phi_B, int cutoff, double max_tail) {
    ConditionalParts parts;
    parts.parallel = build_own_basis(MacroLabel::plus(phi_B), gain, cutoff, max_tail);
    parts.perp = build_own_basis(MacroLabel::perp(phi_B), gain, cutoff, max_tail);
    // projecting the pair state on |1 chi> at Alice leaves Bob in
    //   <1chi|1phiB> Phi_perp - <1chi|1phiB perp> Phi_parallel
    // with <1chi|1phi> = (1 + e^{i(phi - chi)}) / 2
    const double chi = outcome == AliceOutcome::Plus ? phi_A : phi_A + M_PI;
    const std::complex<double> e = std::exp(std::complex<double>(0.0, phi_B - chi));
    parts.c_parallel = -0.5 * (1.0 - e);
    parts.c_perp = 0.5 * (1.0 + e);
    return parts;
}

} // namespace

std::vector<double> exact_conditional_statistics(const GainParams& gain, double phi_A,
                                                 AliceOutcome outcome, double phi_B,
                                                 int cutoff, double max_tail) {
    const ConditionalParts parts =
        conditional_parts(gain, phi_A, outcome, phi_B, cutoff, max_tail);
    std::vector<std::complex<double>> amps(parts.parallel.amps.size());
    double norm2 = 0.0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        amps[k] = parts.c_parallel * parts.parallel.amps[k] + parts.c_perp * parts.perp.amps[k];
        norm2 += std::norm(amps[k]);
    }
    if (norm2 <= 0.0) throw std::runtime_error("conditional projection has zero support");
    std::vector<double> probs(amps.size());
    for (std::size_t k = 0; k < amps.size(); ++k) probs[k] = std::norm(amps[k]) / norm2;
    return probs;
}

std::vector<double> mixture_conditional_statistics(const GainParams& gain, double phi_A,
                                                   AliceOutcome outcome, double phi_B,
                                                   int cutoff, double max_tail) {
    const ConditionalParts parts =
        conditional_parts(gain, phi_A, outcome, phi_B, cutoff, max_tail);
    const MixtureWeights w = conditional_mixture(phi_A, outcome, phi_B);
    std::vector<double> probs(parts.parallel.amps.size());
    double total = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        probs[k] = w.w_parallel * std::norm(parts.parallel.amps[k])
                 + w.w_perp * std::norm(parts.perp.amps[k]);
        total += probs[k];
    }
    if (total <= 0.0) throw std::runtime_error("conditional mixture has zero support");
    for (double& p : probs) p /= total;
    return probs;
}

} // namespace qiopa
