#include "qiopa/macrostate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qiopa/math_util.hpp"

namespace qiopa {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::int64_t kTermBudget = 50'000'000;

// i * log(x) with the i = 0, x = 0 corner defined as 0 (empty product)
inline double ilog(std::int64_t i, double x) {
    if (i == 0) return 0.0;
    return static_cast<double>(i) * std::log(x);
}

} // namespace

EquatorialBasis::EquatorialBasis(double phase) : phi(wrap_phase(phase)) {
    if (!std::isfinite(phase)) throw std::invalid_argument("basis phase must be finite");
}

double MacroLabel::canonical_phase() const {
    return kind == Kind::Plus ? wrap_phase(phi) : wrap_phase(phi + M_PI);
}

double SignedLog::value() const {
    return sign == 0 ? 0.0 : sign * std::exp(log_abs);
}

SignedLog gamma_coefficient(std::int64_t i, std::int64_t j, const GainParams& gain) {
    if (i < 0 || j < 0) throw std::invalid_argument("gamma indices must be nonnegative");
    SignedLog r;
    r.sign = (i % 2 == 0) ? 1 : -1;
    if (gain.Gamma == 0.0 && i + j > 0) {
        r.log_abs = kNegInf;
        return r;
    }
    r.log_abs = -2.0 * gain.log_C + ilog(i + j, gain.Gamma / 2.0);
    return r;
}

double log_f_term(std::int64_t i, const GainParams& gain) {
    if (gain.Gamma == 0.0) return i == 0 ? 0.0 : kNegInf;
    return -3.0 * gain.log_C + std::log(static_cast<double>(2 * i + 1))
         + log_binomial(2 * i, i) + ilog(i, gain.Gamma * gain.Gamma / 4.0);
}

double log_h_term(std::int64_t j, const GainParams& gain) {
    if (gain.Gamma == 0.0) return j == 0 ? 0.0 : kNegInf;
    return -gain.log_C + log_binomial(2 * j, j) + ilog(j, gain.Gamma * gain.Gamma / 4.0);
}

double f_ratio(std::int64_t i, const GainParams& gain) {
    const double g2 = gain.Gamma * gain.Gamma;
    return g2 * static_cast<double>(2 * i + 3) / static_cast<double>(2 * i + 2);
}

double h_ratio(std::int64_t j, const GainParams& gain) {
    const double g2 = gain.Gamma * gain.Gamma;
    return g2 * static_cast<double>(2 * j + 1) / static_cast<double>(2 * j + 2);
}

double f_tail_bound(std::int64_t last_i, double last_f, const GainParams& gain) {
    // f's ratio decreases, so the first ratio past last_i dominates the tail
    const double r = f_ratio(last_i, gain);
    if (r >= 1.0) return std::numeric_limits<double>::infinity();
    return last_f * r / (1.0 - r);
}

double h_tail_bound(std::int64_t last_j, double last_h, const GainParams& gain) {
    // h's ratios are all below Gamma^2
    const double r = gain.Gamma * gain.Gamma;
    if (r >= 1.0) return std::numeric_limits<double>::infinity();
    (void)last_j;
    return last_h * r / (1.0 - r);
}

double occupation_probability(const MacroLabel& label, const FockOccupation& occ,
                              const GainParams& gain) {
    if (occ.p < 0 || occ.q < 0) throw std::invalid_argument("occupation counts must be nonnegative");
    std::int64_t odd = occ.p, even = occ.q;
    if (label.kind == MacroLabel::Kind::Perp) std::swap(odd, even);
    if (odd % 2 == 0 || even % 2 != 0) return 0.0;
    const std::int64_t i = (odd - 1) / 2;
    const std::int64_t j = even / 2;
    const double lf = log_f_term(i, gain);
    const double lh = log_h_term(j, gain);
    if (lf == kNegInf || lh == kNegInf) return 0.0;
    return std::exp(lf + lh);
}

namespace {

struct SeriesSum {
    double sum = 0.0;
    std::int64_t terms = 0;
};

// Sums weight(i) * exp(log_term(i)) until the certified tail of the weighted
// series drops below epsilon. `mean_weighted` switches between the plain mass
// series and the photon-number-weighted one.
enum class Series { F, H };
enum class Weight { One, Photons };

SeriesSum sum_series(Series s, Weight w, const GainParams& gain, double epsilon) {
    SeriesSum out;
    if (gain.Gamma == 0.0) {
        // point mass at index 0: mass 1, photons 1 (odd mode) or 0 (even mode)
        out.sum = (w == Weight::One) ? 1.0
                : (s == Series::F ? 1.0 : 0.0);
        out.terms = 1;
        return out;
    }
    double term = std::exp(s == Series::F ? log_f_term(0, gain) : log_h_term(0, gain));
    for (std::int64_t i = 0;; ++i) {
        const double photons = static_cast<double>(s == Series::F ? 2 * i + 1 : 2 * i);
        out.sum += (w == Weight::One) ? term : photons * term;
        ++out.terms;
        if (out.terms > kTermBudget)
            throw std::runtime_error("series did not converge within term budget (g = "
                                     + std::to_string(gain.g) + ")");
        const double r = (s == Series::F) ? f_ratio(i, gain) : gain.Gamma * gain.Gamma;
        if (r < 1.0) {
            // certified geometric bound on what remains; for the photon-
            // weighted series the extra 2k growth adds the r/(1-r)^2 term
            double tail = term * r / (1.0 - r);
            if (w == Weight::Photons)
                tail = tail * (photons + 2.0) + term * 2.0 * r * r / sq(1.0 - r);
            if (tail < epsilon) break;
        }
        term *= (s == Series::F) ? f_ratio(i, gain) : h_ratio(i, gain);
    }
    return out;
}

} // namespace

double normalization_defect(const MacroLabel& label, const GainParams& gain,
                            double tail_epsilon) {
    (void)label; // both labels share the same (i, j) mass series
    if (tail_epsilon <= 0.0) throw std::invalid_argument("tail_epsilon must be positive");
    const double fs = sum_series(Series::F, Weight::One, gain, tail_epsilon / 2.0).sum;
    const double hs = sum_series(Series::H, Weight::One, gain, tail_epsilon / 2.0).sum;
    return std::abs(1.0 - fs * hs);
}

double mean_photon_number(const MacroLabel& label, ModeSelect mode,
                          const GainParams& gain, MomentMethod method) {
    (void)label; // own-mode vs orthogonal-mode is already resolved by `mode`
    if (method == MomentMethod::Analytic)
        return mode == ModeSelect::Parallel ? 3.0 * gain.mbar + 1.0 : gain.mbar;
    // numeric: E[p] = sum (2i+1) f(i), E[q] = sum (2j) h(j); the orthogonal
    // marginal integrates out exactly because each marginal sums to one
    const double scale = std::max(1.0, 3.0 * gain.mbar + 1.0);
    const double eps = 1e-9 * scale;
    const SeriesSum m = (mode == ModeSelect::Parallel)
        ? sum_series(Series::F, Weight::Photons, gain, eps)
        : sum_series(Series::H, Weight::Photons, gain, eps);
    return m.sum;
}

} // namespace qiopa
