#include "qiopa/dense_state.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qiopa/math_util.hpp"

namespace qiopa {

namespace {

using cplx = std::complex<double>;

// generic two-mode passive transform: substitute the creation operator of
// each stored mode by m[row][0] a_H^dag + m[row][1] a_V^dag and re-expand.
// Binomial cascade per amplitude; photon-number sectors are preserved.
DenseTwoModeState apply_mode_matrix(const DenseTwoModeState& in, const cplx m[2][2]) {
    DenseTwoModeState out;
    out.cutoff = in.cutoff;
    out.tail_bound = in.tail_bound;
    out.amps.assign(DenseTwoModeState::tri_size(in.cutoff), cplx{0.0, 0.0});

    const int n = in.cutoff;
    // power tables for the four matrix entries
    std::vector<cplx> p00(n + 1), p01(n + 1), p10(n + 1), p11(n + 1);
    p00[0] = p01[0] = p10[0] = p11[0] = cplx{1.0, 0.0};
    for (int t = 1; t <= n; ++t) {
        p00[t] = p00[t - 1] * m[0][0];
        p01[t] = p01[t - 1] * m[0][1];
        p10[t] = p10[t - 1] * m[1][0];
        p11[t] = p11[t - 1] * m[1][1];
    }

    for (std::int64_t s = 0; s <= n; ++s) {
        for (std::int64_t p = 0; p <= s; ++p) {
            const cplx a = in.amps[in.index(p, s - p)];
            if (a == cplx{0.0, 0.0}) continue;
            const std::int64_t q = s - p;
            const double base = -0.5 * (log_factorial(p) + log_factorial(q));
            for (std::int64_t k = 0; k <= p; ++k) {
                const double ck = log_binomial(p, k);
                for (std::int64_t l = 0; l <= q; ++l) {
                    const std::int64_t h = k + l;
                    const std::int64_t v = s - h;
                    // sqrt((k+l)!(p+q-k-l)!) / sqrt(p! q!) * C(p,k) C(q,l)
                    const double scale = std::exp(base + ck + log_binomial(q, l)
                                                  + 0.5 * (log_factorial(h) + log_factorial(v)));
                    out.amps[out.index(h, v)] += a * scale
                        * p00[k] * p01[p - k] * p10[l] * p11[q - l];
                }
            }
        }
    }
    return out;
}

} // namespace

double DenseTwoModeState::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    return s;
}

double mass_within_cutoff(const GainParams& gain, int cutoff) {
    if (cutoff < 1) return 0.0;
    // sum f(i) h(j) over 2i+1+2j <= cutoff; h prefix sums reused per i
    const std::int64_t jmax = (cutoff - 1) / 2;
    std::vector<double> h_prefix(static_cast<std::size_t>(jmax) + 1);
    double h = std::exp(log_h_term(0, gain));
    for (std::int64_t j = 0; j <= jmax; ++j) {
        h_prefix[j] = (j == 0 ? 0.0 : h_prefix[j - 1]) + h;
        h *= h_ratio(j, gain);
    }
    double mass = 0.0;
    double f = std::exp(log_f_term(0, gain));
    for (std::int64_t i = 0; 2 * i + 1 <= cutoff; ++i) {
        const std::int64_t room = (cutoff - (2 * i + 1)) / 2;
        mass += f * h_prefix[std::min(room, jmax)];
        f *= f_ratio(i, gain);
    }
    return mass;
}

int required_cutoff(const GainParams& gain, double max_tail) {
    // grow geometrically, then bisect to the smallest admissible cutoff
    int hi = 4;
    while (1.0 - mass_within_cutoff(gain, hi) > max_tail) {
        if (hi > (1 << 22))
            throw std::runtime_error("required cutoff unreasonably large at g = "
                                     + std::to_string(gain.g));
        hi *= 2;
    }
    int lo = hi / 2;
    while (lo + 1 < hi) {
        const int mid = (lo + hi) / 2;
        if (1.0 - mass_within_cutoff(gain, mid) > max_tail) lo = mid;
        else hi = mid;
    }
    return hi;
}

DenseTwoModeState build_own_basis(const MacroLabel& label, const GainParams& gain,
                                  int cutoff, double max_tail) {
    if (cutoff < 1) throw std::invalid_argument("cutoff must be at least 1");
    const double inside = mass_within_cutoff(gain, cutoff);
    const double tail = std::max(0.0, 1.0 - inside);
    if (tail > max_tail)
        throw std::domain_error("cutoff " + std::to_string(cutoff)
                                + " leaves truncated mass " + std::to_string(tail)
                                + " > " + std::to_string(max_tail)
                                + "; required cutoff ~ "
                                + std::to_string(required_cutoff(gain, max_tail)));

    DenseTwoModeState st;
    st.cutoff = cutoff;
    st.tail_bound = tail;
    st.amps.assign(DenseTwoModeState::tri_size(cutoff), cplx{0.0, 0.0});

    const double psi = label.canonical_phase();
    const bool swapped = label.kind == MacroLabel::Kind::Perp;
    for (std::int64_t i = 0; 2 * i + 1 <= cutoff; ++i) {
        for (std::int64_t j = 0; 2 * i + 1 + 2 * j <= cutoff; ++j) {
            // |amp| = |gamma_ij| sqrt((2i+1)!(2j)!)/(i! j!)
            const double log_mag = -2.0 * gain.log_C
                + (gain.Gamma == 0.0 && i + j > 0
                       ? -std::numeric_limits<double>::infinity()
                       : (i + j == 0 ? 0.0
                                     : static_cast<double>(i + j) * std::log(gain.Gamma / 2.0)))
                + 0.5 * (log_factorial(2 * i + 1) + log_factorial(2 * j))
                - log_factorial(i) - log_factorial(j);
            if (log_mag == -std::numeric_limits<double>::infinity()) continue;
            const double sign = (i % 2 == 0) ? 1.0 : -1.0;
            // cross-basis phase imprinted by the amplifier's covariance group;
            // reduces to the plain real form at psi = 0
            const cplx phase = std::polar(1.0, -psi * static_cast<double>(i + j));
            const cplx amp = sign * std::exp(log_mag) * phase;
            // in the label's own storage basis Perp occupies (even, odd)
            const std::int64_t p = swapped ? 2 * j : 2 * i + 1;
            const std::int64_t q = swapped ? 2 * i + 1 : 2 * j;
            st.amps[st.index(p, q)] = amp;
        }
    }
    return st;
}

DenseTwoModeState rotate_polarization_basis(const DenseTwoModeState& state, double phase) {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx e = std::polar(1.0, phase);
    const cplx m[2][2] = {{r, r * e}, {r, -r * e}};
    return apply_mode_matrix(state, m);
}

DenseTwoModeState rotate_polarization_basis_inverse(const DenseTwoModeState& state, double phase) {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx e = std::polar(1.0, -phase);
    const cplx m[2][2] = {{r, r}, {r * e, -r * e}};
    return apply_mode_matrix(state, m);
}

DenseTwoModeState build_dense_state(
    const std::vector<std::pair<cplx, MacroLabel>>& coeffs,
    const GainParams& gain, int cutoff, double max_tail) {
    if (coeffs.empty()) throw std::invalid_argument("at least one component required");
    double wsum = 0.0;
    for (const auto& [w, label] : coeffs) wsum += std::norm(w);
    if (std::abs(wsum - 1.0) > 1e-12)
        throw std::invalid_argument("component weights must satisfy sum |w|^2 = 1");

    DenseTwoModeState acc;
    acc.cutoff = cutoff;
    acc.amps.assign(DenseTwoModeState::tri_size(cutoff), cplx{0.0, 0.0});
    double amp_tail = 0.0; // sum |w_k| sqrt(tail_k), squared at the end
    for (const auto& [w, label] : coeffs) {
        // build_own_basis stores Perp states in the phi basis already
        // (occupations swapped), so the rotation phase is phi for both kinds
        const DenseTwoModeState own = build_own_basis(label, gain, cutoff, max_tail);
        const DenseTwoModeState hv = rotate_polarization_basis(own, wrap_phase(label.phi));
        for (std::size_t k = 0; k < acc.amps.size(); ++k) acc.amps[k] += w * hv.amps[k];
        amp_tail += std::abs(w) * std::sqrt(own.tail_bound);
    }
    acc.tail_bound = amp_tail * amp_tail;
    return acc;
}

std::complex<double> overlap(const DenseTwoModeState& a, const DenseTwoModeState& b) {
    if (a.cutoff != b.cutoff) throw std::invalid_argument("overlap requires equal cutoffs");
    cplx s{0.0, 0.0};
    for (std::size_t k = 0; k < a.amps.size(); ++k) s += std::conj(a.amps[k]) * b.amps[k];
    return s;
}

std::vector<double> photon_statistics(const DenseTwoModeState& state) {
    std::vector<double> p(state.amps.size());
    for (std::size_t k = 0; k < state.amps.size(); ++k) p[k] = std::norm(state.amps[k]);
    return p;
}

} // namespace qiopa
