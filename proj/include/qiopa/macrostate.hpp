#pragma once

#include <cstdint>

#include "qiopa/gain.hpp"

namespace qiopa {

// Equatorial analysis basis, phase reduced to [0, 2pi). The mode pair of
// phase phi and the pair of phi+pi are the same two modes with labels
// swapped, which is what makes the Perp labels below collapse onto Plus.
struct EquatorialBasis {
    double phi = 0.0;
    explicit EquatorialBasis(double phase);
};

// Which of the two mutually orthogonal amplified states is meant.
// Perp(phi) and Plus(phi + pi) denote the same physical state.
struct MacroLabel {
    enum class Kind { Plus, Perp };
    Kind kind = Kind::Plus;
    double phi = 0.0;

    static MacroLabel plus(double phi) { return {Kind::Plus, phi}; }
    static MacroLabel perp(double phi) { return {Kind::Perp, phi}; }

    // phase psi such that this label is Plus(psi)
    double canonical_phase() const;
};

// Photon counts on the two modes of the label's basis: p on pi_phi, q on
// pi_phi-perp. A Plus state only populates odd p / even q; Perp swaps that.
struct FockOccupation {
    std::int64_t p = 0;
    std::int64_t q = 0;
};

// Signed log-space value: value = sign * exp(log_abs). Needed because the
// amplitude series alternates sign in i while magnitudes span hundreds of
// orders of magnitude.
struct SignedLog {
    int sign = 1;           // +1 or -1; 0 when the value is exactly zero
    double log_abs = 0.0;   // -inf for zero

    double value() const;
};

// gamma_ij = C^-2 (-Gamma/2)^i (Gamma/2)^j, returned in signed log form;
// exact for i, j up to 1e6 (no underflow).
SignedLog gamma_coefficient(std::int64_t i, std::int64_t j, const GainParams& gain);

// The occupation probability of a Plus state factorizes over the two modes:
//   P(2i+1, 2j) = f(i) h(j)
//   f(i) = C^-3 (2i+1) C(2i, i) (Gamma^2/4)^i   (odd-mode marginal, sums to 1)
//   h(j) = C^-1 C(2j, j) (Gamma^2/4)^j          (even-mode marginal, sums to 1)
// These are the workhorses for normalization, moments and the samplers.
double log_f_term(std::int64_t i, const GainParams& gain);
double log_h_term(std::int64_t j, const GainParams& gain);

// term ratios f(i+1)/f(i) and h(j+1)/h(j); f's ratio decreases in i and h's
// stays below Gamma^2, which yields certified geometric tail bounds
double f_ratio(std::int64_t i, const GainParams& gain);
double h_ratio(std::int64_t j, const GainParams& gain);

// upper bounds on the mass beyond index I (inclusive sums up to I already done)
double f_tail_bound(std::int64_t last_i, double last_f, const GainParams& gain);
double h_tail_bound(std::int64_t last_j, double last_h, const GainParams& gain);

// Squared amplitude of the occupation; zero off the parity support.
double occupation_probability(const MacroLabel& label, const FockOccupation& occ,
                              const GainParams& gain);

// |1 - sum of occupation probabilities| with the sum extended until the
// certified remaining tail is below tail_epsilon. Throws if the term budget
// is exhausted before convergence.
double normalization_defect(const MacroLabel& label, const GainParams& gain,
                            double tail_epsilon);

enum class ModeSelect { Parallel, Perpendicular };
enum class MomentMethod { Analytic, Numeric };

// Mean photon number on the label's own mode (3 mbar + 1) or the orthogonal
// one (mbar). Numeric method sums the series with a certified tail and is
// intended for g <= 2.
double mean_photon_number(const MacroLabel& label, ModeSelect mode,
                          const GainParams& gain, MomentMethod method);

} // namespace qiopa
