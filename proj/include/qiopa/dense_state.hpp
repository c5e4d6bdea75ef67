#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "qiopa/gain.hpp"
#include "qiopa/macrostate.hpp"

namespace qiopa {

// Truncated two-mode Fock amplitude array, triangular storage over all (p, q)
// with p + q <= cutoff. Serves as the exact small-gain oracle the Monte Carlo
// machinery is validated against. tail_bound is a certified upper bound on
// the probability mass lost to truncation.
struct DenseTwoModeState {
    int cutoff = 0;
    std::vector<std::complex<double>> amps; // size (cutoff+1)(cutoff+2)/2
    double tail_bound = 0.0;

    static std::size_t tri_size(int cutoff) {
        return static_cast<std::size_t>(cutoff + 1) * static_cast<std::size_t>(cutoff + 2) / 2;
    }
    std::size_t index(std::int64_t p, std::int64_t q) const {
        const std::int64_t s = p + q;
        return static_cast<std::size_t>(s * (s + 1) / 2 + p);
    }
    std::complex<double> at(std::int64_t p, std::int64_t q) const { return amps[index(p, q)]; }

    double norm_squared() const;
};

// Probability mass of a single Macro-state inside total photon number
// <= cutoff, computed from the marginal series (exact up to rounding).
double mass_within_cutoff(const GainParams& gain, int cutoff);

// Smallest cutoff whose truncated mass stays below max_tail.
int required_cutoff(const GainParams& gain, double max_tail);

// Coherent superposition sum_k w_k |Phi^{label_k}> expressed in the H/V
// reference basis. Each component is built in its own equatorial basis and
// rotated. Amplitude convention: anchored to the real (-1)^i form at phase 0;
// a component at canonical phase psi carries the extra factor e^{-i psi (i+j)}
// required for different-basis superpositions to close onto the correct
// occupation sectors (this is the phase the amplifier's covariance group
// imprints; magnitudes, and hence all statistics in the own basis, are
// unaffected). Weights must satisfy sum |w|^2 = 1 within 1e-12.
// Throws if any component's truncated mass exceeds max_tail, reporting the
// cutoff that would suffice.
DenseTwoModeState build_dense_state(
    const std::vector<std::pair<std::complex<double>, MacroLabel>>& coeffs,
    const GainParams& gain, int cutoff, double max_tail = 1e-6);

// Single Macro-state in its own basis (no rotation); same phase convention.
DenseTwoModeState build_own_basis(const MacroLabel& label, const GainParams& gain,
                                  int cutoff, double max_tail = 1e-6);

// Re-expresses a state given in the basis of equatorial phase `phase` in the
// H/V reference basis (the passive two-mode rotation; photon-number sectors
// and norms are preserved).
DenseTwoModeState rotate_polarization_basis(const DenseTwoModeState& state, double phase);

// Inverse direction: from H/V into the basis of `phase`.
DenseTwoModeState rotate_polarization_basis_inverse(const DenseTwoModeState& state, double phase);

// Hermitian inner product <a|b>; throws on mismatched cutoffs.
std::complex<double> overlap(const DenseTwoModeState& a, const DenseTwoModeState& b);

// |amplitude|^2 grid in the state's storage layout; sums to 1 - tail.
std::vector<double> photon_statistics(const DenseTwoModeState& state);

} // namespace qiopa
