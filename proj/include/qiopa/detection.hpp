#pragma once

#include <cstdint>

#include "qiopa/macrostate.hpp"
#include "qiopa/rng.hpp"

namespace qiopa {

// Measurement-chain parameters for the macro side (and Alice's trigger).
// threshold is the single scalar the difference signal is compared against,
// in detected-signal units.
struct DetectionParams {
    double eta_B = 1.0;     // overall detection efficiency on the macro mode
    double eta_A = 1.0;     // trigger efficiency, pure trial post-selection
    double pm_noise = 0.0;  // relative Gaussian spread of the photomultiplier
    double threshold = 0.0;

    void validate() const;
};

// Analog signals on the two polarization arms after loss and the
// photomultiplier response.
struct DetectionEvent {
    double detected_plus = 0.0;
    double detected_minus = 0.0;
};

enum class OFOutcome { Plus, Minus, Inconclusive };

// Binomial loss channel; exact for every count (see CounterRng::binomial).
std::int64_t thin_binomial(std::int64_t count, double eta, CounterRng& rng);

// Photomultiplier model: identity when pm_noise is 0, otherwise an unbiased
// relative Gaussian smear clamped at zero. Zero counts always give zero.
double pm_response(std::int64_t count, const DetectionParams& params, CounterRng& rng);

// The filter POVM: Plus when detected_plus - detected_minus exceeds the
// threshold strictly, Minus for the mirror condition, otherwise Inconclusive
// (discarded by the analysis).
OFOutcome orthogonality_filter(const DetectionEvent& event, double threshold);

// Reference discriminator at unit efficiency: parity of the own-mode count.
// Never inconclusive; exact on the parity support.
OFOutcome ideal_parity_discriminator(const FockOccupation& occ);

// Reference discriminator: sign of the arm difference of a lossless
// occupation. Equal counts are inconclusive (cannot occur on the exact
// single-quantum-difference support).
OFOutcome ideal_difference_discriminator(const FockOccupation& occ);

} // namespace qiopa
