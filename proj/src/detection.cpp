#include "qiopa/detection.hpp"

#include <cmath>
#include <stdexcept>

namespace qiopa {

void DetectionParams::validate() const {
    if (!(eta_B >= 0.0 && eta_B <= 1.0)) throw std::invalid_argument("eta_B must be in [0, 1]");
    if (!(eta_A >= 0.0 && eta_A <= 1.0)) throw std::invalid_argument("eta_A must be in [0, 1]");
    if (!(pm_noise >= 0.0)) throw std::invalid_argument("pm_noise must be nonnegative");
    if (!(threshold >= 0.0)) throw std::invalid_argument("threshold must be nonnegative");
}

std::int64_t thin_binomial(std::int64_t count, double eta, CounterRng& rng) {
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("efficiency must be in [0, 1]");
    if (count <= 0) return 0;
    if (eta == 1.0) return count;
    if (eta == 0.0) return 0;
    return rng.binomial(count, eta);
}

double pm_response(std::int64_t count, const DetectionParams& params, CounterRng& rng) {
    if (count <= 0) return 0.0;
    if (params.pm_noise == 0.0) return static_cast<double>(count);
    const double smear = 1.0 + params.pm_noise * rng.next_gaussian();
    return static_cast<double>(count) * std::max(0.0, smear);
}

OFOutcome orthogonality_filter(const DetectionEvent& event, double threshold) {
    if (threshold < 0.0) throw std::invalid_argument("threshold must be nonnegative");
    const double diff = event.detected_plus - event.detected_minus;
    if (diff > threshold) return OFOutcome::Plus;
    if (-diff > threshold) return OFOutcome::Minus;
    return OFOutcome::Inconclusive;
}

OFOutcome ideal_parity_discriminator(const FockOccupation& occ) {
    return (occ.p % 2 != 0) ? OFOutcome::Plus : OFOutcome::Minus;
}

OFOutcome ideal_difference_discriminator(const FockOccupation& occ) {
    if (occ.p > occ.q) return OFOutcome::Plus;
    if (occ.q > occ.p) return OFOutcome::Minus;
    return OFOutcome::Inconclusive;
}

} // namespace qiopa
