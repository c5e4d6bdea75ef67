#pragma once

#include <cstdint>
#include <vector>

#include "qiopa/gain.hpp"
#include "qiopa/macrostate.hpp"
#include "qiopa/rng.hpp"

namespace qiopa {

// Precomputed inverse-CDF tables for the two occupation marginals. The
// distributions are heavy-tailed at high gain (tables reach i, j ~ 1e5 at
// g = 6) but each draw is a binary search, so sampling cost is O(log n)
// independent of gain. Immutable after construction, shareable across threads.
struct MarginalTables {
    GainParams gain;
    std::vector<double> cdf_i; // over i, occupation 2i+1 on the label's own mode
    std::vector<double> cdf_j; // over j, occupation 2j on the orthogonal mode
    double tail_epsilon = 0.0; // certified mass beyond the tables
};

// Builds both tables so that the certified remaining tail of each marginal is
// below tail_epsilon / 2. Throws when the term budget is exhausted first.
MarginalTables build_marginal_tables(const GainParams& gain, double tail_epsilon);

// Inverse-CDF draw of a Fock occupation: (2i+1, 2j) for a Plus label,
// (2j, 2i+1) for Perp, in the label's analysis basis. Equal rng state gives
// the Perp sample as the exact swap of the Plus sample.
FockOccupation sample_occupation(const MacroLabel& label, const MarginalTables& tables,
                                 CounterRng& rng);

// Probability split of Bob's conditional state between Phi^{phi_B} (parallel)
// and Phi^{phi_B perp}, given Alice's projection outcome in basis phi_A.
struct MixtureWeights {
    double w_parallel = 0.0;
    double w_perp = 0.0;
};

enum class AliceOutcome { Plus, Perp };

// Alice outcome "plus" projects on |1 phi_A>, leaving Bob in the coherent
// superposition sin(D/2)-weighted toward Phi^{phi_B}, D = phi_B - phi_A.
// In the phi_B number basis the two components occupy disjoint parity
// sectors, so for any same-basis counting measurement the conditional state
// is operationally the incoherent mixture with these weights (the lemma is
// verified against the dense oracle in the tests).
MixtureWeights conditional_mixture(double phi_A, AliceOutcome outcome, double phi_B);

// Fair binary projection outcome for Alice's polarization analysis; the
// singlet gives 1/2 for either outcome in every equatorial basis.
struct AliceResult {
    AliceOutcome outcome = AliceOutcome::Plus;
    double projector_phase = 0.0; // phi_A for Plus, phi_A + pi for Perp
};

AliceResult sample_alice(double phi_A, CounterRng& rng);

// Bob's conditional photon statistics in the phi_B number basis, triangular
// layout over p + q <= cutoff, normalized over the truncated window. The
// first form projects the pair state exactly (coherent amplitudes); the
// second evaluates the incoherent mixture with conditional_mixture weights.
// Agreement of the two to rounding error is the disjoint-sector lemma the
// trial loop relies on.
std::vector<double> exact_conditional_statistics(const GainParams& gain, double phi_A,
                                                 AliceOutcome outcome, double phi_B,
                                                 int cutoff, double max_tail = 1e-6);
std::vector<double> mixture_conditional_statistics(const GainParams& gain, double phi_A,
                                                   AliceOutcome outcome, double phi_B,
                                                   int cutoff, double max_tail = 1e-6);

} // namespace qiopa
