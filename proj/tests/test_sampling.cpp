#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "qiopa/dense_state.hpp"
#include "qiopa/macrostate.hpp"
#include "qiopa/sampling.hpp"

using namespace qiopa;

TEST_CASE("marginal tables reach the requested tail") {
    const GainParams gain = make_gain(1.6);
    const MarginalTables t = build_marginal_tables(gain, 1e-9);
    CHECK(t.cdf_i.back() > 1.0 - 1e-9);
    CHECK(t.cdf_i.back() <= 1.0 + 1e-12);
    CHECK(t.cdf_j.back() > 1.0 - 1e-9);
    // cdf values are the partial sums of the exact marginal terms
    CHECK(t.cdf_i[0] == doctest::Approx(std::exp(log_f_term(0, gain))).epsilon(1e-14));
    CHECK(t.cdf_j[2] == doctest::Approx(std::exp(log_h_term(0, gain)) + std::exp(log_h_term(1, gain))
                                        + std::exp(log_h_term(2, gain)))
                            .epsilon(1e-14));
}

TEST_CASE("perp draws are the exact swap of plus draws") {
    const MarginalTables t = build_marginal_tables(make_gain(1.3), 1e-9);
    for (std::uint64_t s = 0; s < 500; ++s) {
        CounterRng r1({99, s});
        CounterRng r2({99, s});
        const FockOccupation a = sample_occupation(MacroLabel::plus(0.0), t, r1);
        const FockOccupation b = sample_occupation(MacroLabel::perp(0.0), t, r2);
        CHECK(a.p == b.q);
        CHECK(a.q == b.p);
        CHECK(a.p % 2 == 1);
        CHECK(a.q % 2 == 0);
    }
}

TEST_CASE("zero gain always yields the bare seed photon") {
    const MarginalTables t = build_marginal_tables(make_gain(0.0), 1e-9);
    CounterRng rng({5, 0});
    for (int k = 0; k < 200; ++k) {
        const FockOccupation occ = sample_occupation(MacroLabel::plus(0.0), t, rng);
        CHECK(occ.p == 1);
        CHECK(occ.q == 0);
    }
}

TEST_CASE("sampled occupations match the exact law in total variation") {
    const GainParams gain = make_gain(1.0);
    const MarginalTables t = build_marginal_tables(gain, 1e-9);
    std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> hist;
    const std::int64_t draws = 200000;
    for (std::int64_t k = 0; k < draws; ++k) {
        CounterRng rng({123, static_cast<std::uint64_t>(k)});
        const FockOccupation occ = sample_occupation(MacroLabel::plus(0.0), t, rng);
        ++hist[{occ.p, occ.q}];
    }
    const int window = required_cutoff(gain, 1e-9);
    double tv = 0.0;
    double covered = 0.0;
    for (std::int64_t s = 0; s <= window; ++s) {
        for (std::int64_t p = 0; p <= s; ++p) {
            const double want = occupation_probability(MacroLabel::plus(0.0), {p, s - p}, gain);
            const auto it = hist.find({p, s - p});
            const double emp = it == hist.end()
                                   ? 0.0
                                   : static_cast<double>(it->second) / static_cast<double>(draws);
            tv += std::abs(emp - want);
            if (it != hist.end()) covered += emp;
        }
    }
    tv = 0.5 * (tv + (1.0 - covered) + 1e-9);
    CHECK(tv < 0.02);
}

TEST_CASE("conditional weights: anticorrelation and normalization") {
    // Alice 'plus' at phi_A = phi_B leaves the partner fully in the
    // orthogonal state (the singlet anticorrelation)
    const MixtureWeights w0 = conditional_mixture(1.1, AliceOutcome::Plus, 1.1);
    CHECK(w0.w_parallel == doctest::Approx(0.0));
    CHECK(w0.w_perp == doctest::Approx(1.0));

    const MixtureWeights w1 = conditional_mixture(0.0, AliceOutcome::Plus, M_PI);
    CHECK(w1.w_parallel == doctest::Approx(1.0));

    const MixtureWeights w2 = conditional_mixture(0.0, AliceOutcome::Plus, M_PI / 2.0);
    CHECK(w2.w_parallel == doctest::Approx(0.5));

    for (double d : {0.1, 0.9, 2.2, 4.4}) {
        const MixtureWeights wp = conditional_mixture(0.3, AliceOutcome::Plus, 0.3 + d);
        const MixtureWeights wm = conditional_mixture(0.3, AliceOutcome::Perp, 0.3 + d);
        CHECK(wp.w_parallel + wp.w_perp == doctest::Approx(1.0).epsilon(1e-14));
        // flipping Alice's outcome swaps the weights
        CHECK(wp.w_parallel == doctest::Approx(wm.w_perp).epsilon(1e-14));
        CHECK(wp.w_perp == doctest::Approx(wm.w_parallel).epsilon(1e-14));
    }
}

TEST_CASE("alice projection outcomes are a fair coin with the right phases") {
    std::int64_t plus = 0;
    const std::int64_t n = 20000;
    for (std::int64_t k = 0; k < n; ++k) {
        CounterRng rng({7, static_cast<std::uint64_t>(k)});
        const AliceResult r = sample_alice(0.4, rng);
        if (r.outcome == AliceOutcome::Plus) {
            ++plus;
            CHECK(r.projector_phase == doctest::Approx(0.4));
        } else {
            CHECK(r.projector_phase == doctest::Approx(0.4 + M_PI));
        }
    }
    CHECK(std::abs(plus - n / 2) < 5 * std::sqrt(n / 4.0));
}

TEST_CASE("the incoherent mixture reproduces the exact conditional state") {
    // disjoint parity sectors make the coherent cross terms vanish cell by
    // cell in the analysis basis, so the sampler's two-component shortcut is
    // exact, not an approximation
    const GainParams gain = make_gain(0.8);
    const int cutoff = 64;
    double worst = 0.0;
    for (double phi_A : {0.0, 0.9}) {
        for (double phi_B : {0.0, M_PI / 2.0, 3.9}) {
            for (AliceOutcome out : {AliceOutcome::Plus, AliceOutcome::Perp}) {
                if (phi_A == phi_B && out == AliceOutcome::Perp) continue; // zero-weight branch
                const auto exact =
                    exact_conditional_statistics(gain, phi_A, out, phi_B, cutoff, 1e-6);
                const auto mixed =
                    mixture_conditional_statistics(gain, phi_A, out, phi_B, cutoff, 1e-6);
                REQUIRE(exact.size() == mixed.size());
                for (std::size_t k = 0; k < exact.size(); ++k)
                    worst = std::max(worst, std::abs(exact[k] - mixed[k]));
            }
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("conditional statistics are normalized and parity-consistent") {
    const GainParams gain = make_gain(0.8);
    const auto probs =
        exact_conditional_statistics(gain, 0.3, AliceOutcome::Plus, 1.7, 64, 1e-6);
    double sum = 0.0;
    for (double p : probs) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}
