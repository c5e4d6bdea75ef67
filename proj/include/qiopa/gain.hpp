#pragma once

namespace qiopa {

// Amplifier working point and the constants derived from it. Everything else
// is phrased in terms of C = cosh g, Gamma = tanh g and mbar = sinh^2 g, so
// they are computed once, in overflow-safe form (log_C instead of cosh for
// moments at large g).
struct GainParams {
    double g = 0.0;
    double C = 1.0;      // cosh g
    double Gamma = 0.0;  // tanh g
    double mbar = 0.0;   // sinh^2 g, mean photons per amplified mode
    double log_C = 0.0;  // log cosh g, exact for large g
};

// Throws std::invalid_argument for negative or non-finite g.
GainParams make_gain(double g);

} // namespace qiopa
