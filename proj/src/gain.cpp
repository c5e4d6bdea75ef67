#include "qiopa/gain.hpp"

#include <cmath>
#include <stdexcept>

namespace qiopa {

GainParams make_gain(double g) {
    if (!std::isfinite(g) || g < 0.0)
        throw std::invalid_argument("gain must be finite and nonnegative");
    GainParams p;
    p.g = g;
    p.C = std::cosh(g);
    p.Gamma = std::tanh(g);
    // log cosh g = g + log1p(e^{-2g})/... expanded to avoid overflow past g ~ 710
    p.log_C = g + std::log1p(std::exp(-2.0 * g)) - std::log(2.0);
    const double s = std::sinh(g);
    p.mbar = s * s;
    return p;
}

} // namespace qiopa
