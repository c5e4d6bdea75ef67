#include "qiopa/math_util.hpp"

#include <limits>
#include <vector>

namespace qiopa {

namespace {

constexpr std::int64_t kTableSize = 1 << 16;

const std::vector<double>& table() {
    static const std::vector<double> t = [] {
        std::vector<double> v(kTableSize);
        v[0] = 0.0;
        for (std::int64_t n = 1; n < kTableSize; ++n)
            v[n] = v[n - 1] + std::log(static_cast<double>(n));
        return v;
    }();
    return t;
}

// Stirling series; the 1/n^5 term keeps the error below 1e-16 relative for
// n >= 2^16, far under the table's own accumulated rounding.
double stirling(double n) {
    static const double half_log_two_pi = 0.5 * std::log(2.0 * M_PI);
    const double inv = 1.0 / n;
    const double inv2 = inv * inv;
    return (n + 0.5) * std::log(n) - n + half_log_two_pi
         + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0));
}

} // namespace

double log_factorial(std::int64_t n) {
    if (n < 0) return -std::numeric_limits<double>::infinity();
    if (n < kTableSize) return table()[n];
    return stirling(static_cast<double>(n));
}

double log_binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double wrap_phase(double phi) {
    double r = std::fmod(phi, 2.0 * M_PI);
    if (r < 0) r += 2.0 * M_PI;
    // fmod of a value epsilon-below 2pi can round back up to 2pi exactly
    if (r >= 2.0 * M_PI) r = 0.0;
    return r;
}

} // namespace qiopa
