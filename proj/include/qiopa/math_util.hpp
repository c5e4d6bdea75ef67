#pragma once

#include <cmath>
#include <cstdint>

namespace qiopa {

// log(n!) with a precomputed table for the range hit in hot loops and a
// Stirling series beyond it. Photon numbers at g = 6 reach ~1e5, so factorial
// arguments can be large; everything downstream therefore works in log space.
double log_factorial(std::int64_t n);

// log C(n, k); -inf when k is outside [0, n].
double log_binomial(std::int64_t n, std::int64_t k);

// 2-pi-periodic reduction into [0, 2pi).
double wrap_phase(double phi);

inline double sq(double x) { return x * x; }

} // namespace qiopa
