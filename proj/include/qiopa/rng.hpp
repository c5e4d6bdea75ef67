#pragma once

#include <array>
#include <cstdint>

namespace qiopa {

// Philox4x32-10 block function. Counter-based: the output is a pure function
// of (key, counter), so any trial can regenerate its own stream regardless of
// execution order. Constants are the published ones.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                              const std::array<std::uint32_t, 2>& key);
};

// Identifies an independent substream: same (seed, stream_id) always yields
// the same draw sequence.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

// Buffered generator over one stream. The Philox counter is
// (block_lo, block_hi, stream_lo, stream_hi) and the key is the seed, so
// streams never collide and each stream has 2^64 blocks of 128 bits.
class CounterRng {
public:
    explicit CounterRng(RngStream stream);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // uniform on [0, 1) with 53 random bits
    double next_double();

    // standard normal, one value per call (no cached spare: keeps the
    // consumption pattern deterministic and position-independent)
    double next_gaussian();

    bool next_bool() { return (next_u32() & 1u) != 0; }

    // uniform integer in [0, n)
    std::uint64_t next_below(std::uint64_t n);

    // exact Binomial(n, p) via inverse-CDF walk outward from the mode;
    // cost is O(stddev) expected, correct for all n (no normal approximation)
    std::int64_t binomial(std::int64_t n, double p);

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int pos_ = 4;

    void refill();
};

} // namespace qiopa
