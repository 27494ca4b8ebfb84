#pragma once

#include <cstdint>
#include <random>

namespace graphreg {

/// Seedable random stream with platform-independent output.
///
/// Wraps std::mt19937_64 (whose output sequence is fixed by the standard)
/// and derives uniform and normal variates by hand, since the standard
/// distributions are implementation-defined. Streams for different
/// (seed, stream_id) pairs are decorrelated by SplitMix64 seeding.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream_id = 0);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal via the Marsaglia polar method.
    double normal();
    /// +1 or -1 with equal probability.
    double rademacher();
    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace graphreg
