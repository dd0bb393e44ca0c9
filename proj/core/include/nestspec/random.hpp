#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace nestspec {

/// Seedable random source. mt19937_64 is bit-portable across platforms; the
/// uniform and normal transforms are written out explicitly because the
/// standard library's distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 significant bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [lo, hi] inclusive (rejection sampling, unbiased).
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

    /// Standard normal via Box-Muller; the paired draw is cached.
    double normal();

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Exponential with the given rate (rate 0 is treated as "never": +inf).
    double exponential(double rate);

    /// k distinct indices drawn uniformly from {0, ..., n-1}, returned sorted.
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Per-replicate stream derivation: replicate i runs on seed * 10^6 + i.
inline std::uint64_t replicate_seed(std::uint64_t base_seed, std::uint64_t replicate) {
    return base_seed * 1000000ull + replicate;
}

}  // namespace nestspec
