#include "nestspec/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "nestspec/errors.hpp"

namespace nestspec {

std::uint64_t Rng::uniform_int(std::uint64_t lo, std::uint64_t hi) {
    if (lo > hi) throw InputError("uniform_int: empty range");
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return engine_();  // full 64-bit range
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                (std::numeric_limits<std::uint64_t>::max() % span);
    std::uint64_t draw;
    do {
        draw = engine_();
    } while (draw >= limit);
    return lo + draw % span;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller on explicit uniforms; u1 in (0, 1] keeps the log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
}

double Rng::exponential(double rate) {
    if (rate < 0.0) throw InputError("exponential rate must be non-negative");
    if (rate == 0.0) return std::numeric_limits<double>::infinity();
    return -std::log(1.0 - uniform()) / rate;
}

std::vector<std::size_t> Rng::sample_indices(std::size_t n, std::size_t k) {
    if (k > n) throw InputError("cannot sample more indices than available");
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    // Partial Fisher-Yates: the first k entries end up a uniform k-subset.
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform_int(0, n - 1 - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace nestspec
