#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace usea {

// Seeded random stream. Draws are produced from raw 64-bit engine output
// with hand-written transforms so that sequences do not depend on the
// standard library's distribution implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0);

    std::uint64_t seed() const { return seed_; }

    // Independent, reproducible stream derived from (seed, label).
    RngStream child(std::string_view label) const;
    RngStream child(std::uint64_t index) const;

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of resolution.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n);

    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace usea
