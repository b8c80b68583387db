#pragma once

#include <cstdint>
#include <random>

namespace ock {

// splitmix64 step; used to derive independent per-stream seeds from one root seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// mt19937_64 with hand-rolled uniform/normal transforms. The std::
// distributions are implementation-defined, so the same seed would give
// different data on different standard libraries; these transforms pin the
// exact bit stream everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // uniform on [0, 1), 53-bit resolution
    double uniform();
    double uniform(double lo, double hi);
    // standard normal via Box-Muller; second value of each pair is cached
    double normal();

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace ock
