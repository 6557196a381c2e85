#pragma once
// Seeded PRNG with platform-stable output. std::normal_distribution is
// implementation-defined, so the gaussian draw is hand-rolled to keep
// mock embeddings byte-identical everywhere.

#include <cmath>
#include <cstdint>

namespace ragkit::util {

class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1), 53-bit resolution
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller
    double next_gaussian() {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    // uniform integer in [0, bound)
    uint64_t next_below(uint64_t bound) { return bound ? next() % bound : 0; }

private:
    uint64_t state_;
};

}  // namespace ragkit::util
