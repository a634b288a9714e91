#pragma once

#include <cmath>
#include <cstdint>

namespace suprec {

// Counter-based splittable random stream. Each stream is a splitmix64
// sequence whose starting state is derived from (seed, stream index), so
// trials can be generated in any order on any number of workers and still
// produce identical results.
class Rng {
public:
    explicit Rng(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    bool coin() { return (next_u64() & 1u) != 0; }

    // Exponential(1) variate.
    double exponential() { return -std::log1p(-uniform()); }

private:
    std::uint64_t state_;
};

// Independent stream keyed by (seed, index). The double mix keeps streams
// with adjacent indices uncorrelated.
inline Rng make_stream(std::uint64_t seed, std::uint64_t index) {
    auto mix = [](std::uint64_t z) {
        z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdull;
        z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ull;
        return z ^ (z >> 33);
    };
    return Rng(mix(seed) ^ mix(index * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull));
}

}  // namespace suprec
