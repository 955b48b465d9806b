#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace levyruin {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ seeded through splitmix64. Satisfies
/// UniformRandomBitGenerator, so it plugs into <random> distributions.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed) {
        for (auto& w : s_) w = splitmix64(seed);
    }

    /// Independent stream for (master_seed, index, lane); the same triple
    /// always yields the same sequence.
    static Xoshiro256pp stream(std::uint64_t master_seed, std::uint64_t index, std::uint64_t lane = 0) {
        std::uint64_t h = master_seed;
        std::uint64_t k = splitmix64(h) ^ index;
        k = splitmix64(k) ^ lane;
        return Xoshiro256pp(splitmix64(k));
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0, 1).
    double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    /// Exponential with unit rate.
    double exponential() { return -std::log(uniform()); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4]{};
};

}  // namespace levyruin
