#pragma once

#include <cstdint>

namespace exitopt {

// Small deterministic generators for the Monte Carlo engine. The standard
// library distributions are implementation-defined, so reproducibility of
// estimates across toolchains requires owning both the generator and the
// uniform-to-normal transform.

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stateless counter-based uniform: same (key, index) always yields the same
// value regardless of how many other draws happened in between. Used for the
// bridge-crossing uniforms so that common-random-number comparisons stay
// aligned across threshold levels.
inline double counter_uniform01(uint64_t key, uint64_t index) {
    const uint64_t z = splitmix64(key + index * 0x9e3779b97f4a7c15ULL);
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

class Xoshiro256pp {
public:
    explicit Xoshiro256pp(uint64_t seed) {
        uint64_t s = seed;
        for (auto& w : state_) {
            s = splitmix64(s);
            w = s;
        }
    }

    uint64_t next() {
        const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on the open interval (0, 1).
    double uniform01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t state_[4];
};

// Inverse of the standard normal CDF (Wichura's PPND16 rational
// approximation, accurate to ~1e-16 over (0,1)).
double inverse_normal_cdf(double u);

}  // namespace exitopt
