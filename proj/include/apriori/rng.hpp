#pragma once
// Self-contained seeded RNG (xoshiro256** seeded via splitmix64).
// std distributions are not bit-stable across standard libraries, and the CLI
// promises byte-identical reruns, so all sampling goes through this.

#include <cstdint>
#include <cmath>

namespace apriori {

struct Rng {
    uint64_t s[4];

    explicit Rng(uint64_t seed = 0) { reseed(seed); }

    static uint64_t splitmix(uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    void reseed(uint64_t seed) {
        uint64_t x = seed;
        for (auto& w : s) w = splitmix(x);
    }

    static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    uint64_t next() {
        uint64_t result = rotl(s[1] * 5, 7) * 9;
        uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    // unbiased integer in [0, bound)
    uint64_t below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // uniform in [0, 1)
    double real() { return (next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return real() < p; }

    // exponential with the given mean (inverse transform)
    double exponential(double mean) {
        double u = real();
        return -mean * std::log1p(-u);
    }
};

// Stable stream-splitting: derive an independent seed from a parent seed and a
// stream index (worker id, level, cell index, ...).
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
    uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL + stream * 0xd1342543de82ef95ULL);
    return Rng::splitmix(x);
}

inline uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b) {
    return mix_seed(mix_seed(seed, a), b);
}

} // namespace apriori
