#pragma once

#include <cstdint>

namespace spl {

// splitmix64 finalizer (Steele/Lea/Flood; same mix as java.util.SplittableRandom).
// Used to expand seeds into generator state and as the avalanche step when
// deriving per-trial seeds. Bit-exact on every platform.
inline uint64_t splitmix64_next(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Per-trial seed: base seed xor golden-ratio multiple of (index+1), avalanched.
inline uint64_t derive_seed(uint64_t base_seed, uint64_t trial_index) {
    uint64_t s = base_seed ^ (0x9E3779B97F4A7C15ull * (trial_index + 1));
    return splitmix64_next(s);
}

// xoshiro256** 1.0 (Blackman/Vigna, public domain reference implementation).
// State is seeded from splitmix64 per the authors' recommendation.
class Xoshiro256ss {
  public:
    explicit Xoshiro256ss(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    uint64_t next() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Unbiased draw from [0, bound) via bitmask rejection. bound >= 1.
    uint64_t below(uint64_t bound) {
        if (bound <= 1) return 0;
        uint64_t mask = ~uint64_t(0) >> __builtin_clzll((bound - 1) | 1);
        for (;;) {
            uint64_t v = next() & mask;
            if (v < bound) return v;
        }
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t state_[4];
};

} // namespace spl
