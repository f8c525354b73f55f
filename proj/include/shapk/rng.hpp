#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace shapk {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ seeded through splitmix64. We roll our own uniform/bounded
// draws instead of <random> distributions so that streams are bit-identical
// across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1), 53 mantissa bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n), rejection sampling.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[bounded(i)]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

// Derives independent child streams from a master seed and up to three key
// components. Streams depend only on (seed, keys), never on draw order, so
// serial and parallel runs see identical randomness.
class StreamFactory {
public:
    explicit StreamFactory(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t derive(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
        std::uint64_t h = seed_;
        h = mix(h, a);
        h = mix(h, b);
        h = mix(h, c);
        return h;
    }

    Rng stream(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
        return Rng(derive(a, b, c));
    }

    std::uint64_t seed() const { return seed_; }

private:
    static std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
        std::uint64_t s = h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
        return splitmix64_next(s);
    }

    std::uint64_t seed_;
};

// Fixed stream tags, one per randomness consumer.
namespace stream_tag {
inline constexpr std::uint64_t sampling = 1;   // (tag, feature, replicate index)
inline constexpr std::uint64_t kernel = 2;     // (tag, 0, replicate index)
inline constexpr std::uint64_t trial = 3;      // (tag, trial index)
inline constexpr std::uint64_t synth_gaps = 4;
inline constexpr std::uint64_t synth_perm = 5;
inline constexpr std::uint64_t cell = 6;       // (tag, instance index)
inline constexpr std::uint64_t instance = 7;
}  // namespace stream_tag

}  // namespace shapk
