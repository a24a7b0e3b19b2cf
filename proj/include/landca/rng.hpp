#pragma once

#include <cstdint>

namespace landca {

// splitmix64 finalizer. Used both as the sequential generator core and to
// derive independent substream seeds from (seed, id...) tuples, so results
// never depend on thread scheduling or evaluation order.
inline std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                    std::uint64_t c = 0) {
    std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ull);
    h = mix64(h ^ (a + 0xD1B54A32D192ED03ull));
    h = mix64(h ^ (b + 0x8CB92BA72F3D8DD7ull));
    h = mix64(h ^ (c + 0xA24BAED4963EE407ull));
    return h;
}

// Sequential splitmix64 stream. Deliberately not std::mt19937_64: streams here
// are short and per-row/per-tree, where the mt19937 warm-up cost dominates,
// and the distributions below must be bit-stable across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix64(state_);
    }

    // Uniform on [0, n), unbiased via rejection.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform on [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; zero excluded so -log() stays finite.
    double next_unit_positive() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

}  // namespace landca
