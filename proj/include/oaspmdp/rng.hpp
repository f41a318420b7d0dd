#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace oasp {

/// Seeded random stream. Every stochastic consumer (wall layout, environment
/// dynamics, action selection) owns one, derived from a base seed and a name,
/// so results never depend on which thread ran a trial.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Substream keyed by (seed, name, index).
    static Rng derive(std::uint64_t seed, std::string_view name, std::uint64_t index = 0) {
        std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the name
        for (char c : name) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        std::uint64_t s = mix(seed ^ mix(h) ^ mix(index + 0x9e3779b97f4a7c15ULL));
        return Rng(s);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        // rejection keeps the draw unbiased and platform independent
        const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finalizer
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace oasp
