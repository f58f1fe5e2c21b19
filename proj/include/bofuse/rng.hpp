#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace bofuse {

// splitmix64 finalizer; used for seeding and for stream derivation.
constexpr inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(a) ^ (0x9e3779b97f4a7c15ULL + b));
}

// Deterministic counter-keyed uniform in [0,1): same key, same value, on
// every platform. Used for per-(epoch, sample) pseudo-label draws.
inline double u01_at(std::uint64_t key, std::uint64_t epoch, std::uint64_t idx) {
    const std::uint64_t h = mix64(mix64(key, epoch), idx);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// xoshiro256++ seeded from a (seed, stream) pair. Identical pairs replay the
// same sequence; distinct stream ids give statistically independent streams.
// A value type: copying forks the state.
class Rng {
public:
    Rng() : Rng(0, 0) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
        std::uint64_t sm = mix64(seed, stream);
        for (auto& s : state_) {
            sm = mix64(sm);
            s = sm;
        }
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t next_u64() {
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

    // Uniform in [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    // Standard normal via Box-Muller (one draw per call, no cached spare).
    double normal() {
        double u1 = u01();
        while (u1 <= 0.0) u1 = u01();
        const double u2 = u01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    bool bernoulli(double p) { return u01() < p; }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // multiply-shift; bias is negligible for the n used here (< 2^32)
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Child stream keyed by this rng's identity and the given tags.
    Rng derive(std::uint64_t a, std::uint64_t b = 0) const {
        return Rng(seed_, mix64(mix64(stream_, a), b));
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t state_[4];
};

}  // namespace bofuse
