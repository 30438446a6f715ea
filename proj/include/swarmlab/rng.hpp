#pragma once

// Deterministic, platform-independent random numbers. The standard library
// distributions are not bit-stable across implementations, so the few
// generators needed here are written out explicitly (xoshiro256** core,
// splitmix64 seeding, Box-Muller normals).

#include <cstdint>
#include <cstring>
#include <string_view>

#include "swarmlab/vec.hpp"

namespace swarmlab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stable 64-bit hash of a tag string (FNV-1a), used to derive named streams.
inline std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

// Derives an independent child seed from (seed, tag). Used for per-worker and
// per-run streams so that sub-computations stay reproducible in isolation.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + tag * 0xd1b54a32d192ed03ULL);
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
    return derive_seed(seed, hash_tag(tag));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0x853c49e6748fea9bULL) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
        has_spare_ = false;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1) with 53 bits of mantissa.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    int uniform_int(int lo, int hi) { // inclusive bounds
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    template <std::size_t D>
    Vec<D> normal_vec() {
        Vec<D> v;
        for (std::size_t i = 0; i < D; ++i) v[i] = normal();
        return v;
    }

    template <std::size_t D>
    Vec<D> uniform_in_cube(double half) {
        Vec<D> v;
        for (std::size_t i = 0; i < D; ++i) v[i] = uniform(-half, half);
        return v;
    }

    // Uniform in the closed ball B(0, radius), by rejection from the cube.
    template <std::size_t D>
    Vec<D> uniform_in_ball(double radius) {
        for (;;) {
            Vec<D> v = uniform_in_cube<D>(1.0);
            if (norm2(v) <= 1.0) return radius * v;
        }
    }

    template <std::size_t D>
    Vec<D> unit_vector() {
        for (;;) {
            Vec<D> v = normal_vec<D>();
            const double n = norm(v);
            if (n > 1e-12) return (1.0 / n) * v;
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_;
};

} // namespace swarmlab
