#pragma once

#include <cstdint>
#include <cmath>
#include <complex>

namespace cvqkd::rng {

// splitmix64 finalizer; used both as a standalone counter-based generator
// for sub-seed derivation and to seed the xoshiro streams.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Sub-seed for a frame: master seed XOR frame id, fed through the
// counter-based mixer. Schedule-independent by construction.
inline std::uint64_t frame_seed(std::uint64_t master, std::uint64_t frame_id) {
    return mix64(master ^ (frame_id * 0xd1342543de82ef95ULL));
}

// Independent noise streams within a frame.
enum class Stream : std::uint64_t {
    symbols = 1,
    excess = 2,
    phase = 3,
    shot = 4,
    electronic = 5,
    raman = 6,
    misc = 7,
};

inline std::uint64_t chunk_seed(std::uint64_t frame_seed_, Stream s, std::uint64_t chunk) {
    std::uint64_t z = frame_seed_;
    z = mix64(z ^ (static_cast<std::uint64_t>(s) * 0x9e3779b97f4a7c15ULL));
    z = mix64(z ^ (chunk * 0xbf58476d1ce4e5b9ULL));
    return z;
}

// xoshiro256++ (Blackman/Vigna). Small, fast, and reproducible everywhere,
// unlike std::normal_distribution whose output is implementation-defined.
class Xoshiro256 {
  public:
    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t z = seed;
        for (auto& w : s_) {
            z = mix64(z);
            w = z;
        }
    }

    std::uint64_t next() {
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

    // uniform in (0, 1]
    double uniform() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1p-53;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

// Box-Muller. Emits pairs; keeps one cached.
class Gaussian {
  public:
    explicit Gaussian(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_) {
            have_ = false;
            return cached_;
        }
        const double u1 = rng_.uniform();
        const double u2 = rng_.uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_ = true;
        return r * std::cos(a);
    }

    std::complex<double> next_complex(double sigma_per_quadrature) {
        const double u1 = rng_.uniform();
        const double u2 = rng_.uniform();
        const double r = sigma_per_quadrature * std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

  private:
    Xoshiro256 rng_;
    double cached_ = 0.0;
    bool have_ = false;
};

}  // namespace cvqkd::rng
