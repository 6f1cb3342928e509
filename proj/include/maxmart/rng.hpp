#ifndef MAXMART_RNG_HPP_
#define MAXMART_RNG_HPP_

#include <array>
#include <cmath>
#include <cstdint>

namespace maxmart {

// SplitMix64 finalizer (Steele/Lea/Flood constants). Per-path streams are
// derived as  state = splitmix sequence seeded with  mix64(master ^ mix64(path_index + 1)),
// so a batch may be partitioned across workers in any way without changing
// any path. The exact constants below are part of the file-format/reproducibility
// contract and are restated in the README.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

inline std::uint64_t path_stream_seed(std::uint64_t master_seed, std::uint64_t path_index) {
    return mix64(master_seed ^ mix64(path_index + 1));
}

// xoshiro256++ (Blackman/Vigna), seeded through SplitMix64.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next_u64() {
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

    // uniform on [0, 1) with 53 significant bits
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // uniform on (0, 1], safe as a log() argument
    double next_double_pos() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_;
};

// Marsaglia-Tsang ziggurat for the standard normal, 256 layers.
// The throughput of every generator is dominated by this sampler, hence the
// table-driven scheme instead of std::normal_distribution.
namespace zig {

struct Tables {
    std::array<std::uint64_t, 256> k;
    std::array<double, 256> w;
    std::array<double, 256> f;
};

Tables build_tables();

inline const Tables& tables() {
    static const Tables t = build_tables();
    return t;
}

}  // namespace zig

class NormalSampler {
  public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed), t_(zig::tables()) {}

    double next() {
        for (;;) {
            const std::uint64_t u = rng_.next_u64();
            const std::uint64_t i = u & 255u;
            const std::int64_t j = static_cast<std::int64_t>(u >> 8) - (1LL << 55);  // signed 56-bit
            const double x = double(j) * t_.w[i];
            if (std::uint64_t(j < 0 ? -j : j) < t_.k[i]) return x;
            if (i == 0) return tail(j < 0);
            const double xx = x * x;
            if (t_.f[i] + rng_.next_double() * (t_.f[i - 1] - t_.f[i]) < std::exp(-0.5 * xx)) return x;
        }
    }

    Xoshiro256pp& raw() { return rng_; }
    double next_double() { return rng_.next_double(); }
    double next_double_pos() { return rng_.next_double_pos(); }

  private:
    double tail(bool negative) {
        // Marsaglia tail method beyond x = R
        constexpr double R = 3.6541528853610088;
        double x, y;
        do {
            x = -std::log(rng_.next_double_pos()) / R;
            y = -std::log(rng_.next_double_pos());
        } while (y + y < x * x);
        return negative ? -(R + x) : (R + x);
    }

    Xoshiro256pp rng_;
    const zig::Tables& t_;
};

}  // namespace maxmart

#endif  // MAXMART_RNG_HPP_
