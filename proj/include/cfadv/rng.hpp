#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace cfadv {

// SplitMix64 mixing step. Used to turn user seeds and stream indices into
// well-spread engine seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic random source: std::mt19937_64 (the algorithm is fixed by the
// standard, so sequences are identical across platforms) with uniform doubles
// taken from the top 53 bits and normals via Box-Muller. std::*_distribution
// is deliberately not used; its output is implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), eng_(splitmix64(seed)) {}

    // Independent stream for a work item (e.g. one test instance). Same
    // (seed, index) pair always yields the same stream, so batched work can
    // run in any order or in parallel without changing results.
    Rng derive(std::uint64_t index) const {
        return Rng(splitmix64(seed_ + 0x9e3779b97f4a7c15ULL * (index + 1)));
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t bound = n * ((~std::uint64_t{0}) / n);
        std::uint64_t x = eng_();
        while (x >= bound) x = eng_();
        return x % n;
    }

    // Standard normal via Box-Muller; the paired value is cached.
    double normal() {
        if (cached_) {
            const double z = *cached_;
            cached_.reset();
            return z;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        cached_ = r * std::sin(a);
        return r * std::cos(a);
    }

    std::vector<double> normal_vec(std::size_t n) {
        std::vector<double> v(n);
        for (auto& x : v) x = normal();
        return v;
    }

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_int(i)]);
        }
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
    std::optional<double> cached_;
};

}  // namespace cfadv
