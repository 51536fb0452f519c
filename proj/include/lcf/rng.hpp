#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>
#include <random>
#include <string_view>
#include <vector>

namespace lcf::rng {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a textual tag.
// The same (seed, tag) pair always yields the same stream, so generation
// keyed by e.g. "feat:x3|class:bkg" is replayable and shared across callers.
inline std::uint64_t substream_seed(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = 1469598103934665603ULL; // FNV-1a offset basis
    for (unsigned char c : tag) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return splitmix64(seed ^ splitmix64(h));
}

// Uniform in [0, 1) from the top 53 bits; avoids the implementation-defined
// behaviour of std::uniform_real_distribution.
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& eng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(eng);
}

// Box-Muller standard normal sampler with the usual spare-value cache.
// Hand-rolled so the draw sequence does not depend on the standard library.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : eng_(seed) {}
    explicit NormalSampler(Engine eng) : eng_(eng) {}

    double uniform01() { return lcf::rng::uniform01(eng_); }

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - lcf::rng::uniform01(eng_); // (0, 1]
        double u2 = lcf::rng::uniform01(eng_);
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double operator()(double mu, double sigma) { return mu + sigma * (*this)(); }

private:
    Engine eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Fisher-Yates permutation of 0..n-1. Modulo bias is ~n/2^64, irrelevant here.
inline std::vector<std::size_t> permutation(std::size_t n, Engine& eng) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(eng() % i);
        std::swap(p[i - 1], p[j]);
    }
    return p;
}

} // namespace lcf::rng
