#ifndef VARJUMP_RNG_HPP
#define VARJUMP_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "varjump/series.hpp"

namespace varjump {

// splitmix64 step; used to derive independent per-trial seeds from the
// master seed so sweeps are deterministic under any parallel schedule.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    splitmix64(s);
    return splitmix64(s);
}

struct Rng {
    std::mt19937_64 engine;

    explicit Rng(std::uint64_t seed) : engine(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine);
    }
    double normal(double mean = 0.0, double stddev = 1.0) {
        return std::normal_distribution<double>(mean, stddev)(engine);
    }
    long integer(long lo, long hi) {  // inclusive
        return std::uniform_int_distribution<long>(lo, hi)(engine);
    }
};

// Random series on 1, 2, ..., len with standard normal values.
inline SeriesSample random_series(Rng& rng, std::size_t len) {
    std::vector<double> t(len), v(len);
    for (std::size_t i = 0; i < len; ++i) {
        t[i] = static_cast<double>(i + 1);
        v[i] = rng.normal();
    }
    return SeriesSample(std::move(t), std::move(v));
}

}  // namespace varjump

#endif  // VARJUMP_RNG_HPP
