#ifndef VARJUMP_ORACLES_HPP
#define VARJUMP_ORACLES_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "varjump/series.hpp"

namespace varjump::oracles {

// Reference implementations by brute-force enumeration.  They share no code
// with the production dynamic programs and are only feasible for short
// series; the equivalence sweeps keep len <= 12.

namespace detail {

inline void vq_extend(const std::vector<double>& v, double q, std::size_t last, double acc, double& top) {
    if (acc > top) top = acc;
    for (std::size_t next = last + 1; next < v.size(); ++next)
        vq_extend(v, q, next, acc + std::pow(std::abs(v[next] - v[last]), q), top);
}

inline long jump_extend(const std::vector<double>& v, double lambda, std::size_t start) {
    long best = 0;
    for (std::size_t s = start; s < v.size(); ++s)
        for (std::size_t t = s + 1; t < v.size(); ++t)
            if (std::abs(v[t] - v[s]) > lambda) {
                const long cand = 1 + jump_extend(v, lambda, t);
                if (cand > best) best = cand;
            }
    return best;
}

}  // namespace detail

// Exhaustive search over all nonempty increasing subsequences.
inline double vq_norm_exhaustive(const SeriesSample& s, double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("vq_norm_exhaustive: q >= 1 required");
    if (s.size() == 0) throw std::invalid_argument("vq_norm_exhaustive: empty series");
    if (s.size() > 16) throw std::invalid_argument("vq_norm_exhaustive: series too long for brute force");
    double top = 0.0;
    for (std::size_t first = 0; first < s.size(); ++first)
        detail::vq_extend(s.values, q, first, std::pow(std::abs(s.values[first]), q), top);
    return std::pow(top, 1.0 / q);
}

// Exhaustive search over all admissible interval systems
// s_1 < t_1 <= s_2 < t_2 <= ... with |a_{t_k} - a_{s_k}| > lambda.
inline long jump_count_exhaustive(const SeriesSample& s, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("jump_count_exhaustive: lambda > 0 required");
    if (s.size() > 16) throw std::invalid_argument("jump_count_exhaustive: series too long for brute force");
    return detail::jump_extend(s.values, lambda, 0);
}

// Brute-force in-octave 2-variation (no leading term), for cross-checking
// short_variation_block on small blocks.
inline double short_variation_exhaustive(const std::vector<double>& values) {
    if (values.size() > 16) throw std::invalid_argument("short_variation_exhaustive: block too long");
    double top = 0.0;
    struct Walker {
        const std::vector<double>& v;
        double& top;
        void extend(std::size_t last, double acc) {
            if (acc > top) top = acc;
            for (std::size_t next = last + 1; next < v.size(); ++next) {
                const double d = v[next] - v[last];
                extend(next, acc + d * d);
            }
        }
    } walker{values, top};
    for (std::size_t first = 0; first < values.size(); ++first) walker.extend(first, 0.0);
    return std::sqrt(top);
}

}  // namespace varjump::oracles

#endif  // VARJUMP_ORACLES_HPP
