#ifndef VARJUMP_SERIES_HPP
#define VARJUMP_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace varjump {

// One sampled trajectory {a_t} on strictly increasing positive times.
struct SeriesSample {
    std::vector<double> times;
    std::vector<double> values;

    SeriesSample() = default;
    SeriesSample(std::vector<double> t, std::vector<double> v)
        : times(std::move(t)), values(std::move(v)) {
        if (times.size() != values.size()) throw std::invalid_argument("SeriesSample: length mismatch");
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (!(times[i] > 0.0)) throw std::invalid_argument("SeriesSample: times must be positive");
            if (i > 0 && !(times[i] > times[i - 1]))
                throw std::invalid_argument("SeriesSample: times must be strictly increasing");
            if (!std::isfinite(values[i])) throw std::invalid_argument("SeriesSample: non-finite value");
        }
    }

    std::size_t size() const { return values.size(); }
};

// q-variation norm: supremum over nonempty subsequences t_0 < t_1 < ... of
//   (|a_{t_0}|^q + sum_k |a_{t_k} - a_{t_{k-1}}|^q)^{1/q}.
// The leading term is raised to the q-th power so that sup_t |a_t| <= V_q
// holds exactly for every series (single-point selections are admissible).
// O(len^2) dynamic program over the ending index.
inline double vq_norm(const SeriesSample& s, double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("vq_norm: q must satisfy q >= 1");
    const std::size_t n = s.size();
    if (n == 0) throw std::invalid_argument("vq_norm: empty series");
    std::vector<double> best(n);
    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        best[i] = std::pow(std::abs(s.values[i]), q);
        for (std::size_t j = 0; j < i; ++j)
            best[i] = std::max(best[i], best[j] + std::pow(std::abs(s.values[i] - s.values[j]), q));
        top = std::max(top, best[i]);
    }
    return std::pow(top, 1.0 / q);
}

// Variant scoring the literal display (|a_{t_0}| + sum |delta|^q)^{1/q} with
// the leading term unpowered.  Kept for comparison only; it fails the sup
// bound on constant series and is excluded from the invariants.
inline double vq_norm_literal_first_term(const SeriesSample& s, double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("vq_norm: q must satisfy q >= 1");
    const std::size_t n = s.size();
    if (n == 0) throw std::invalid_argument("vq_norm: empty series");
    std::vector<double> best(n);
    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        best[i] = std::abs(s.values[i]);
        for (std::size_t j = 0; j < i; ++j)
            best[i] = std::max(best[i], best[j] + std::pow(std::abs(s.values[i] - s.values[j]), q));
        top = std::max(top, best[i]);
    }
    return std::pow(top, 1.0 / q);
}

// lambda-jump count: maximal N with s_1 < t_1 <= s_2 < t_2 <= ... <= s_N < t_N
// and |a_{t_k} - a_{s_k}| > lambda (strict).  Greedy scan anchored at the
// current segment start: advance tracking the segment extremes until the new
// sample exceeds one of them by more than lambda, count, re-anchor at the
// exceeding index.  Earliest-endpoint choice; optimality over all interval
// systems is checked against the exhaustive oracle in the tests.
inline long jump_count(const SeriesSample& s, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("jump_count: lambda must be positive");
    long count = 0;
    if (s.size() == 0) return 0;
    double lo = s.values[0], hi = s.values[0];
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double v = s.values[i];
        if (v - lo > lambda || hi - v > lambda) {
            ++count;
            lo = hi = v;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    return count;
}

// In-octave 2-variation: (sup over subsequences of sum |delta|^2)^{1/2} with
// no leading single-point term.  Empty input yields 0 by convention.
inline double short_variation_block(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    std::vector<double> best(n, 0.0);
    double top = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const double d = values[i] - values[j];
            best[i] = std::max(best[i], best[j] + d * d);
        }
        top = std::max(top, best[i]);
    }
    return std::sqrt(top);
}

// lambda * N_lambda^{1/q} / (2^{1+1/q} * V_q); 0 when there are no jumps.
inline double pointwise_control_ratio(const SeriesSample& s, double lambda, double q) {
    const long n = jump_count(s, lambda);
    if (n == 0) return 0.0;
    const double vq = vq_norm(s, q);
    if (!(vq > 0.0)) throw std::logic_error("pointwise_control_ratio: jumps with zero variation");
    return lambda * std::pow(static_cast<double>(n), 1.0 / q) / (std::exp2(1.0 + 1.0 / q) * vq);
}

// V_2 (increment-only) over the trapezoidal interpolation bound
// ||a||_{L^2}^{1/2} ||a'||_{L^2}^{1/2} on the spanned time interval.
// Derivative by centered differences, one-sided at the ends.
inline double v2_interpolation_ratio(const SeriesSample& s) {
    const std::size_t n = s.size();
    if (n < 3) throw std::invalid_argument("v2_interpolation_ratio: need at least 3 samples");
    const double v2 = short_variation_block(s.values);
    if (v2 == 0.0) return 0.0;

    std::vector<double> deriv(n);
    deriv[0] = (s.values[1] - s.values[0]) / (s.times[1] - s.times[0]);
    deriv[n - 1] = (s.values[n - 1] - s.values[n - 2]) / (s.times[n - 1] - s.times[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i)
        deriv[i] = (s.values[i + 1] - s.values[i - 1]) / (s.times[i + 1] - s.times[i - 1]);

    auto l2_trapezoid = [&](const std::vector<double>& g) {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double dt = s.times[i + 1] - s.times[i];
            acc += 0.5 * dt * (g[i] * g[i] + g[i + 1] * g[i + 1]);
        }
        return std::sqrt(acc);
    };
    const double bound = std::sqrt(l2_trapezoid(s.values)) * std::sqrt(l2_trapezoid(deriv));
    if (!(bound > 0.0)) return 0.0;
    return v2 / bound;
}

}  // namespace varjump

#endif  // VARJUMP_SERIES_HPP
