#ifndef VARJUMP_SCALE_FAMILY_HPP
#define VARJUMP_SCALE_FAMILY_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "varjump/grid.hpp"
#include "varjump/series.hpp"

namespace varjump {

// Per-spatial-point sampled family {A_t f(x)} over a shared geometric scale
// grid.  Stored point-major so the per-point series is contiguous.
struct ScaleFamily {
    ScaleGrid scale_grid;
    std::size_t point_count = 0;
    std::vector<double> data;  // [point * num_scales + scale_index]

    ScaleFamily() = default;
    ScaleFamily(ScaleGrid sg, std::size_t points)
        : scale_grid(std::move(sg)), point_count(points), data(points * scale_grid.size(), 0.0) {}

    std::size_t num_scales() const { return scale_grid.size(); }
    double& at(std::size_t point, std::size_t scale) { return data[point * num_scales() + scale]; }
    double at(std::size_t point, std::size_t scale) const { return data[point * num_scales() + scale]; }

    SeriesSample series_at(std::size_t point) const {
        if (point >= point_count) throw std::out_of_range("ScaleFamily: point index");
        std::vector<double> v(data.begin() + point * num_scales(),
                              data.begin() + (point + 1) * num_scales());
        return SeriesSample(scale_grid.scales, std::move(v));
    }
};

// Jump count of the dyadic subseries {A_{2^j} f(x)}.
inline long dyadic_jump_count(const ScaleFamily& fam, std::size_t point, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("dyadic_jump_count: lambda must be positive");
    std::vector<double> t, v;
    t.reserve(fam.scale_grid.dyadic_indices.size());
    v.reserve(fam.scale_grid.dyadic_indices.size());
    for (std::size_t idx : fam.scale_grid.dyadic_indices) {
        t.push_back(fam.scale_grid.scales[idx]);
        v.push_back(fam.at(point, idx));
    }
    return jump_count(SeriesSample(std::move(t), std::move(v)), lambda);
}

// V_{2,j} over the closed octave [2^j, 2^{j+1}]; boundary samples belong to
// both adjacent octaves.
inline double octave_short_variation(const ScaleFamily& fam, std::size_t point, int j) {
    const double lo = std::exp2(j), hi = std::exp2(j + 1);
    std::vector<double> block;
    for (std::size_t k = 0; k < fam.num_scales(); ++k) {
        const double t = fam.scale_grid.scales[k];
        if (t >= lo && t <= hi) block.push_back(fam.at(point, k));
    }
    return short_variation_block(block);
}

// S_2: l^2 aggregation of the octave blocks.
inline double s2_total(const ScaleFamily& fam, std::size_t point) {
    double acc = 0.0;
    for (int j = fam.scale_grid.j_min; j <= fam.scale_grid.j_max; ++j) {
        const double b = octave_short_variation(fam, point, j);
        acc += b * b;
    }
    return std::sqrt(acc);
}

// lambda sqrt(N_lambda) / (S_2 + lambda sqrt(N^d_{lambda/3})), 0/0 -> 0.
// Measures the empirical constant of the pointwise comparison lemma.
inline double jsw_comparison_ratio(const ScaleFamily& fam, std::size_t point, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("jsw_comparison_ratio: lambda must be positive");
    const double num = lambda * std::sqrt(static_cast<double>(jump_count(fam.series_at(point), lambda)));
    const double den = s2_total(fam, point) +
                       lambda * std::sqrt(static_cast<double>(dyadic_jump_count(fam, point, lambda / 3.0)));
    if (num == 0.0) return 0.0;
    return num / den;
}

}  // namespace varjump

#endif  // VARJUMP_SCALE_FAMILY_HPP
