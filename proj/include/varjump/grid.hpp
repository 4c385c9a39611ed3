#ifndef VARJUMP_GRID_HPP
#define VARJUMP_GRID_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "varjump/fft.hpp"

namespace varjump {

// Periodic cube [-L, L)^n sampled on N points per axis, N a power of two.
// Row-major layout: for n = 2 the linear index is i0 * N + i1 and axis 0 is
// the first coordinate.
struct Grid {
    int dim = 1;
    std::size_t points_per_axis = 8;
    double half_width = 1.0;
    double spacing = 0.25;

    static Grid make(int n, std::size_t points, double half_width) {
        if (n != 1 && n != 2) throw std::invalid_argument("Grid: dimension must be 1 or 2");
        if (points < 8 || !fft::is_power_of_two(points))
            throw std::invalid_argument("Grid: points per axis must be a power of two >= 8");
        if (!(half_width > 0.0)) throw std::invalid_argument("Grid: half width must be positive");
        Grid g;
        g.dim = n;
        g.points_per_axis = points;
        g.half_width = half_width;
        g.spacing = 2.0 * half_width / static_cast<double>(points);
        return g;
    }

    std::size_t size() const {
        return dim == 1 ? points_per_axis : points_per_axis * points_per_axis;
    }
    double cell_measure() const { return dim == 1 ? spacing : spacing * spacing; }
    double cutoff_radius() const { return half_width / 2.0; }

    // Axis coordinate of index i, in [-L, L).
    double coordinate(std::size_t i) const {
        return -half_width + spacing * static_cast<double>(i);
    }
    // Signed periodic representative in [-L, L) of index i interpreted as an
    // offset (used when building convolution kernels).
    double offset_coordinate(std::size_t i) const {
        double c = spacing * static_cast<double>(i);
        if (c >= half_width) c -= 2.0 * half_width;
        return c;
    }
    // Frequency of FFT bin m along one axis: m/(2L) with m in [-N/2, N/2).
    double frequency(std::size_t m) const {
        double f = static_cast<double>(m);
        if (m >= points_per_axis / 2) f -= static_cast<double>(points_per_axis);
        return f / (2.0 * half_width);
    }

    bool operator==(const Grid& o) const {
        return dim == o.dim && points_per_axis == o.points_per_axis && half_width == o.half_width;
    }
};

struct SampledFunction {
    Grid grid;
    std::vector<double> values;

    SampledFunction() = default;
    explicit SampledFunction(const Grid& g) : grid(g), values(g.size(), 0.0) {}
    SampledFunction(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != g.size()) throw std::invalid_argument("SampledFunction: value count mismatch");
        for (double x : values)
            if (!std::isfinite(x)) throw std::invalid_argument("SampledFunction: non-finite value");
    }

    double& at(std::size_t i0, std::size_t i1 = 0) {
        return values[grid.dim == 1 ? i0 : i0 * grid.points_per_axis + i1];
    }
    double at(std::size_t i0, std::size_t i1 = 0) const {
        return values[grid.dim == 1 ? i0 : i0 * grid.points_per_axis + i1];
    }
};

template <class F>
SampledFunction sample_function(const Grid& g, F&& f) {
    SampledFunction out(g);
    const std::size_t n = g.points_per_axis;
    if (g.dim == 1) {
        for (std::size_t i = 0; i < n; ++i) out.values[i] = f(g.coordinate(i), 0.0);
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out.values[i * n + j] = f(g.coordinate(i), g.coordinate(j));
    }
    return out;
}

// Geometric scale grid t_{j,i} = 2^{j+i/s}, j_min <= j <= j_max, 0 <= i < s,
// closed with the final dyadic point 2^{j_max+1}.
struct ScaleGrid {
    int j_min = 0;
    int j_max = 0;
    int samples_per_octave = 1;
    std::vector<double> scales;
    std::vector<std::size_t> dyadic_indices;  // positions of the {2^j} subsequence

    static ScaleGrid make(int j_min, int j_max, int samples_per_octave) {
        if (j_max < j_min) throw std::invalid_argument("ScaleGrid: j_max < j_min");
        if (samples_per_octave < 1) throw std::invalid_argument("ScaleGrid: samples_per_octave < 1");
        ScaleGrid sg;
        sg.j_min = j_min;
        sg.j_max = j_max;
        sg.samples_per_octave = samples_per_octave;
        for (int j = j_min; j <= j_max; ++j)
            for (int i = 0; i < samples_per_octave; ++i) {
                if (i == 0) sg.dyadic_indices.push_back(sg.scales.size());
                sg.scales.push_back(std::exp2(j + static_cast<double>(i) / samples_per_octave));
            }
        sg.dyadic_indices.push_back(sg.scales.size());
        sg.scales.push_back(std::exp2(j_max + 1));
        return sg;
    }

    std::size_t size() const { return scales.size(); }
};

inline double lp_norm(const SampledFunction& f, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : f.values) m = std::max(m, std::abs(x));
        return m;
    }
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must satisfy p >= 1");
    double acc = 0.0;
    for (double x : f.values) acc += std::pow(std::abs(x), p);
    return std::pow(acc * f.grid.cell_measure(), 1.0 / p);
}

inline std::vector<fft::cdouble> spectrum(const SampledFunction& f) {
    std::vector<fft::cdouble> a(f.values.begin(), f.values.end());
    if (f.grid.dim == 1)
        fft::transform(a, false);
    else
        fft::transform_2d(a, f.grid.points_per_axis, f.grid.points_per_axis, false);
    return a;
}

inline SampledFunction from_spectrum(const Grid& g, std::vector<fft::cdouble> a) {
    if (g.dim == 1)
        fft::transform(a, true);
    else
        fft::transform_2d(a, g.points_per_axis, g.points_per_axis, true);
    SampledFunction out(g);
    for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = a[i].real();
    return out;
}

// Periodic convolution with k treated as a density: (f * k)(x) =
// h^n sum_y f(x - y) k(y).
inline SampledFunction convolve(const SampledFunction& f, const SampledFunction& k) {
    if (!(f.grid == k.grid)) throw std::invalid_argument("convolve: grid mismatch");
    auto fa = spectrum(f);
    auto ka = spectrum(k);
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= ka[i];
    SampledFunction out = from_spectrum(f.grid, std::move(fa));
    const double scale = f.grid.cell_measure();
    for (double& x : out.values) x *= scale;
    return out;
}

// (R_sigma f)(x) = f(sigma x) with sigma the rotation by `angle`; bilinear
// interpolation with periodic wraparound.  Exact for angle 0.
inline SampledFunction rotate(const SampledFunction& f, double angle) {
    if (f.grid.dim != 2) throw std::invalid_argument("rotate: requires a 2-d grid");
    const std::size_t n = f.grid.points_per_axis;
    const double L = f.grid.half_width;
    const double h = f.grid.spacing;
    const double c = std::cos(angle), s = std::sin(angle);
    SampledFunction out(f.grid);
    for (std::size_t i = 0; i < n; ++i) {
        const double x0 = f.grid.coordinate(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double x1 = f.grid.coordinate(j);
            const double y0 = c * x0 - s * x1;
            const double y1 = s * x0 + c * x1;
            // fractional grid position, wrapped
            double u = (y0 + L) / h;
            double v = (y1 + L) / h;
            double fu = std::floor(u), fv = std::floor(v);
            const double du = u - fu, dv = v - fv;
            const std::size_t nn = n;
            auto wrap = [nn](double t) {
                long long m = static_cast<long long>(t) % static_cast<long long>(nn);
                if (m < 0) m += static_cast<long long>(nn);
                return static_cast<std::size_t>(m);
            };
            const std::size_t a0 = wrap(fu), a1 = (a0 + 1) % nn;
            const std::size_t b0 = wrap(fv), b1 = (b0 + 1) % nn;
            const double v00 = f.values[a0 * nn + b0];
            const double v01 = f.values[a0 * nn + b1];
            const double v10 = f.values[a1 * nn + b0];
            const double v11 = f.values[a1 * nn + b1];
            out.values[i * nn + j] = (1.0 - du) * ((1.0 - dv) * v00 + dv * v01) +
                                     du * ((1.0 - dv) * v10 + dv * v11);
        }
    }
    return out;
}

}  // namespace varjump

#endif  // VARJUMP_GRID_HPP
