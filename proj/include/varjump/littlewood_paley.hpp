#ifndef VARJUMP_LITTLEWOOD_PALEY_HPP
#define VARJUMP_LITTLEWOOD_PALEY_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "varjump/grid.hpp"

namespace varjump {

// Low-pass profile: phi_hat(u) = 1 for |u| <= 2, 0 for |u| > 4, joined by a
// C^2 quintic smoothstep.  Level k rescales the argument: phi_hat_k(xi) =
// phi_hat(2^k |xi|), so the plateau covers |xi| <= 2^{1-k} and the support
// ends at 2^{2-k}, exactly on the discrete frequency grid.
struct LittlewoodPaleySmoother {
    static double profile(double u) {
        const double a = std::abs(u);
        if (a <= 2.0) return 1.0;
        if (a > 4.0) return 0.0;
        const double s = (a - 2.0) / 2.0;
        return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
    }

    static double level(double xi_norm, int k) { return profile(std::exp2(k) * xi_norm); }
};

// Frequency norm of FFT bin index (row-major flattening for n = 2).
inline double bin_frequency_norm(const Grid& g, std::size_t flat) {
    if (g.dim == 1) return std::abs(g.frequency(flat));
    const std::size_t n = g.points_per_axis;
    const double f0 = g.frequency(flat / n);
    const double f1 = g.frequency(flat % n);
    return std::hypot(f0, f1);
}

// phi_k * f realized as a Fourier multiplier.
inline SampledFunction lowpass(const SampledFunction& f, int k) {
    auto a = spectrum(f);
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] *= LittlewoodPaleySmoother::level(bin_frequency_norm(f.grid, i), k);
    return from_spectrum(f.grid, std::move(a));
}

// (delta_0 - phi_k) * f.
inline SampledFunction highpass_complement(const SampledFunction& f, int k) {
    SampledFunction low = lowpass(f, k);
    SampledFunction out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= low.values[i];
    return out;
}

}  // namespace varjump

#endif  // VARJUMP_LITTLEWOOD_PALEY_HPP
