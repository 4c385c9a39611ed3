#ifndef VARJUMP_OPERATORS_HPP
#define VARJUMP_OPERATORS_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "varjump/grid.hpp"
#include "varjump/littlewood_paley.hpp"
#include "varjump/scale_family.hpp"
#include "varjump/sphere.hpp"

namespace varjump {

enum class OperatorKind { truncated_singular, averaging, hilbert_1d };

struct OperatorSpec {
    OperatorKind kind = OperatorKind::truncated_singular;
    SphereKernel kernel;
    Grid grid;
    ScaleGrid scale_grid;

    static OperatorSpec make(OperatorKind kind, SphereKernel kernel, Grid grid, ScaleGrid scales) {
        if (kind == OperatorKind::hilbert_1d) {
            if (grid.dim != 1) throw std::invalid_argument("OperatorSpec: hilbert_1d requires n = 1");
            if (kernel.dim != 1 || std::abs(kernel.values[0] - 1.0 / kPi) > 1e-15 ||
                std::abs(kernel.values[1] + 1.0 / kPi) > 1e-15)
                throw std::invalid_argument("OperatorSpec: hilbert_1d requires Omega(+-1) = +-1/pi");
        }
        if (kind == OperatorKind::truncated_singular) {
            if (!kernel.cancellation_enforced)
                throw std::invalid_argument("OperatorSpec: truncated singular integral needs a cancelled kernel");
            const double mean = std::abs(kernel.spherical_mean()) * kernel.sphere_measure();
            if (mean > 1e-12 * (1.0 + kernel_l1(kernel)))
                throw std::invalid_argument("OperatorSpec: kernel marked cancelled but has a spherical mean");
        }
        if ((grid.dim == 1) != (kernel.dim == 1))
            throw std::invalid_argument("OperatorSpec: kernel/grid dimension mismatch");
        OperatorSpec s;
        s.kind = kind;
        s.kernel = std::move(kernel);
        s.grid = std::move(grid);
        s.scale_grid = std::move(scales);
        return s;
    }

    static SphereKernel hilbert_kernel() { return SphereKernel::pair(1.0 / kPi, -1.0 / kPi); }
};

namespace detail {

inline double direction_value(const SphereKernel& k, double y0, double y1) {
    if (k.dim == 1) return y0 >= 0.0 ? k.values[0] : k.values[1];
    return k.eval(std::atan2(y1, y0));
}

}  // namespace detail

// Grid kernel Omega(y')/|y|^n restricted to r_lo < |y| <= r_hi (both already
// capped at the torus cutoff by the callers).  All operators below go through
// this single builder so radial set membership partitions exactly.
inline SampledFunction radial_restriction_kernel(const Grid& g, const SphereKernel& k, double r_lo, double r_hi) {
    SampledFunction out(g);
    const std::size_t n = g.points_per_axis;
    if (g.dim == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            const double y = g.offset_coordinate(i);
            const double r = std::abs(y);
            if (r > r_lo && r <= r_hi) out.values[i] = detail::direction_value(k, y, 0.0) / r;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double y0 = g.offset_coordinate(i);
            for (std::size_t j = 0; j < n; ++j) {
                const double y1 = g.offset_coordinate(j);
                const double r = std::hypot(y0, y1);
                if (r > r_lo && r <= r_hi)
                    out.values[i * n + j] = detail::direction_value(k, y0, y1) / (r * r);
            }
        }
    }
    return out;
}

// T_eps f: quadrature over eps < |y| <= R_cut of Omega(y')|y|^{-n} f(x-y).
inline SampledFunction apply_truncated(const OperatorSpec& spec, const SampledFunction& f, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("apply_truncated: eps must be positive");
    if (spec.kind == OperatorKind::averaging)
        throw std::invalid_argument("apply_truncated: spec is an averaging operator");
    const double r_cut = spec.grid.cutoff_radius();
    if (eps >= r_cut) return SampledFunction(spec.grid);
    return convolve(f, radial_restriction_kernel(spec.grid, spec.kernel, eps, r_cut));
}

// M_t f = t^{-n} * quadrature over 0 < |y| < t of Omega(y') f(x-y); the ball
// is hard-truncated at the torus cutoff.
inline SampledFunction apply_averaging(const OperatorSpec& spec, const SampledFunction& f, double t) {
    if (spec.kind != OperatorKind::averaging)
        throw std::invalid_argument("apply_averaging: spec is not an averaging operator");
    if (!(t >= 2.0 * spec.grid.spacing))
        throw std::invalid_argument("apply_averaging: t below the 2h resolvability floor");
    const Grid& g = spec.grid;
    const double radius = std::min(t, g.cutoff_radius());
    SampledFunction kernel(g);
    const std::size_t n = g.points_per_axis;
    const double norm = std::pow(t, -g.dim);
    if (g.dim == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            const double y = g.offset_coordinate(i);
            const double r = std::abs(y);
            if (r > 0.0 && r < radius) kernel.values[i] = norm * detail::direction_value(spec.kernel, y, 0.0);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double y0 = g.offset_coordinate(i);
            for (std::size_t j = 0; j < n; ++j) {
                const double y1 = g.offset_coordinate(j);
                const double r = std::hypot(y0, y1);
                if (r > 0.0 && r < radius)
                    kernel.values[i * n + j] = norm * detail::direction_value(spec.kernel, y0, y1);
            }
        }
    }
    return convolve(f, kernel);
}

// Evaluates the operator at every scale of the scale grid.
inline ScaleFamily family_apply(const OperatorSpec& spec, const SampledFunction& f) {
    ScaleFamily fam(spec.scale_grid, f.values.size());
    const std::size_t num_scales = spec.scale_grid.size();
    for (std::size_t s = 0; s < num_scales; ++s) {
        const double scale = spec.scale_grid.scales[s];
        SampledFunction g = spec.kind == OperatorKind::averaging ? apply_averaging(spec, f, scale)
                                                                 : apply_truncated(spec, f, scale);
        for (std::size_t x = 0; x < g.values.size(); ++x) fam.at(x, s) = g.values[x];
    }
    return fam;
}

// Octave window [j_lo, j_hi] covering every annulus (2^j, 2^{j+1}] that meets
// the admissible radial range [2h, R_cut].
struct OctaveWindow {
    int j_lo = 0;
    int j_hi = 0;
};

inline OctaveWindow annulus_window(const Grid& g) {
    const double lo = 2.0 * g.spacing;
    const double hi = g.cutoff_radius();
    OctaveWindow w;
    w.j_lo = static_cast<int>(std::ceil(std::log2(lo) - 1e-12));
    w.j_hi = static_cast<int>(std::ceil(std::log2(hi) - 1e-12)) - 1;
    if (w.j_hi < w.j_lo) throw std::invalid_argument("annulus_window: grid too coarse");
    return w;
}

// Grid realization of the annulus measure nu_j (optionally for a piece
// Omega_m), as a convolution kernel.
inline SampledFunction annulus_kernel(const Grid& g, const SphereKernel& k, int j) {
    const double r_cut = g.cutoff_radius();
    return radial_restriction_kernel(g, k, std::exp2(j), std::min(std::exp2(j + 1), r_cut));
}

// Relative sup-norm residual of the compensated three-term decomposition
//   T_{2^k} f = phi_k * (sum_j nu_j * f) - phi_k * (sum_{l<0} nu_{k+l} * f)
//               + sum_{s>=0} (delta_0 - phi_k) * nu_{k+s} * f
// with all sums truncated to the window, where the identity is exact algebra.
inline double lp_decomposition_residual(const OperatorSpec& spec, const SampledFunction& f, int k,
                                        const OctaveWindow& w) {
    if (k < w.j_lo || k > w.j_hi) throw std::invalid_argument("lp_decomposition_residual: k outside window");
    const Grid& g = spec.grid;

    SampledFunction direct = apply_truncated(spec, f, std::exp2(k));

    std::vector<SampledFunction> nu_conv;
    nu_conv.reserve(w.j_hi - w.j_lo + 1);
    for (int j = w.j_lo; j <= w.j_hi; ++j) nu_conv.push_back(convolve(f, annulus_kernel(g, spec.kernel, j)));

    SampledFunction all(g), low_part(g), high_part(g);
    for (int j = w.j_lo; j <= w.j_hi; ++j) {
        const SampledFunction& u = nu_conv[j - w.j_lo];
        for (std::size_t i = 0; i < all.values.size(); ++i) all.values[i] += u.values[i];
        if (j < k)
            for (std::size_t i = 0; i < low_part.values.size(); ++i) low_part.values[i] += u.values[i];
        else {
            SampledFunction hp = highpass_complement(u, k);
            for (std::size_t i = 0; i < high_part.values.size(); ++i) high_part.values[i] += hp.values[i];
        }
    }
    SampledFunction t1 = lowpass(all, k);
    SampledFunction t2 = lowpass(low_part, k);

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < direct.values.size(); ++i) {
        const double combo = t1.values[i] - t2.values[i] + high_part.values[i];
        num = std::max(num, std::abs(combo - direct.values[i]));
        den = std::max(den, std::abs(direct.values[i]));
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

enum class SquareFunctionMode { high, low };

struct SquareFunctionResult {
    SampledFunction pointwise;
    double l2_norm = 0.0;
};

// G_s^{(m)} f = (sum_k |[(delta_0 - phi_k) * nu^{(m)}_{k+s}] * f|^2)^{1/2}
// in high mode (shift = s >= 0), and the phi_k low-mode analogue for
// shift = l < 0.  k runs over indices with k+shift in the annulus window.
inline SquareFunctionResult decomposition_square_function(const Grid& g, const SphereKernel& piece,
                                                          const SampledFunction& f, SquareFunctionMode mode,
                                                          int shift, const OctaveWindow& w) {
    if (mode == SquareFunctionMode::high && shift < 0)
        throw std::invalid_argument("decomposition_square_function: high mode needs shift >= 0");
    if (mode == SquareFunctionMode::low && shift >= 0)
        throw std::invalid_argument("decomposition_square_function: low mode needs shift < 0");
    SquareFunctionResult res;
    res.pointwise = SampledFunction(g);
    for (int j = w.j_lo; j <= w.j_hi; ++j) {
        const int k = j - shift;
        SampledFunction u = convolve(f, annulus_kernel(g, piece, j));
        SampledFunction term = mode == SquareFunctionMode::high ? highpass_complement(u, k) : lowpass(u, k);
        for (std::size_t i = 0; i < res.pointwise.values.size(); ++i)
            res.pointwise.values[i] += term.values[i] * term.values[i];
    }
    for (double& x : res.pointwise.values) x = std::sqrt(x);
    res.l2_norm = lp_norm(res.pointwise, 2.0);
    return res;
}

// Two-sided directional integral along the first axis:
//   H^1_I f(x) = sum_{s = p h, r1 < |s| <= r2} f(x - s e_1) / s * h.
inline SampledFunction directional_interval_integral(const SampledFunction& f, double r1, double r2) {
    const Grid& g = f.grid;
    const std::size_t n = g.points_per_axis;
    const double h = g.spacing;
    SampledFunction out(g);
    std::vector<long> offsets;
    std::vector<double> weights;
    for (long p = -static_cast<long>(n) / 2; p < static_cast<long>(n) / 2; ++p) {
        if (p == 0) continue;
        const double s = h * static_cast<double>(p);
        if (std::abs(s) > r1 && std::abs(s) <= r2) {
            offsets.push_back(p);
            weights.push_back(1.0 / static_cast<double>(p));  // h / (p h)
        }
    }
    if (g.dim == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t q = 0; q < offsets.size(); ++q) {
                const std::size_t src = static_cast<std::size_t>(
                    ((static_cast<long>(i) - offsets[q]) % static_cast<long>(n) + static_cast<long>(n)) %
                    static_cast<long>(n));
                acc += f.values[src] * weights[q];
            }
            out.values[i] = acc;
        }
    } else {
        for (std::size_t q = 0; q < offsets.size(); ++q) {
            const double wq = weights[q];
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t src_row = static_cast<std::size_t>(
                    ((static_cast<long>(i) - offsets[q]) % static_cast<long>(n) + static_cast<long>(n)) %
                    static_cast<long>(n));
                const double* src = &f.values[src_row * n];
                double* dst = &out.values[i * n];
                for (std::size_t jcol = 0; jcol < n; ++jcol) dst[jcol] += src[jcol] * wq;
            }
        }
    }
    return out;
}

// Relative L^2 residual between the annulus integral with an odd kernel and
// its rotation-method representation
//   int_{|y| in I} Omega(y')|y|^{-n} f(x-y) dy
//     = 1/2 int_{SO(2)} (R_{sigma^{-1}} H^1_I R_sigma f)(x) Omega(sigma 1) dsigma.
inline double rotation_identity_residual(const SampledFunction& f, const SphereKernel& omega, double r1,
                                         double r2, std::size_t angular_nodes) {
    if (f.grid.dim != 2) throw std::invalid_argument("rotation_identity_residual: requires n = 2");
    if (!(r1 > 0.0 && r1 < r2 && r2 <= f.grid.cutoff_radius()))
        throw std::invalid_argument("rotation_identity_residual: need 0 < r1 < r2 <= R_cut");
    auto [odd, even] = split_odd_even(omega);
    double even_sup = 0.0, omega_sup = 0.0;
    for (std::size_t i = 0; i < omega.values.size(); ++i) {
        even_sup = std::max(even_sup, std::abs(even.values[i]));
        omega_sup = std::max(omega_sup, std::abs(omega.values[i]));
    }
    if (even_sup > 1e-10 * (1.0 + omega_sup))
        throw std::invalid_argument("rotation_identity_residual: kernel has an even component");

    SampledFunction lhs = convolve(f, radial_restriction_kernel(f.grid, omega, r1, r2));

    SampledFunction rhs(f.grid);
    const double haar_weight = kTwoPi / static_cast<double>(angular_nodes);
    for (std::size_t b = 0; b < angular_nodes; ++b) {
        const double beta = kTwoPi * static_cast<double>(b) / static_cast<double>(angular_nodes);
        const double om = omega.eval(beta);
        if (om == 0.0) continue;
        SampledFunction rotated = rotate(f, beta);
        SampledFunction hline = directional_interval_integral(rotated, r1, r2);
        SampledFunction back = rotate(hline, -beta);
        const double c = 0.5 * haar_weight * om;
        for (std::size_t i = 0; i < rhs.values.size(); ++i) rhs.values[i] += c * back.values[i];
    }

    SampledFunction diff = lhs;
    for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= rhs.values[i];
    const double den = lp_norm(lhs, 2.0);
    if (den == 0.0) return lp_norm(diff, 2.0) == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return lp_norm(diff, 2.0) / den;
}

}  // namespace varjump

#endif  // VARJUMP_OPERATORS_HPP
