#ifndef VARJUMP_NU_FOURIER_HPP
#define VARJUMP_NU_FOURIER_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "varjump/sphere.hpp"

namespace varjump {

// Annulus measure: density Omega(y')/|y|^n on the octave 2^j < |y| <= 2^{j+1}
// of the continuum, used for decay profiling independently of any spatial
// grid.  piece_m tags the Omega_m pieces of the kernel decomposition.
struct AnnulusMeasure {
    SphereKernel kernel;
    int octave = 0;
    int piece_m = -1;
};

namespace quad {

// 32-point Gauss-Legendre nodes/weights on [-1, 1].
inline const std::array<double, 32>& gl32_nodes() {
    static const std::array<double, 32> x = {
        -0.9972638618494816, -0.9856115115452684, -0.9647622555875064, -0.9349060759377397,
        -0.8963211557660521, -0.8493676137325700, -0.7944837959679424, -0.7321821187402897,
        -0.6630442669302152, -0.5877157572407623, -0.5068999089322294, -0.4213512761306353,
        -0.3318686022821277, -0.2392873622521371, -0.1444719615827965, -0.0483076656877383,
        0.0483076656877383,  0.1444719615827965,  0.2392873622521371,  0.3318686022821277,
        0.4213512761306353,  0.5068999089322294,  0.5877157572407623,  0.6630442669302152,
        0.7321821187402897,  0.7944837959679424,  0.8493676137325700,  0.8963211557660521,
        0.9349060759377397,  0.9647622555875064,  0.9856115115452684,  0.9972638618494816};
    return x;
}

inline const std::array<double, 32>& gl32_weights() {
    static const std::array<double, 32> w = {
        0.0070186100094701, 0.0162743947309057, 0.0253920653092621, 0.0342738629130214,
        0.0428358980222267, 0.0509980592623762, 0.0586840934785355, 0.0658222227763618,
        0.0723457941088485, 0.0781938957870703, 0.0833119242269467, 0.0876520930044038,
        0.0911738786957639, 0.0938443990808046, 0.0956387200792749, 0.0965400885147278,
        0.0965400885147278, 0.0956387200792749, 0.0938443990808046, 0.0911738786957639,
        0.0876520930044038, 0.0833119242269467, 0.0781938957870703, 0.0723457941088485,
        0.0658222227763618, 0.0586840934785355, 0.0509980592623762, 0.0428358980222267,
        0.0342738629130214, 0.0253920653092621, 0.0162743947309057, 0.0070186100094701};
    return w;
}

// int_a^b exp(-2 pi i c r) r^{-power} dr.  Composite Gauss-Legendre where the
// phase is resolvable; otherwise the integration-by-parts expansion, whose
// terms shrink like n!/(2 pi |c| a)^n.  The crossover is validated against
// the other branch in the tests.
inline std::complex<double> oscillatory_radial_integral(double a, double b, double c, int power = 1) {
    const double omega = 2.0 * kPi * c;
    if (std::abs(omega) * a >= 32.0) {
        // J_n = [r^{-n} e^{-i w r}/(-i w)]_a^b - (n / (i w)) J_{n+1}
        const std::complex<double> iomega(0.0, omega);
        std::complex<double> acc(0.0, 0.0);
        std::complex<double> factor(1.0, 0.0);
        const std::complex<double> ea = std::polar(1.0, -omega * a);
        const std::complex<double> eb = std::polar(1.0, -omega * b);
        int n = power;
        double prev_tail = std::numeric_limits<double>::infinity();
        for (int iter = 0; iter < 40; ++iter) {
            const std::complex<double> boundary =
                (eb * std::pow(b, -n) - ea * std::pow(a, -n)) / (-iomega);
            acc += factor * boundary;
            factor *= -static_cast<double>(n) / iomega;
            ++n;
            // asymptotic series: stop at the smallest term
            const double tail = std::abs(factor) * std::pow(a, -n) * (b - a);
            if (tail < 1e-18 * (std::abs(acc) + 1e-300) || tail > prev_tail) break;
            prev_tail = tail;
        }
        return acc;
    }
    const int panels = std::max(8, static_cast<int>(std::ceil(4.0 * std::abs(c) * (b - a))));
    const auto& xs = gl32_nodes();
    const auto& ws = gl32_weights();
    std::complex<double> acc(0.0, 0.0);
    for (int p = 0; p < panels; ++p) {
        const double pa = a + (b - a) * p / panels;
        const double pb = a + (b - a) * (p + 1) / panels;
        const double mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
        for (int q = 0; q < 32; ++q) {
            const double r = mid + half * xs[q];
            acc += ws[q] * half * std::polar(1.0, -omega * r) * std::pow(r, -power);
        }
    }
    return acc;
}

}  // namespace quad

// Fourier transform of the annulus measure at frequency xi, by radial
// oscillatory quadrature times the angular trapezoid rule on the kernel node
// grid.  Nodes where Omega vanishes are skipped.
inline std::complex<double> nu_hat(const AnnulusMeasure& m, double xi0, double xi1 = 0.0) {
    if (!std::isfinite(xi0) || !std::isfinite(xi1)) throw std::invalid_argument("nu_hat: non-finite frequency");
    const double a = std::exp2(m.octave);
    const double b = std::exp2(m.octave + 1);
    std::complex<double> acc(0.0, 0.0);
    if (m.kernel.dim == 1) {
        acc += m.kernel.values[0] * quad::oscillatory_radial_integral(a, b, xi0);
        acc += m.kernel.values[1] * quad::oscillatory_radial_integral(a, b, -xi0);
        return acc;
    }
    const std::size_t nodes = m.kernel.node_count();
    const double w = m.kernel.node_weight();
    for (std::size_t i = 0; i < nodes; ++i) {
        const double v = m.kernel.values[i];
        if (v == 0.0) continue;
        const double theta = m.kernel.node_angle(i);
        const double c = std::cos(theta) * xi0 + std::sin(theta) * xi1;
        acc += v * w * quad::oscillatory_radial_integral(a, b, c);
    }
    return acc;
}

enum class DecayFit { power, logpower };

struct DecayTableRow {
    double k = 0.0;      // octave index (fractional when oversampled)
    double freq = 0.0;   // |2^k xi|
    double value = 0.0;  // |nu_hat(2^k xi)|
};

struct DecayProfile {
    double exponent = 0.0;
    double intercept = 0.0;   // fitted log-value at x = 0
    double residual = 0.0;    // rms residual of the fit in log space
    std::vector<DecayTableRow> table;
};

// Samples |nu_hat(2^k xi)| along a ray, k stepping by 1/samples_per_octave
// octaves, and fits
//   power:    log|nu_hat| against log|2^k xi|
//   logpower: log|nu_hat| against log log|2^k xi|   (needs |2^k xi| > 1)
inline DecayProfile decay_profile(const AnnulusMeasure& m, double xi0, double xi1, int k_lo, int k_hi,
                                  DecayFit fit, int samples_per_octave = 1) {
    if (samples_per_octave < 1) throw std::invalid_argument("decay_profile: samples_per_octave >= 1");
    DecayProfile prof;
    std::vector<double> xs, ys;
    for (int i = k_lo * samples_per_octave; i <= k_hi * samples_per_octave; ++i) {
        const double k = static_cast<double>(i) / samples_per_octave;
        const double scale = std::exp2(k);
        const double freq = scale * std::hypot(xi0, xi1);
        if (freq > 1e6) throw std::invalid_argument("decay_profile: frequency beyond quadrature validity");
        const double value = std::abs(nu_hat(m, scale * xi0, scale * xi1));
        prof.table.push_back({k, freq, value});
        if (!(value > 0.0) || !std::isfinite(value)) continue;
        if (fit == DecayFit::logpower && !(std::log(freq) > 0.0)) continue;
        xs.push_back(fit == DecayFit::power ? std::log(freq) : std::log(std::log(freq)));
        ys.push_back(std::log(value));
    }
    const std::size_t n = xs.size();
    if (n < 4) throw std::invalid_argument("decay_profile: fewer than 4 usable points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    prof.exponent = (n * sxy - sx * sy) / denom;
    prof.intercept = (sy - prof.exponent * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ys[i] - (prof.intercept + prof.exponent * xs[i]);
        rss += e * e;
    }
    prof.residual = std::sqrt(rss / n);
    return prof;
}

struct VdcSample {
    double value = 0.0;        // |mu_hat(xi)|
    double scaled = 0.0;       // |xi| * value
};

// |int_0^1 exp(-2 pi i r xi) r^{n-1} dr| and the Van der Corput scaling
// |xi| * value.  Composite Gauss-Legendre with panels tracking the phase;
// `refine` multiplies the panel count for refinement studies.
inline VdcSample one_dim_average_decay(int n, double xi, int refine = 1) {
    if (n < 1) throw std::invalid_argument("one_dim_average_decay: n must be >= 1");
    const auto& xs = quad::gl32_nodes();
    const auto& ws = quad::gl32_weights();
    const int panels = refine * std::max(4, static_cast<int>(std::ceil(std::abs(xi))));
    std::complex<double> acc(0.0, 0.0);
    for (int p = 0; p < panels; ++p) {
        const double a = static_cast<double>(p) / panels;
        const double b = static_cast<double>(p + 1) / panels;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int q = 0; q < 32; ++q) {
            const double r = mid + half * xs[q];
            acc += ws[q] * half * std::polar(1.0, -2.0 * kPi * r * xi) * std::pow(r, n - 1);
        }
    }
    VdcSample s;
    s.value = std::abs(acc);
    s.scaled = std::abs(xi) * s.value;
    return s;
}

}  // namespace varjump

#endif  // VARJUMP_NU_FOURIER_HPP
