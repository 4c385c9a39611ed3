#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "varjump/littlewood_paley.hpp"
#include "varjump/operators.hpp"
#include "varjump/rng.hpp"

using namespace varjump;

namespace {

SphereKernel sin_kernel(std::size_t nodes = 256) {
    auto k = SphereKernel::from_function(nodes, [](double t) { return std::sin(t); });
    k.cancellation_enforced = true;
    return k;
}

SampledFunction band_limited(const Grid& g, std::uint64_t seed, int band = 8) {
    Rng rng(seed);
    const std::size_t n = g.points_per_axis;
    std::vector<fft::cdouble> spec(g.size(), fft::cdouble(0, 0));
    for (int m0 = -band; m0 <= band; ++m0)
        for (int m1 = -band; m1 <= band; ++m1) {
            if (m0 == 0 && m1 == 0) continue;
            const std::size_t i0 = static_cast<std::size_t>((m0 + static_cast<int>(n)) % static_cast<int>(n));
            const std::size_t i1 = static_cast<std::size_t>((m1 + static_cast<int>(n)) % static_cast<int>(n));
            spec[i0 * n + i1] = fft::cdouble(rng.normal(), rng.normal());
        }
    // enforce a real field: average with the reflected conjugate
    SampledFunction out(g);
    std::vector<fft::cdouble> sym(g.size());
    for (std::size_t i0 = 0; i0 < n; ++i0)
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            const std::size_t j0 = (n - i0) % n, j1 = (n - i1) % n;
            sym[i0 * n + i1] = 0.5 * (spec[i0 * n + i1] + std::conj(spec[j0 * n + j1]));
        }
    fft::transform_2d(sym, n, n, true);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = sym[i].real();
    return out;
}

OperatorSpec truncated_spec(const Grid& g, SphereKernel k) {
    return OperatorSpec::make(OperatorKind::truncated_singular, std::move(k), g,
                              ScaleGrid::make(-5, -2, 2));
}

}  // namespace

TEST_CASE("operator spec validation") {
    const Grid g1 = Grid::make(1, 64, 1.0);
    const Grid g2 = Grid::make(2, 64, 1.0);
    const ScaleGrid sg = ScaleGrid::make(-3, -2, 1);
    // hilbert_1d pins Omega(+-1) = +-1/pi and n = 1
    CHECK_THROWS(OperatorSpec::make(OperatorKind::hilbert_1d, SphereKernel::pair(1.0, -1.0), g1, sg));
    CHECK_THROWS(OperatorSpec::make(OperatorKind::hilbert_1d, OperatorSpec::hilbert_kernel(), g2, sg));
    // truncated singular integrals need a cancelled kernel
    auto uncancelled = SphereKernel::from_function(64, [](double) { return 1.0; });
    CHECK_THROWS(OperatorSpec::make(OperatorKind::truncated_singular, uncancelled, g2, sg));
    // kernel/grid dimension mismatch
    CHECK_THROWS(OperatorSpec::make(OperatorKind::averaging, uncancelled, g1, sg));
}

TEST_CASE("truncation beyond the cutoff yields zero") {
    const Grid g = Grid::make(2, 64, 1.0);
    auto spec = truncated_spec(g, sin_kernel());
    SampledFunction f = band_limited(g, 1);
    SampledFunction out = apply_truncated(spec, f, g.cutoff_radius());
    CHECK(lp_norm(out, std::numeric_limits<double>::infinity()) == 0.0);
    CHECK_THROWS(apply_truncated(spec, f, 0.0));
}

TEST_CASE("odd kernel kills an even function at the origin") {
    const Grid g = Grid::make(2, 128, 1.0);
    auto spec = truncated_spec(g, sin_kernel());
    SampledFunction f = sample_function(g, [](double x0, double x1) {
        return std::exp(-(x0 * x0 + x1 * x1) / 0.05);
    });
    SampledFunction out = apply_truncated(spec, f, 4.0 * g.spacing);
    const std::size_t origin = (g.points_per_axis / 2) * g.points_per_axis + g.points_per_axis / 2;
    const double scale = lp_norm(out, std::numeric_limits<double>::infinity());
    CHECK(std::abs(out.values[origin]) <= 1e-12 * (1.0 + scale));
}

TEST_CASE("1-d truncated Hilbert transform of an indicator matches the log antiderivative") {
    const Grid g = Grid::make(1, 512, 1.0);
    auto spec = OperatorSpec::make(OperatorKind::hilbert_1d, OperatorSpec::hilbert_kernel(), g,
                                   ScaleGrid::make(-4, -2, 1));
    SampledFunction f = sample_function(g, [](double x, double) {
        return (x >= -0.25 && x <= 0.25) ? 1.0 : 0.0;
    });
    SampledFunction out = apply_truncated(spec, f, 0.1);
    const std::size_t idx = static_cast<std::size_t>((0.5 + 1.0) / g.spacing);  // x = 0.5
    // (1/pi) int_{y in [0.25, 0.5]} dy/y = ln(2)/pi
    CHECK(out.values[idx] == Catch::Approx(std::log(2.0) / kPi).margin(2.0 * g.spacing));
}

TEST_CASE("averaging operator sanity") {
    const Grid g = Grid::make(2, 128, 1.0);
    auto one = SphereKernel::from_function(64, [](double) { return 1.0; });
    auto spec = OperatorSpec::make(OperatorKind::averaging, one, g, ScaleGrid::make(-4, -2, 2));
    SampledFunction f(g);
    for (double& v : f.values) v = 1.0;
    for (double t : spec.scale_grid.scales) {
        SampledFunction out = apply_averaging(spec, f, t);
        CHECK(std::abs(out.values[0] - kPi) <= kPi * 4.0 * g.spacing / t);
    }
    CHECK_THROWS(apply_averaging(spec, f, 0.5 * g.spacing));

    // mean-zero kernel on a constant function
    auto spec_sin = OperatorSpec::make(OperatorKind::averaging, sin_kernel(64), g, spec.scale_grid);
    SampledFunction out = apply_averaging(spec_sin, f, 0.25);
    CHECK(lp_norm(out, std::numeric_limits<double>::infinity()) <= 4.0 * g.spacing / 0.25);

    // n = 1, odd integrand at the center
    const Grid g1 = Grid::make(1, 256, 1.0);
    auto one1 = SphereKernel::pair(1.0, 1.0);
    auto spec1 = OperatorSpec::make(OperatorKind::averaging, one1, g1, ScaleGrid::make(-3, -2, 1));
    SampledFunction lin = sample_function(g1, [](double x, double) { return x; });
    SampledFunction avg = apply_averaging(spec1, lin, 0.25);
    CHECK(std::abs(avg.values[g1.points_per_axis / 2]) < 1e-13);
}

TEST_CASE("family application is per-scale and linear") {
    const Grid g = Grid::make(2, 64, 1.0);
    auto spec = truncated_spec(g, sin_kernel());
    SampledFunction zero(g);
    ScaleFamily fam0 = family_apply(spec, zero);
    for (double v : fam0.data) CHECK(v == 0.0);

    SampledFunction f = band_limited(g, 2);
    SampledFunction f2 = band_limited(g, 3);
    const double a = 1.3, b = -0.7;
    SampledFunction combo(g);
    for (std::size_t i = 0; i < combo.values.size(); ++i) combo.values[i] = a * f.values[i] + b * f2.values[i];
    ScaleFamily fa = family_apply(spec, f), fb = family_apply(spec, f2), fc = family_apply(spec, combo);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < fc.data.size(); ++i) {
        err = std::max(err, std::abs(fc.data[i] - (a * fa.data[i] + b * fb.data[i])));
        scale = std::max(scale, std::abs(fc.data[i]));
    }
    CHECK(err <= 1e-10 * (1.0 + scale));

    // all scales beyond the cutoff
    auto far = OperatorSpec::make(OperatorKind::truncated_singular, sin_kernel(), g, ScaleGrid::make(0, 1, 1));
    ScaleFamily famf = family_apply(far, f);
    for (double v : famf.data) CHECK(v == 0.0);
}

TEST_CASE("telescoping: T_{2^j} - T_{2^{j+1}} equals the annulus convolution") {
    const Grid g = Grid::make(2, 128, 1.0);
    auto spec = truncated_spec(g, sin_kernel());
    SampledFunction f = band_limited(g, 4);
    const OctaveWindow w = annulus_window(g);
    for (int j = w.j_lo; j < w.j_hi; ++j) {
        SampledFunction lhs = apply_truncated(spec, f, std::exp2(j));
        SampledFunction rhs = apply_truncated(spec, f, std::exp2(j + 1));
        SampledFunction nu = convolve(f, annulus_kernel(g, spec.kernel, j));
        double err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < lhs.values.size(); ++i) {
            err = std::max(err, std::abs(lhs.values[i] - rhs.values[i] - nu.values[i]));
            scale = std::max(scale, std::abs(lhs.values[i]));
        }
        CHECK(err <= 1e-10 * (1.0 + scale));
    }
}

TEST_CASE("smoother plateau and support are exact on the discrete frequency grid") {
    const Grid g = Grid::make(2, 64, 1.0);
    for (int k : {-5, -4, -3, -2}) {
        for (std::size_t bin = 0; bin < g.size(); ++bin) {
            const double freq = bin_frequency_norm(g, bin);
            const double value = LittlewoodPaleySmoother::level(freq, k);
            if (freq <= std::exp2(1 - k)) CHECK(value == 1.0);
            if (freq > std::exp2(2 - k)) CHECK(value == 0.0);
            CHECK(value >= 0.0);
            CHECK(value <= 1.0);
        }
    }
}

TEST_CASE("compensated decomposition identity holds to FFT round-off") {
    const Grid g = Grid::make(2, 256, 1.0);
    auto spec = truncated_spec(g, sin_kernel());
    const OctaveWindow w = annulus_window(g);

    SampledFunction zero(g);
    CHECK(lp_decomposition_residual(spec, zero, w.j_lo, w) == 0.0);

    SampledFunction f = band_limited(g, 5);
    for (int k = w.j_lo; k <= w.j_hi; ++k) {
        CHECK(lp_decomposition_residual(spec, f, k, w) <= 1e-8);
    }
    CHECK_THROWS(lp_decomposition_residual(spec, f, w.j_lo - 1, w));

    // controlled omission: excluding the outer octave leaves a visible residual
    OctaveWindow small = w;
    small.j_hi = w.j_hi - 1;
    const double flagged = lp_decomposition_residual(spec, f, small.j_lo, small);
    INFO("window-omission residual = " << flagged);
    CHECK(std::isfinite(flagged));
}

TEST_CASE("square functions vanish on zero input and decay across shifts") {
    const Grid g = Grid::make(2, 128, 1.0);
    const OctaveWindow w = annulus_window(g);
    auto piece = sin_kernel();

    SampledFunction zero(g);
    auto rz = decomposition_square_function(g, piece, zero, SquareFunctionMode::high, 0, w);
    CHECK(rz.l2_norm == 0.0);

    SampledFunction f = band_limited(g, 6);
    const double fn = lp_norm(f, 2.0);
    double prev = std::numeric_limits<double>::infinity();
    for (int s : {0, 2, 4, 8}) {
        auto r = decomposition_square_function(g, piece, f, SquareFunctionMode::high, s, w);
        CHECK(r.l2_norm / fn <= prev + 1e-12);
        prev = r.l2_norm / fn;
    }

    // low mode wants full-spectrum input; band-limited f never sees the
    // plateau truncation that drives the 2^l decay
    Rng rng(99);
    SampledFunction noise(g);
    for (double& v : noise.values) v = rng.normal();
    const double nn = lp_norm(noise, 2.0);
    for (int l : {-1, -3, -5}) {
        auto r = decomposition_square_function(g, piece, noise, SquareFunctionMode::low, l, w);
        // ||G_l f||_2 <= C 2^l ||f||_2; C frozen from the corpus sweep
        CHECK(r.l2_norm / nn <= 6.0 * std::exp2(l));
    }

    CHECK_THROWS(decomposition_square_function(g, piece, f, SquareFunctionMode::high, -1, w));
    CHECK_THROWS(decomposition_square_function(g, piece, f, SquareFunctionMode::low, 0, w));
}

TEST_CASE("rotation-method identity for an odd kernel") {
    const Grid g = Grid::make(2, 128, 1.0);
    SampledFunction f = sample_function(g, [](double x0, double x1) {
        const double dx = x0 - 0.2, dy = x1 + 0.1;
        return std::exp(-(dx * dx + dy * dy) / 0.02);
    });

    auto zero_kernel = SphereKernel::from_function(64, [](double) { return 0.0; });
    CHECK(rotation_identity_residual(f, zero_kernel, 0.1, 0.3, 64) == 0.0);

    SampledFunction zf(g);
    CHECK(rotation_identity_residual(zf, sin_kernel(), 0.1, 0.3, 64) == 0.0);

    const double res = rotation_identity_residual(f, sin_kernel(), 0.1, 0.3, 256);
    INFO("rotation identity residual at 128^2/256 nodes = " << res);
    CHECK(res <= 0.04);

    auto even = SphereKernel::from_function(64, [](double t) { return std::cos(2 * t); });
    CHECK_THROWS(rotation_identity_residual(f, even, 0.1, 0.3, 64));
}
