#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "varjump/nu_fourier.hpp"
#include "varjump/rng.hpp"
#include "varjump/sphere.hpp"

using namespace varjump;

namespace {

SphereKernel sin_kernel(std::size_t nodes) {
    auto k = SphereKernel::from_function(nodes, [](double t) { return std::sin(t); });
    k.cancellation_enforced = true;
    return k;
}

}  // namespace

TEST_CASE("nu_hat vanishes at zero frequency for cancelled kernels") {
    AnnulusMeasure m{sin_kernel(256), 0};
    CHECK(std::abs(nu_hat(m, 0.0, 0.0)) <= 1e-12);
}

TEST_CASE("radial oscillatory integral: asymptotic branch agrees with a test-local rule") {
    // independent composite Simpson oracle, resolving the phase
    auto simpson = [](double a, double b, double c) {
        const int waves = static_cast<int>(std::ceil(std::abs(c) * (b - a))) + 1;
        const int n = 2 * 256 * waves;
        std::complex<double> acc(0.0, 0.0);
        const double h = (b - a) / n;
        for (int i = 0; i <= n; ++i) {
            const double r = a + h * i;
            const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            acc += w * std::polar(1.0, -2.0 * kPi * c * r) / r;
        }
        return acc * (h / 3.0);
    };
    for (double c : {4.0, 5.4, 7.0, 25.0, 300.0}) {
        const auto mine = quad::oscillatory_radial_integral(1.0, 2.0, c);
        const auto ref = simpson(1.0, 2.0, c);
        CHECK(std::abs(mine - ref) <= 1e-10 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("dilation covariance |nu_hat_j(xi)| = |nu_hat_0(2^j xi)|") {
    const SphereKernel k = sin_kernel(256);
    for (int j : {-3, 1, 4}) {
        AnnulusMeasure mj{k, j};
        AnnulusMeasure m0{k, 0};
        for (double base : {0.37, 3.1, 40.0}) {
            const double xi0 = base, xi1 = 0.6 * base;
            const double a = std::abs(nu_hat(mj, xi0, xi1));
            const double b = std::abs(nu_hat(m0, std::exp2(j) * xi0, std::exp2(j) * xi1));
            CHECK(std::abs(a - b) <= 1e-10 * (1.0 + b));
        }
    }
}

TEST_CASE("high-frequency transform of the sine kernel matches a refined oracle") {
    // the angular trapezoid must resolve phase ~ 2 pi r |xi|; 2^18 nodes
    // give ~10 nodes per oscillation at |xi| = 10^3
    AnnulusMeasure base{sin_kernel(1u << 18), 0};
    AnnulusMeasure refined{sin_kernel(1u << 20), 0};
    const double v = std::abs(nu_hat(base, 0.0, 1000.0));
    const double vr = std::abs(nu_hat(refined, 0.0, 1000.0));
    CHECK(std::abs(v - vr) <= 0.005 * vr);
}

TEST_CASE("small-frequency decay slope is +1 for mean-zero kernels") {
    AnnulusMeasure m{sin_kernel(256), 0};
    const DecayProfile prof = decay_profile(m, 0.0, 1e-3, 0, 6, DecayFit::power);
    CHECK(prof.exponent == Catch::Approx(1.0).margin(0.05));
    REQUIRE(prof.table.size() == 7u);
}

TEST_CASE("decay_profile rejects degenerate fits and distant frequencies") {
    AnnulusMeasure m{sin_kernel(256), 0};
    CHECK_THROWS(decay_profile(m, 0.0, 1e-3, 0, 2, DecayFit::power));
    CHECK_THROWS(decay_profile(m, 0.0, 1.0, 19, 25, DecayFit::power));
    // logpower needs |2^k xi| > 1
    CHECK_THROWS(decay_profile(m, 0.0, 1e-3, 0, 4, DecayFit::logpower));
}

TEST_CASE("gs lacunary kernel: cancellation, mass, saturated log decay") {
    // reduced-size variant of the acceptance configuration
    const SphereKernel k = gs_lacunary_kernel(2.0, std::size_t(1) << 22);
    CHECK(std::abs(k.spherical_mean()) * k.sphere_measure() <= 1e-12 * (1.0 + kernel_l1(k)));
    CHECK(kernel_l1(k) < 1.0);

    AnnulusMeasure m{k, 0};
    const DecayProfile prof = decay_profile(m, 1.0, 0.0, 7, 14, DecayFit::logpower, 3);
    CHECK(prof.exponent == Catch::Approx(-3.0).margin(0.4));
}

TEST_CASE("two-level piece obeys the min(R, R^(-1/(3m))) envelope") {
    // Omega_1 of the two-level kernel, on a grid fine enough for R <= 2^10
    const std::size_t nodes = std::size_t(1) << 15;
    std::vector<double> v(nodes, 0.0);
    for (std::size_t mth = 0; mth < nodes; ++mth) {
        const double theta = std::remainder(kTwoPi * static_cast<double>(mth) / static_cast<double>(nodes), kTwoPi);
        if (theta >= -kPi / 4 && theta < kPi / 4) v[mth] = 1.0 / kPi;
        else if (theta >= 3 * kPi / 4 || theta < -3 * kPi / 4) v[mth] = -1.0 / kPi;
    }
    SphereKernel piece = SphereKernel::nodes(std::move(v));
    piece.cancellation_enforced = true;
    AnnulusMeasure m{piece, 0};

    auto shape = [](double r) { return std::min(std::pow(r, -1.0 / 3.0), r); };
    // majorant constant fitted on the coarse grid, then verified on a 4x
    // denser one
    double c_fit = 0.0;
    for (int i = -10 * 2; i <= 10 * 2; ++i) {
        const double r = std::exp2(0.5 * i);
        c_fit = std::max(c_fit, std::abs(nu_hat(m, 0.0, r)) / shape(r));
    }
    double worst = 0.0;
    for (int i = -10 * 8; i <= 10 * 8; ++i) {
        const double r = std::exp2(0.125 * i);
        worst = std::max(worst, std::abs(nu_hat(m, 0.0, r)) / (c_fit * shape(r)));
    }
    CHECK(worst <= 1.05);
}

TEST_CASE("one dimensional averaging decay") {
    // n = 1 closed form |sin(pi xi)/(pi xi)|
    for (double xi : {0.5, 1.0, 2.7, 55.0, 800.0}) {
        const VdcSample s = one_dim_average_decay(1, xi);
        const double closed = std::abs(std::sin(kPi * xi) / (kPi * xi));
        CHECK(std::abs(s.value - closed) <= 1e-10);
    }
    CHECK(one_dim_average_decay(1, 0.5).value == Catch::Approx(2.0 / kPi).epsilon(1e-12));

    // xi -> 0 limit is the total mass 1/n
    for (int n : {1, 2, 3, 5}) {
        CHECK(one_dim_average_decay(n, 1e-9).value == Catch::Approx(1.0 / n).epsilon(1e-6));
    }

    // n = 3: sup of |xi| |mu_hat| over a sweep, stable under refinement
    double sup = 0.0, sup_refined = 0.0;
    for (int i = 0; i <= 48; ++i) {
        const double xi = std::pow(10.0, 3.0 * i / 48.0);
        sup = std::max(sup, one_dim_average_decay(3, xi).scaled);
        sup_refined = std::max(sup_refined, one_dim_average_decay(3, xi, 4).scaled);
    }
    CHECK(std::isfinite(sup));
    CHECK(std::abs(sup - sup_refined) <= 0.01 * sup_refined);

    CHECK_THROWS(one_dim_average_decay(0, 1.0));
}
