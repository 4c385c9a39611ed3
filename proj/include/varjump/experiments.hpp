#ifndef VARJUMP_EXPERIMENTS_HPP
#define VARJUMP_EXPERIMENTS_HPP

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "varjump/config.hpp"
#include "varjump/dyadic.hpp"
#include "varjump/nu_fourier.hpp"
#include "varjump/operators.hpp"
#include "varjump/oracles.hpp"
#include "varjump/parallel.hpp"
#include "varjump/report.hpp"
#include "varjump/rng.hpp"
#include "varjump/scale_family.hpp"

namespace varjump {

namespace detail {

inline std::string fmt(double v) { return format_double(v); }

inline void echo_config(ExperimentReport& r, const ExperimentConfig& cfg) {
    r.info.push_back("seed: " + std::to_string(cfg.seed));
    r.info.push_back("grid: n=" + std::to_string(cfg.grid_dim) + " N=" + std::to_string(cfg.grid_points) +
                     " L=" + fmt(cfg.half_width));
    r.info.push_back("kernel: " + cfg.kernel_spec);
}

// Real band-limited field with unit continuum L^2 norm, resolution
// independent: the same Fourier coefficients synthesized on any grid.
inline SampledFunction band_limited_field(const Grid& g, std::uint64_t seed, int band = 8) {
    Rng rng(seed);
    const int n = static_cast<int>(g.points_per_axis);
    std::vector<std::pair<std::pair<int, int>, fft::cdouble>> coeffs;
    double power = 0.0;
    for (int m0 = -band; m0 <= band; ++m0)
        for (int m1 = -band; m1 <= band; ++m1) {
            if (m0 == 0 && m1 == 0) continue;
            if (g.dim == 1 && m1 != 0) continue;
            const fft::cdouble c(rng.normal(), rng.normal());
            coeffs.push_back({{m0, m1}, c});
            power += std::norm(c);
        }
    // conjugate symmetrization halves independent modes; normalize the
    // resulting continuum L^2 norm on [-L, L)^dim to 1
    const double measure = g.dim == 1 ? 2.0 * g.half_width
                                      : 4.0 * g.half_width * g.half_width;
    const double scale = 1.0 / std::sqrt(0.5 * power * measure);
    std::vector<fft::cdouble> spec(g.size(), fft::cdouble(0, 0));
    for (const auto& [m, c] : coeffs) {
        const int i0 = ((m.first % n) + n) % n;
        const int i1 = ((m.second % n) + n) % n;
        const int j0 = (n - i0) % n, j1 = (n - i1) % n;
        const std::size_t a = g.dim == 1 ? static_cast<std::size_t>(i0)
                                         : static_cast<std::size_t>(i0) * g.points_per_axis + i1;
        const std::size_t b = g.dim == 1 ? static_cast<std::size_t>(j0)
                                         : static_cast<std::size_t>(j0) * g.points_per_axis + j1;
        spec[a] += 0.5 * scale * c * static_cast<double>(g.size());
        spec[b] += 0.5 * scale * std::conj(c) * static_cast<double>(g.size());
    }
    if (g.dim == 1)
        fft::transform(spec, true);
    else
        fft::transform_2d(spec, g.points_per_axis, g.points_per_axis, true);
    SampledFunction out(g);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = spec[i].real();
    return out;
}

}  // namespace detail

// --- criterion 1: DP q-variation vs exhaustive search ----------------------
inline ExperimentReport run_variation_sweep(const ExperimentConfig& cfg) {
    ExperimentReport r;
    r.experiment = "variation-sweep";
    r.columns = {"trial", "len", "q", "dp", "oracle", "abs_diff"};
    detail::echo_config(r, cfg);
    const long trials = cfg.trials > 0 ? cfg.trials : 500;
    const std::vector<double> qs = {1.0, 2.0, 2.5, 3.0, 6.0};
    double worst = 0.0;
    for (long t = 0; t < trials; ++t) {
        Rng rng(derive_seed(cfg.seed, t));
        const std::size_t len = 2 + static_cast<std::size_t>(rng.integer(0, 10));
        const SeriesSample s = random_series(rng, len);
        for (double q : qs) {
            const double dp = vq_norm(s, q);
            const double oracle = oracles::vq_norm_exhaustive(s, q);
            const double diff = std::abs(dp - oracle);
            worst = std::max(worst, diff);
            r.add_row({std::to_string(t), std::to_string(len), detail::fmt(q), detail::fmt(dp),
                       detail::fmt(oracle), detail::fmt(diff)});
        }
    }
    r.verdicts.push_back({"vq_dp_equals_exhaustive_1e-12", worst <= 1e-12, "max |dp - oracle| = " + detail::fmt(worst)});
    return r;
}

// --- criterion 2: greedy jump count vs exhaustive search -------------------
inline ExperimentReport run_jump_sweep(const ExperimentConfig& cfg) {
    ExperimentReport r;
    r.experiment = "jump-sweep";
    r.columns = {"trial", "len", "lambda", "greedy", "oracle"};
    detail::echo_config(r, cfg);
    const long trials = cfg.trials > 0 ? cfg.trials : 500;
    long mismatches = 0;
    for (long t = 0; t < trials; ++t) {
        Rng rng(derive_seed(cfg.seed, t));
        const std::size_t len = 2 + static_cast<std::size_t>(rng.integer(0, 10));
        const SeriesSample s = random_series(rng, len);
        const double lambda = rng.uniform(0.05, 2.5);
        const long greedy = jump_count(s, lambda);
        const long oracle = oracles::jump_count_exhaustive(s, lambda);
        if (greedy != oracle) ++mismatches;
        r.add_row({std::to_string(t), std::to_string(len), detail::fmt(lambda), std::to_string(greedy),
                   std::to_string(oracle)});
    }
    r.verdicts.push_back({"greedy_equals_exhaustive", mismatches == 0, std::to_string(mismatches) + " mismatches"});
    return r;
}

// --- criterion 3: lambda N^{1/q} <= 2^{1+1/q} V_q --------------------------
inline ExperimentReport run_pointwise_check(const ExperimentConfig& cfg) {
    ExperimentReport r;
    r.experiment = "pointwise-check";
    r.columns = {"trial", "lambda", "q", "ratio"};
    detail::echo_config(r, cfg);
    const long trials = cfg.trials > 0 ? cfg.trials : 10000;
    const std::vector<double> qs = cfg.qs;
    struct Best {
        double ratio = 0.0, lambda = 0.0, q = 0.0;
    };
    std::vector<Best> best(trials);
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
        Rng rng(derive_seed(cfg.seed, t));
        const std::size_t len = 2 + static_cast<std::size_t>(rng.integer(0, 38));
        const SeriesSample s = random_series(rng, len);
        for (int li = 0; li < 3; ++li) {
            const double lambda = rng.uniform(0.05, 3.0);
            for (double q : qs) {
                const double ratio = pointwise_control_ratio(s, lambda, q);
                if (ratio > best[t].ratio) best[t] = {ratio, lambda, q};
            }
        }
    });
    double worst = 0.0;
    for (long t = 0; t < trials; ++t) {
        worst = std::max(worst, best[t].ratio);
        r.add_row({std::to_string(t), detail::fmt(best[t].lambda), detail::fmt(best[t].q),
                   detail::fmt(best[t].ratio)});
    }
    r.verdicts.push_back({"eq_1_4_no_violations", worst <= 1.0 + 1e-12, "max ratio = " + detail::fmt(worst)});
    return r;
}

// --- criterion 4: Lemma 2.1 empirical constant -----------------------------
inline ExperimentReport run_jsw_compare(const ExperimentConfig& cfg) {
    ExperimentReport r;
    r.experiment = "jsw-compare";
    r.columns = {"trial", "lambda", "ratio"};
    detail::echo_config(r, cfg);
    const long base_trials = cfg.trials > 0 ? cfg.trials : 10000;
    const long all_trials = 2 * base_trials;
    std::vector<double> ratios(all_trials), lambdas(all_trials);
    parallel_for(static_cast<std::size_t>(all_trials), [&](std::size_t t) {
        Rng rng(derive_seed(cfg.seed, t));
        const ScaleGrid sg = ScaleGrid::make(-2, 1, 3);
        ScaleFamily fam(sg, 1);
        for (std::size_t s = 0; s < sg.size(); ++s) fam.at(0, s) = rng.normal();
        // maximize over a lambda grid per family so the max statistic
        // saturates instead of drifting with the trial count
        double best = 0.0, best_lambda = 0.0;
        for (int li = 0; li < 8; ++li) {
            const double lambda = 0.1 * std::pow(30.0, li / 7.0);
            const double ratio = jsw_comparison_ratio(fam, 0, lambda);
            if (ratio > best) {
                best = ratio;
                best_lambda = lambda;
            }
        }
        lambdas[t] = best_lambda;
        ratios[t] = best;
    });
    double max_base = 0.0, max_all = 0.0;
    for (long t = 0; t < all_trials; ++t) {
        if (t < base_trials) max_base = std::max(max_base, ratios[t]);
        max_all = std::max(max_all, ratios[t]);
        r.add_row({std::to_string(t), detail::fmt(lambdas[t]), detail::fmt(ratios[t])});
    }
    const double growth = max_base > 0.0 ? (max_all - max_base) / max_base : 0.0;
    r.verdicts.push_back({"comparison_max_below_9", max_all <= 9.0, "max ratio = " + detail::fmt(max_all)});
    r.verdicts.push_back(
        {"max_stable_under_doubling", growth < 0.10,
         "max " + detail::fmt(max_base) + " -> " + detail::fmt(max_all) + " (growth " + detail::fmt(growth) + ")"});
    return r;
}

// --- criterion 5: compensated Littlewood-Paley decomposition ---------------
inline ExperimentReport run_lp_decomp_check(const ExperimentConfig& cfg) {
    ExperimentReport r;
    r.experiment = "lp-decomp-check";
    r.columns = {"kernel", "k", "residual"};
    detail::echo_config(r, cfg);
    const Grid g = Grid::make(2, cfg.grid_points, cfg.half_width);
    const OctaveWindow w = annulus_window(g);
    const SampledFunction f = detail::band_limited_field(g, derive_seed(cfg.seed, 1));
    double worst = 0.0;
    for (const std::string spec_name : {std::string("sin"), std::string("twolevel:a=1.5,arc=0.5pi")}) {
        SphereKernel kernel = parse_kernel_spec(spec_name, cfg.kernel_nodes, nullptr);
        auto spec = OperatorSpec::make(OperatorKind::truncated_singular, kernel, g,
                                       ScaleGrid::make(w.j_lo, w.j_hi, 1));
        for (int k = w.j_lo; k <= w.j_hi; ++k) {
            const double res = lp_decomposition_residual(spec, f, k, w);
            worst = std::max(worst, res);
            r.add_row({spec_name, std::to_string(k), detail::fmt(res)});
        }
    }
    r.verdicts.push_back({"identity_residual_below_1e-8", worst <= 1e-8, "max residual = " + detail::fmt(worst)});
    return r;
}

// --- criterion 6: rotation-method identity ---------------------------------
inline ExperimentReport run_rotation_check(const ExperimentConfig& cfg) {
    ExperimentReport r;
    r.experiment = "rotation-check";
    r.columns = {"N", "angular_nodes", "residual"};
    detail::echo_config(r, cfg);
    auto residual_at = [&](std::size_t n_grid, std::size_t nodes) {
        const Grid g = Grid::make(2, n_grid, cfg.half_width);
        SampledFunction f = sample_function(g, [](double x0, double x1) {
            const double dx = x0 - 0.2, dy = x1 + 0.1;
            return std::exp(-(dx * dx + dy * dy) / 0.02);
        });
        SphereKernel kernel = parse_kernel_spec("sin", cfg.kernel_nodes, nullptr);
        return rotation_identity_residual(f, kernel, 0.1, 0.3, nodes);
    };
    const double res1 = residual_at(cfg.grid_points, cfg.rotation_nodes);
    r.add_row({std::to_string(cfg.grid_points), std::to_string(cfg.rotation_nodes), detail::fmt(res1)});
    const double res2 = residual_at(cfg.grid_points * 2, cfg.rotation_nodes * 2);
    r.add_row({std::to_string(cfg.grid_points * 2), std::to_string(cfg.rotation_nodes * 2), detail::fmt(res2)});
    const double halving = res2 / res1;
    r.verdicts.push_back({"residual_below_2_percent", res1 <= 0.02, "residual = " + detail::fmt(res1)});
    // convergence at least as fast as halving; bilinear interpolation is
    // second order on smooth data, so the measured ratio is usually ~0.3
    r.verdicts.push_back({"residual_at_least_halves_under_doubling", halving <= 0.6,
                          "res(2N)/res(N) = " + detail::fmt(halving)});
    return r;
}

// --- criterion 7: averaging sanity M_t(1) = pi ------------------------------
inline ExperimentReport run_averaging_check(const ExperimentConfig& cfg) {
    ExperimentReport r;
    r.experiment = "averaging-check";
    r.columns = {"t", "value", "rel_error", "bound"};
    detail::echo_config(r, cfg);
    const Grid g = Grid::make(2, cfg.grid_points, cfg.half_width);
    const ScaleGrid sg = ScaleGrid::make(cfg.j_min, cfg.j_max, cfg.samples_per_octave);
    SphereKernel one = parse_kernel_spec("one", cfg.kernel_nodes, nullptr);
    auto spec = OperatorSpec::make(OperatorKind::averaging, one, g, sg);
    SampledFunction f(g);
    for (double& v : f.values) v = 1.0;
    bool all_within = true;
    double worst_margin = 0.0;
    for (double t : sg.scales) {
        if (t < 2.0 * g.spacing || t > g.cutoff_radius()) continue;
        SampledFunction out = apply_averaging(spec, f, t);
        const double value = out.values[0];
        const double rel = std::abs(value - kPi) / kPi;
        const double bound = 4.0 * g.spacing / t;
        all_within = all_within && rel <= bound;
        worst_margin = std::max(worst_margin, rel / bound);
        r.add_row({detail::fmt(t), detail::fmt(value), detail::fmt(rel), detail::fmt(bound)});
    }
    r.verdicts.push_back({"disc_area_within_4h_over_t", all_within,
                          "max rel_error/bound = " + detail::fmt(worst_margin)});
    return r;
}

// --- criterion 8: Fourier decay envelopes -----------------------------------
inline ExperimentReport run_decay_fit(const ExperimentConfig& cfg) {
    ExperimentReport r;
    r.experiment = "decay-fit";
    r.columns = {"block", "k", "freq", "value", "envelope"};
    detail::echo_config(r, cfg);

    // (a) small-frequency slope +1 for a mean-zero kernel
    {
        SphereKernel sin_k = parse_kernel_spec("sin", cfg.kernel_nodes, nullptr);
        AnnulusMeasure m{sin_k, 0};
        const DecayProfile prof = decay_profile(m, 0.0, 1e-3, 0, 6, DecayFit::power, 2);
        SvgPlot plot{"small_freq", "|2^k xi|", "|nu_hat|", {}};
        SvgSeries data{"measured", {}, {}}, env{"fit C R^p", {}, {}, true};
        for (const auto& row : prof.table) {
            data.x.push_back(row.freq);
            data.y.push_back(row.value);
            env.x.push_back(row.freq);
            env.y.push_back(std::exp(prof.intercept + prof.exponent * std::log(row.freq)));
            r.add_row({"small-freq", detail::fmt(row.k), detail::fmt(row.freq), detail::fmt(row.value),
                       detail::fmt(env.y.back())});
        }
        plot.series = {data, env};
        r.plots.push_back(plot);
        r.verdicts.push_back({"small_freq_slope_plus_1", std::abs(prof.exponent - 1.0) <= 0.05,
                              "slope = " + detail::fmt(prof.exponent)});
    }

    // (b) G_alpha kernel: log-power slope -(1+alpha) over |2^k xi| in [1e2, 1e5]
    {
        SphereKernel gs = parse_kernel_spec(cfg.kernel_spec.rfind("gs", 0) == 0 ? cfg.kernel_spec : "gs:alpha=2",
                                            cfg.kernel_nodes, nullptr);
        AnnulusMeasure m{gs, 0};
        const DecayProfile prof = decay_profile(m, 1.0, 0.0, 7, 16, DecayFit::logpower, 3);
        SvgPlot plot{"gs_logpower", "|2^k xi|", "|nu_hat|", {}};
        SvgSeries data{"measured", {}, {}}, env{"C (log R)^-3", {}, {}, true};
        for (const auto& row : prof.table) {
            data.x.push_back(row.freq);
            data.y.push_back(row.value);
            env.x.push_back(row.freq);
            env.y.push_back(std::exp(prof.intercept + prof.exponent * std::log(std::log(row.freq))));
            r.add_row({"gs-logpower", detail::fmt(row.k), detail::fmt(row.freq), detail::fmt(row.value),
                       detail::fmt(env.y.back())});
        }
        plot.series = {data, env};
        r.plots.push_back(plot);
        r.verdicts.push_back({"gs_logpower_slope_minus_3", std::abs(prof.exponent + 3.0) <= 0.3,
                              "slope = " + detail::fmt(prof.exponent)});
    }

    // (c) L log L piece: measured |nu_hat| stays under the fitted
    // min(R, R^{-1/(3m)}) majorant within 5% on a 4x denser grid
    {
        SphereKernel piece = omega_decomposition(two_level_kernel(1.5, kPi / 2, std::size_t(1) << 15))
                                 .pieces.front()
                                 .kernel;
        AnnulusMeasure m{piece, 0};
        auto shape = [](double freq) { return std::min(std::pow(freq, -1.0 / 3.0), freq); };
        double c_fit = 0.0;
        for (int i = -20; i <= 20; ++i) {
            const double freq = std::exp2(0.5 * i);
            c_fit = std::max(c_fit, std::abs(nu_hat(m, 0.0, freq)) / shape(freq));
        }
        double worst = 0.0;
        SvgPlot plot{"piece_envelope", "|xi|", "|nu_hat|", {}};
        SvgSeries data{"measured", {}, {}}, env{"C min(R, R^-1/3)", {}, {}, true};
        for (int i = -80; i <= 80; ++i) {
            const double freq = std::exp2(0.125 * i);
            const double value = std::abs(nu_hat(m, 0.0, freq));
            const double envelope = c_fit * shape(freq);
            worst = std::max(worst, value / envelope);
            data.x.push_back(freq);
            data.y.push_back(value);
            env.x.push_back(freq);
            env.y.push_back(envelope);
            r.add_row({"piece-envelope", detail::fmt(0.125 * i), detail::fmt(freq), detail::fmt(value),
                       detail::fmt(envelope)});
        }
        plot.series = {data, env};
        r.plots.push_back(plot);
        r.verdicts.push_back({"piece_under_envelope_5_percent", worst <= 1.05,
                              "max value/envelope = " + detail::fmt(worst)});
    }
    return r;
}

// --- criterion 9: kernel classes and the height-band decomposition ---------
inline ExperimentReport run_kernel_classes(const ExperimentConfig& cfg) {
    ExperimentReport r;
    r.experiment = "kernel-classes";
    r.columns = {"kernel", "L1", "L2", "LlogL", "LlogL_half", "pieces", "recon_err", "iii_ratio"};
    detail::echo_config(r, cfg);
    std::vector<std::pair<std::string, SphereKernel>> corpus;
    for (const std::string s : {std::string("sin"), std::string("cos2"), std::string("twolevel:a=1.5,arc=0.5pi"),
                                std::string("twolevel:a=3,arc=0.25pi"), std::string("twolevel:a=6.5,arc=0.5pi"),
                                std::string("atom:c=0,r=0.25pi")})
        corpus.push_back({s, parse_kernel_spec(s, cfg.kernel_nodes, nullptr)});
    {
        Rng rng(derive_seed(cfg.seed, 99));
        std::vector<double> v(cfg.kernel_nodes);
        for (double& x : v) x = rng.uniform(-8.0, 8.0);
        corpus.push_back({"random8", enforce_cancellation(SphereKernel::nodes(std::move(v))).first});
    }

    bool piece_props = true, omega0_props = true, recon_ok = true;
    double worst_iii = 0.0, worst_l2_const = 0.0;
    for (auto& [name, kernel_raw] : corpus) {
        SphereKernel kernel = enforce_cancellation(kernel_raw).first;
        const KernelDecomposition dec = omega_decomposition(kernel);
        double sup = 0.0;
        for (double v : kernel.values) sup = std::max(sup, std::abs(v));
        double recon_err = 0.0;
        for (std::size_t i = 0; i < kernel.values.size(); ++i) {
            double rec = dec.omega0.values[i];
            for (const auto& p : dec.pieces) rec += p.coefficient * p.kernel.values[i];
            recon_err = std::max(recon_err, std::abs(rec - kernel.values[i]));
        }
        recon_ok = recon_ok && recon_err <= 1e-10 * (1.0 + sup);
        double sum_mc = 0.0;
        for (const auto& p : dec.pieces) {
            const double mean = std::abs(p.kernel.spherical_mean()) * p.kernel.sphere_measure();
            piece_props = piece_props && mean <= 1e-10 && kernel_l1(p.kernel) <= 2.0 + 1e-10;
            worst_l2_const =
                std::max(worst_l2_const, class_functional(p.kernel, KernelClass::Lr, 2.0) / std::exp2(2.0 * p.m));
            sum_mc += p.m * p.coefficient;
        }
        omega0_props = omega0_props &&
                       std::abs(dec.omega0.spherical_mean()) * dec.omega0.sphere_measure() <= 1e-10 &&
                       std::isfinite(class_functional(dec.omega0, KernelClass::Lr, 2.0));
        const double llogl = class_functional(kernel, KernelClass::LlogL);
        const double iii = llogl > 0.0 ? sum_mc / llogl : 0.0;
        worst_iii = std::max(worst_iii, iii);
        r.add_row({name, detail::fmt(class_functional(kernel, KernelClass::L1)),
                   detail::fmt(class_functional(kernel, KernelClass::Lr, 2.0)), detail::fmt(llogl),
                   detail::fmt(class_functional(kernel, KernelClass::LlogLhalf)),
                   std::to_string(dec.pieces.size()), detail::fmt(recon_err), detail::fmt(iii)});
    }
    r.verdicts.push_back({"piece_mean_zero_and_L1_le_2", piece_props, "all pieces within 1e-10"});
    r.verdicts.push_back({"omega0_mean_zero_L2_finite", omega0_props, "within 1e-10"});
    r.verdicts.push_back({"reconstruction_1e-10", recon_ok, "pointwise"});
    r.verdicts.push_back({"piece_L2_le_4_times_2^2m", worst_l2_const <= 4.0,
                          "max ||Omega_m||_2 / 2^{2m} = " + detail::fmt(worst_l2_const)});
    r.verdicts.push_back({"sum_m_cm_le_4_LlogL", worst_iii <= 4.0, "max ratio = " + detail::fmt(worst_iii)});
    return r;
}

// --- criterion 10: vector-valued Calderon-Zygmund decomposition ------------
inline ExperimentReport run_cz_check(const ExperimentConfig& cfg) {
    ExperimentReport r;
    r.experiment = "cz-check";
    r.columns = {"trial", "alpha", "selected", "meas_bound", "offcube_ok", "avg_bound", "good_l2_bound",
                 "atom_mean_max", "bad_mass_ratio", "recon_err"};
    detail::echo_config(r, cfg);
    const long trials = cfg.trials > 0 ? cfg.trials : 100;
    const Grid g = Grid::make(2, 32, 1.0);
    bool all_ok = true;
    double spike_side_ok = 0.0;

    struct Row {
        double alpha, meas_ratio, avg_ratio, good_ratio, atom_mean, bad_ratio, recon;
        bool offcube;
        std::size_t selected;
    };
    std::vector<Row> out(trials);
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
        Rng rng(derive_seed(cfg.seed, t));
        VectorField h;
        h.k_lo = 0;
        for (int kk = 0; kk < 4; ++kk) {
            SampledFunction f(g);
            for (double& v : f.values) v = rng.normal();
            h.components.push_back(std::move(f));
        }
        // height above the global average: the torus analogue of the CZ
        // domain (on R^n the average is zero, so every height qualifies)
        const double global_avg = h.l1_l2_norm() / (4.0 * g.half_width * g.half_width);
        const double alpha = global_avg * rng.uniform(1.05, 3.0);
        const CZResult res = cz_decompose(h, alpha);
        const double l1 = h.l1_l2_norm();

        std::vector<int> cover(g.size(), 0);
        double cube_measure = 0.0;
        for (const CubeRef& q : res.selected) {
            detail::for_each_cell(g, q, [&](std::size_t cell) { ++cover[cell]; });
            const double side = std::exp2(q.level);
            cube_measure += side * side * g.cell_measure();
        }
        bool off_ok = true;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (cover[i] > 1) off_ok = false;  // disjointness
            if (!cover[i] && h.l2_at(i) > alpha + 1e-12) off_ok = false;
        }
        double avg_ratio = 0.0;
        for (const CubeRef& q : res.selected) {
            double acc = 0.0;
            std::size_t cells = 0;
            detail::for_each_cell(g, q, [&](std::size_t cell) {
                acc += h.l2_at(cell);
                ++cells;
            });
            avg_ratio = std::max(avg_ratio, acc / static_cast<double>(cells) / (4.0 * alpha));
        }
        double good_sq = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            double acc = 0.0;
            for (std::size_t kk = 0; kk < h.size(); ++kk) {
                const double v = res.good.components[kk].values[i];
                acc += v * v;
            }
            good_sq += acc;
        }
        good_sq *= g.cell_measure();
        double atom_mean = 0.0, bad_mass = 0.0, recon = 0.0;
        std::vector<SampledFunction> rebuilt = res.good.components;
        for (const auto& [q, atoms] : res.atoms) {
            for (std::size_t kk = 0; kk < atoms.size(); ++kk) {
                double mean = 0.0;
                for (std::size_t i = 0; i < g.size(); ++i) {
                    mean += atoms[kk].values[i];
                    rebuilt[kk].values[i] += atoms[kk].values[i];
                }
                atom_mean = std::max(atom_mean, std::abs(mean * g.cell_measure()));
            }
            for (std::size_t i = 0; i < g.size(); ++i) {
                double acc = 0.0;
                for (const auto& a : atoms) acc += a.values[i] * a.values[i];
                bad_mass += std::sqrt(acc);
            }
        }
        bad_mass *= g.cell_measure();
        for (std::size_t kk = 0; kk < h.size(); ++kk)
            for (std::size_t i = 0; i < g.size(); ++i)
                recon = std::max(recon, std::abs(rebuilt[kk].values[i] - h.components[kk].values[i]));

        out[t] = {alpha,
                  cube_measure / (l1 / alpha),
                  avg_ratio,
                  good_sq / (4.0 * alpha * l1),
                  atom_mean,
                  bad_mass / (2.0 * l1),
                  recon,
                  off_ok,
                  res.selected.size()};
    });
    for (long t = 0; t < trials; ++t) {
        const Row& o = out[t];
        const bool ok = o.meas_ratio <= 1.0 + 1e-12 && o.offcube && o.avg_ratio <= 1.0 + 1e-12 &&
                        o.good_ratio <= 1.0 + 1e-10 && o.atom_mean <= 1e-12 && o.bad_ratio <= 1.0 + 1e-10 &&
                        o.recon <= 1e-12;
        all_ok = all_ok && ok;
        r.add_row({std::to_string(t), detail::fmt(o.alpha), std::to_string(o.selected), detail::fmt(o.meas_ratio),
                   o.offcube ? "1" : "0", detail::fmt(o.avg_ratio), detail::fmt(o.good_ratio),
                   detail::fmt(o.atom_mean), detail::fmt(o.bad_ratio), detail::fmt(o.recon)});
    }

    // spike hand trace on a 16x16 grid
    {
        const Grid gs_ = Grid::make(2, 16, 1.0);
        const double H = 8.0;
        VectorField h;
        h.k_lo = 0;
        h.components.emplace_back(gs_);
        h.components[0].values[0] = H;
        const CZResult res = cz_decompose(h, H / 16.0);
        const bool trace_ok = res.selected.size() == 1 && res.selected[0].level == 1 &&
                              res.selected[0].c0 == 0 && res.selected[0].c1 == 0 &&
                              std::abs(res.good.components[0].values[0] - H / 4) < 1e-13 &&
                              std::abs(res.atoms.at(res.selected[0])[0].values[0] - 3 * H / 4) < 1e-13;
        spike_side_ok = trace_ok ? 1.0 : 0.0;
        r.add_row({"spike", detail::fmt(H / 16.0), std::to_string(res.selected.size()), "-", trace_ok ? "1" : "0",
                   "-", "-", "-", "-", "-"});
    }

    r.verdicts.push_back({"cz_properties_all_trials", all_ok, std::to_string(trials) + " random fields"});
    r.verdicts.push_back({"spike_hand_trace", spike_side_ok == 1.0, "maximal 2-cell cube, g = H/4, b = 3H/4"});
    return r;
}

// --- criterion 11: stability proxy across grid refinement ------------------
inline ExperimentReport run_martingale_check(const ExperimentConfig& cfg) {
    ExperimentReport r;
    r.experiment = "martingale-check";
    r.columns = {"N", "operator", "functional", "max_ratio"};
    detail::echo_config(r, cfg);

    const std::vector<std::string> kernel_specs = {"sin", "atom:c=0,r=0.25pi", "twolevel:a=1.5,arc=0.5pi"};
    const std::vector<std::uint64_t> field_seeds = {11, 12, 13};
    const double lambda = 0.25, q = 3.0;
    const ScaleGrid sg = ScaleGrid::make(-4, -2, 3);

    auto corpus_max = [&](std::size_t n_grid, OperatorKind kind, bool jump_functional) {
        const Grid g = Grid::make(2, n_grid, cfg.half_width);
        double worst = 0.0;
        for (const auto& spec_name : kernel_specs) {
            SphereKernel kernel = parse_kernel_spec(spec_name, cfg.kernel_nodes, nullptr);
            if (kind == OperatorKind::truncated_singular) kernel = enforce_cancellation(kernel).first;
            auto spec = OperatorSpec::make(kind, kernel, g, sg);
            for (std::uint64_t fs : field_seeds) {
                const SampledFunction f = detail::band_limited_field(g, derive_seed(cfg.seed, fs));
                const ScaleFamily fam = family_apply(spec, f);
                SampledFunction pointwise(g);
                std::vector<double> series(fam.num_scales());
                for (std::size_t x = 0; x < fam.point_count; ++x) {
                    for (std::size_t s = 0; s < fam.num_scales(); ++s) series[s] = fam.at(x, s);
                    const SeriesSample ss(fam.scale_grid.scales, series);
                    pointwise.values[x] = jump_functional
                                              ? lambda * std::sqrt(static_cast<double>(jump_count(ss, lambda)))
                                              : vq_norm(ss, q);
                }
                worst = std::max(worst, lp_norm(pointwise, 2.0) / lp_norm(f, 2.0));
            }
        }
        return worst;
    };

    bool stable = true;
    for (OperatorKind kind : {OperatorKind::truncated_singular, OperatorKind::averaging}) {
        const std::string op_name = kind == OperatorKind::truncated_singular ? "T" : "M";
        for (bool jumpf : {true, false}) {
            const std::string fn_name = jumpf ? "lambda_sqrt_N" : "V3";
            double prev = 0.0;
            for (std::size_t n_grid : {64u, 128u, 256u}) {
                const double value = corpus_max(n_grid, kind, jumpf);
                r.add_row({std::to_string(n_grid), op_name, fn_name, detail::fmt(value)});
                if (prev > 0.0 && value > 1.10 * prev) stable = false;
                prev = value;
            }
        }
    }
    r.verdicts.push_back({"operator_ratios_grow_below_10_percent", stable, "64 -> 128 -> 256 refinement"});

    // martingale jump ratios, reported alongside
    {
        const Grid g = Grid::make(2, 64, 1.0);
        Rng rng(derive_seed(cfg.seed, 77));
        SampledFunction f(g);
        for (double& v : f.values) v = rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
        for (double p : cfg.ps) {
            const double ratio = martingale_jump_ratio(f, 0.5, p);
            r.add_row({"64", "martingale", "p=" + detail::fmt(p), detail::fmt(ratio)});
        }
    }
    return r;
}

// --- criterion 12: Van der Corput decay of the 1-d averaging measure --------
inline ExperimentReport run_vdc_check(const ExperimentConfig& cfg) {
    ExperimentReport r;
    r.experiment = "vdc-check";
    r.columns = {"n", "xi", "value", "xi_times_value"};
    detail::echo_config(r, cfg);
    double closed_err = 0.0;
    bool sup_ok = true;
    for (int n : {1, 2, 3}) {
        double sup = 0.0, sup_refined = 0.0;
        for (int i = 0; i <= 64; ++i) {
            const double xi = std::pow(10.0, 3.0 * i / 64.0);
            const VdcSample s = one_dim_average_decay(n, xi);
            r.add_row({std::to_string(n), detail::fmt(xi), detail::fmt(s.value), detail::fmt(s.scaled)});
            sup = std::max(sup, s.scaled);
            if (n == 1) closed_err = std::max(closed_err, std::abs(s.value - std::abs(std::sin(kPi * xi) / (kPi * xi))));
            if (n >= 2) sup_refined = std::max(sup_refined, one_dim_average_decay(n, xi, 4).scaled);
        }
        if (n >= 2) sup_ok = sup_ok && std::isfinite(sup) && std::abs(sup - sup_refined) <= 0.01 * sup_refined;
    }
    r.verdicts.push_back({"n1_matches_closed_form_1e-10", closed_err <= 1e-10, "max diff = " + detail::fmt(closed_err)});
    r.verdicts.push_back({"sup_scaled_stable_under_refinement", sup_ok, "n = 2, 3 within 1%"});
    return r;
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport r;
    if (cfg.experiment == "variation-sweep") r = run_variation_sweep(cfg);
    else if (cfg.experiment == "jump-sweep") r = run_jump_sweep(cfg);
    else if (cfg.experiment == "pointwise-check") r = run_pointwise_check(cfg);
    else if (cfg.experiment == "jsw-compare") r = run_jsw_compare(cfg);
    else if (cfg.experiment == "lp-decomp-check") r = run_lp_decomp_check(cfg);
    else if (cfg.experiment == "rotation-check") r = run_rotation_check(cfg);
    else if (cfg.experiment == "averaging-check") r = run_averaging_check(cfg);
    else if (cfg.experiment == "decay-fit") r = run_decay_fit(cfg);
    else if (cfg.experiment == "kernel-classes") r = run_kernel_classes(cfg);
    else if (cfg.experiment == "cz-check") r = run_cz_check(cfg);
    else if (cfg.experiment == "martingale-check") r = run_martingale_check(cfg);
    else if (cfg.experiment == "vdc-check") r = run_vdc_check(cfg);
    else throw std::invalid_argument("unknown experiment '" + cfg.experiment + "'");
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace varjump

#endif  // VARJUMP_EXPERIMENTS_HPP
