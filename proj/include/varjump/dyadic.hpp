#ifndef VARJUMP_DYADIC_HPP
#define VARJUMP_DYADIC_HPP

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include "varjump/grid.hpp"
#include "varjump/littlewood_paley.hpp"
#include "varjump/series.hpp"

namespace varjump {

// Dyadic level: cubes of side 2^level grid cells, half-open index intervals
// [m 2^level, (m+1) 2^level) per axis.
struct DyadicLevel {
    int level = 0;

    static DyadicLevel make(const Grid& g, int level) {
        if (level < 0 || (g.points_per_axis >> level) == 0 ||
            (static_cast<std::size_t>(1) << level) > g.points_per_axis)
            throw std::invalid_argument("DyadicLevel: level exceeds grid");
        return DyadicLevel{level};
    }

    std::size_t cubes_per_axis(const Grid& g) const { return g.points_per_axis >> level; }
};

inline int top_level(const Grid& g) {
    int l = 0;
    while ((g.points_per_axis >> l) > 1) ++l;
    return l;
}

// Cube averages broadcast back to cells.  E_0 is the identity; E_l E_m =
// E_max(l,m).
inline SampledFunction cond_expectation(const SampledFunction& f, int level) {
    const DyadicLevel dl = DyadicLevel::make(f.grid, level);
    if (level == 0) return f;
    const std::size_t n = f.grid.points_per_axis;
    const std::size_t side = static_cast<std::size_t>(1) << level;
    SampledFunction out(f.grid);
    if (f.grid.dim == 1) {
        for (std::size_t c = 0; c < dl.cubes_per_axis(f.grid); ++c) {
            double acc = 0.0;
            for (std::size_t i = 0; i < side; ++i) acc += f.values[c * side + i];
            acc /= static_cast<double>(side);
            for (std::size_t i = 0; i < side; ++i) out.values[c * side + i] = acc;
        }
    } else {
        const std::size_t cubes = dl.cubes_per_axis(f.grid);
        for (std::size_t c0 = 0; c0 < cubes; ++c0)
            for (std::size_t c1 = 0; c1 < cubes; ++c1) {
                double acc = 0.0;
                for (std::size_t i = 0; i < side; ++i)
                    for (std::size_t j = 0; j < side; ++j)
                        acc += f.values[(c0 * side + i) * n + c1 * side + j];
                acc /= static_cast<double>(side * side);
                for (std::size_t i = 0; i < side; ++i)
                    for (std::size_t j = 0; j < side; ++j)
                        out.values[(c0 * side + i) * n + c1 * side + j] = acc;
            }
    }
    return out;
}

// D_l f = E_l f - E_{l-1} f.  Telescoping with the global mean retained:
// E_top f + sum_{l=1}^{top} (-D_l f) = f.
inline SampledFunction martingale_diff(const SampledFunction& f, int level) {
    if (level < 1) throw std::invalid_argument("martingale_diff: level must be >= 1");
    SampledFunction fine = cond_expectation(f, level - 1);
    SampledFunction coarse = cond_expectation(f, level);
    for (std::size_t i = 0; i < coarse.values.size(); ++i) coarse.values[i] -= fine.values[i];
    return coarse;
}

// Level <-> smoothing calibration: E_l (cube side 2^l h) is paired with the
// phi_k whose plateau covers frequencies up to (2^l h)^{-1}, i.e. k(l) =
// 1 + l + floor(log2 h).  Exact when h is a power of two.
inline int smoother_level_for(const Grid& g, int level) {
    return 1 + level + static_cast<int>(std::floor(std::log2(g.spacing) + 1e-12));
}

// S f = (sum_{l in levels} |phi_{k(l)} * f - E_l f|^2)^{1/2}.
inline SampledFunction phi_minus_e_square_function(const SampledFunction& f, const std::vector<int>& levels) {
    SampledFunction acc(f.grid);
    for (int level : levels) {
        DyadicLevel::make(f.grid, level);  // validates the window
        SampledFunction low = lowpass(f, smoother_level_for(f.grid, level));
        SampledFunction e = cond_expectation(f, level);
        for (std::size_t i = 0; i < acc.values.size(); ++i) {
            const double d = low.values[i] - e.values[i];
            acc.values[i] += d * d;
        }
    }
    for (double& x : acc.values) x = std::sqrt(x);
    return acc;
}

// Vector field {h_k} over a k-interval, one sampled function per k.
struct VectorField {
    int k_lo = 0;
    std::vector<SampledFunction> components;

    const Grid& grid() const {
        if (components.empty()) throw std::logic_error("VectorField: empty");
        return components.front().grid;
    }
    std::size_t size() const { return components.size(); }

    double l2_at(std::size_t cell) const {
        double acc = 0.0;
        for (const auto& h : components) acc += h.values[cell] * h.values[cell];
        return std::sqrt(acc);
    }

    // ||{h_k}||_{L^1(l^2)} in grid measure.
    double l1_l2_norm() const {
        const std::size_t cells = components.front().values.size();
        double acc = 0.0;
        for (std::size_t i = 0; i < cells; ++i) acc += l2_at(i);
        return acc * grid().cell_measure();
    }
};

struct CubeRef {
    int level = 0;
    std::size_t c0 = 0;  // cube index per axis
    std::size_t c1 = 0;

    bool operator<(const CubeRef& o) const {
        if (level != o.level) return level < o.level;
        if (c0 != o.c0) return c0 < o.c0;
        return c1 < o.c1;
    }
};

struct CZResult {
    double height = 0.0;
    std::vector<CubeRef> selected;                    // Lambda, disjoint and maximal
    VectorField good;                                 // g^{(k)}
    std::map<CubeRef, std::vector<SampledFunction>> atoms;  // per cube, one atom per k
};

namespace detail {

template <class Visit>
void for_each_cell(const Grid& g, const CubeRef& q, Visit&& visit) {
    const std::size_t side = static_cast<std::size_t>(1) << q.level;
    const std::size_t n = g.points_per_axis;
    if (g.dim == 1) {
        for (std::size_t i = 0; i < side; ++i) visit(q.c0 * side + i);
    } else {
        for (std::size_t i = 0; i < side; ++i)
            for (std::size_t j = 0; j < side; ++j) visit((q.c0 * side + i) * n + q.c1 * side + j);
    }
}

}  // namespace detail

// Calderon-Zygmund decomposition of ||{h_k}||_{l^2} at height alpha.
// Stopping-time selection scanning coarse to fine; a cube is selected when
// its ||{h_k}||_{l^2} average exceeds alpha and no ancestor was selected.
// g^{(k)} equals h_k off the selected cubes and the cube average on each;
// the atoms are b^{(k)}_{j,beta} = (h_k - E_j h_k) chi_Q.
inline CZResult cz_decompose(const VectorField& h, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("cz_decompose: alpha must be positive");
    if (h.components.empty()) throw std::invalid_argument("cz_decompose: empty field");
    const Grid& g = h.grid();
    const std::size_t cells = h.components.front().values.size();

    std::vector<double> pointwise(cells);
    for (std::size_t i = 0; i < cells; ++i) pointwise[i] = h.l2_at(i);

    CZResult res;
    res.height = alpha;
    std::vector<char> covered(cells, 0);
    for (int level = top_level(g); level >= 0; --level) {
        const std::size_t cubes = g.points_per_axis >> level;
        const std::size_t cube_cells = g.dim == 1 ? (static_cast<std::size_t>(1) << level)
                                                  : (static_cast<std::size_t>(1) << (2 * level));
        const std::size_t c1_range = g.dim == 1 ? 1 : cubes;
        for (std::size_t c0 = 0; c0 < cubes; ++c0)
            for (std::size_t c1 = 0; c1 < c1_range; ++c1) {
                CubeRef q{level, c0, c1};
                bool inside_selected = false;
                double acc = 0.0;
                detail::for_each_cell(g, q, [&](std::size_t cell) {
                    acc += pointwise[cell];
                    if (covered[cell]) inside_selected = true;
                });
                if (inside_selected) continue;
                if (acc / static_cast<double>(cube_cells) > alpha) {
                    res.selected.push_back(q);
                    detail::for_each_cell(g, q, [&](std::size_t cell) { covered[cell] = 1; });
                }
            }
    }

    res.good.k_lo = h.k_lo;
    res.good.components = h.components;
    for (const CubeRef& q : res.selected) {
        std::vector<SampledFunction> cube_atoms;
        cube_atoms.reserve(h.size());
        const std::size_t cube_cells = g.dim == 1 ? (static_cast<std::size_t>(1) << q.level)
                                                  : (static_cast<std::size_t>(1) << (2 * q.level));
        for (std::size_t kk = 0; kk < h.size(); ++kk) {
            double avg = 0.0;
            detail::for_each_cell(g, q, [&](std::size_t cell) { avg += h.components[kk].values[cell]; });
            avg /= static_cast<double>(cube_cells);
            SampledFunction atom(g);
            detail::for_each_cell(g, q, [&](std::size_t cell) {
                atom.values[cell] = h.components[kk].values[cell] - avg;
                res.good.components[kk].values[cell] = avg;
            });
            cube_atoms.push_back(std::move(atom));
        }
        res.atoms.emplace(q, std::move(cube_atoms));
    }
    return res;
}

// Builds the martingale family {E_l f}_l from coarse to fine and returns
// ||lambda sqrt(N_lambda)||_p / ||f||_p.
inline double martingale_jump_ratio(const SampledFunction& f, double lambda, double p) {
    if (!(lambda > 0.0)) throw std::invalid_argument("martingale_jump_ratio: lambda must be positive");
    if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("martingale_jump_ratio: need 1 < p < inf");
    const int top = top_level(f.grid);
    std::vector<SampledFunction> family;
    family.reserve(top + 1);
    for (int level = top; level >= 0; --level) family.push_back(cond_expectation(f, level));

    std::vector<double> times(family.size());
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = std::exp2(static_cast<double>(i));

    SampledFunction jumps(f.grid);
    std::vector<double> series(family.size());
    for (std::size_t cell = 0; cell < jumps.values.size(); ++cell) {
        for (std::size_t i = 0; i < family.size(); ++i) series[i] = family[i].values[cell];
        jumps.values[cell] = lambda * std::sqrt(static_cast<double>(jump_count(SeriesSample(times, series), lambda)));
    }
    const double den = lp_norm(f, p);
    if (den == 0.0) return 0.0;
    return lp_norm(jumps, p) / den;
}

}  // namespace varjump

#endif  // VARJUMP_DYADIC_HPP
