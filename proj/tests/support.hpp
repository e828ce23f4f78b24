#pragma once

// Random instance generators shared by the unit tests and the acceptance
// binary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "bslip/control.hpp"
#include "bslip/grid.hpp"
#include "bslip/model.hpp"
#include "bslip/patches.hpp"
#include "bslip/trsub.hpp"

namespace bslip::fixtures {

// Owns everything a TrustRegionSubproblem refers to.
struct OwnedSubproblem {
    GridPtr grid;
    ValueSet values{std::vector<int>{0, 1}};
    std::unique_ptr<ControlField> base;
    GradientField grad;
    Patch patch;
    double radius = 0.0;
    double alpha = 0.0;

    TrustRegionSubproblem view() const { return {*base, grad, patch, radius, alpha, values}; }
};

inline ValueSet random_values(std::mt19937_64& rng, int m)
{
    // m distinct integers from [-2, 3]
    std::vector<int> pool{-2, -1, 0, 1, 2, 3};
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(static_cast<std::size_t>(m));
    std::sort(pool.begin(), pool.end());
    return ValueSet(pool);
}

inline std::vector<int> random_field(std::mt19937_64& rng, int cells, const ValueSet& w)
{
    std::uniform_int_distribution<int> pick(0, w.size() - 1);
    std::vector<int> v(static_cast<std::size_t>(cells));
    for (auto& x : v) x = w[pick(rng)];
    return v;
}

inline std::vector<double> random_gradient(std::mt19937_64& rng, int cells)
{
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> g(static_cast<std::size_t>(cells));
    for (auto& x : g) x = d(rng);
    return g;
}

// 1D instance: N <= n_max cells, M <= m_max values, random contiguous patch,
// random radius between zero and the whole budget.
inline OwnedSubproblem random_1d(std::mt19937_64& rng, int n_max = 12, int m_max = 3)
{
    OwnedSubproblem s;
    const int n = std::uniform_int_distribution<int>(1, n_max)(rng);
    const int m = std::uniform_int_distribution<int>(1, m_max)(rng);
    s.grid = build_grid_1d(-1.0, 1.0, n);
    s.values = random_values(rng, m);
    s.base = std::make_unique<ControlField>(s.grid, random_field(rng, n, s.values));
    s.grad = GradientField{s.grid, random_gradient(rng, n)};
    const int lo = std::uniform_int_distribution<int>(0, n - 1)(rng);
    const int hi = std::uniform_int_distribution<int>(lo, n - 1)(rng);
    const double h = s.grid->cell_volume();
    Box box;
    box.lower[0] = -1.0 + (lo + 0.25) * h;
    box.upper[0] = -1.0 + (hi + 0.75) * h;
    s.patch = make_patch(*s.grid, box, 0);
    const double full = h * n * std::max(1, s.values.range());
    s.radius = std::uniform_real_distribution<double>(0.0, full)(rng);
    s.alpha = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    return s;
}

// 2D instance on a grid a few cells larger than the patch, so that the patch
// has fixed exterior neighbors on some sides.
inline OwnedSubproblem random_2d(std::mt19937_64& rng, int patch_side, int m)
{
    OwnedSubproblem s;
    const int n = patch_side + std::uniform_int_distribution<int>(0, 2)(rng);
    s.grid = build_grid_2d(Box{{0.0, 0.0}, {1.0, 1.0}}, n, n);
    s.values = random_values(rng, m);
    const int cells = s.grid->cell_count();
    s.base = std::make_unique<ControlField>(s.grid, random_field(rng, cells, s.values));
    s.grad = GradientField{s.grid, random_gradient(rng, cells)};
    std::uniform_int_distribution<int> off(0, n - patch_side);
    const int x0 = off(rng);
    const int y0 = off(rng);
    const double h = 1.0 / n;
    Box box{{(x0 + 0.25) * h, (y0 + 0.25) * h}, {(x0 + patch_side - 0.25) * h, (y0 + patch_side - 0.25) * h}};
    s.patch = make_patch(*s.grid, box, 0);
    const double full = h * h * patch_side * patch_side * std::max(1, s.values.range());
    s.radius = std::uniform_real_distribution<double>(0.0, full)(rng);
    s.alpha = std::uniform_real_distribution<double>(0.0, 0.2)(rng);
    return s;
}

// Exhaustive minimum of the linearized patch objective
//   sum_c vol g_c (w_c - base_c) + alpha sum_{touching interfaces} measure |jump|
// minus the same TV term at the base, over every assignment of W to the
// patch cells within the L1 budget. Written independently of the library
// solvers: cells are assigned in ascending index order, each interface is
// charged when its second endpoint is fixed. Returns the best reduction.
inline double exhaustive_best_pred(const TrustRegionSubproblem& sub)
{
    const Grid& grid = sub.base.grid();
    const double vol = grid.cell_volume();
    const auto& cells = sub.patch.cells;
    const int n = static_cast<int>(cells.size());
    std::vector<int> pos(static_cast<std::size_t>(grid.cell_count()), -1);
    for (int i = 0; i < n; ++i) pos[cells[i]] = i;
    long budget = 0;
    while ((budget + 1) * vol <= sub.radius && budget < 1L << 30) ++budget;

    // per patch cell: earlier patch neighbors and fixed exterior neighbors
    std::vector<std::vector<std::pair<int, double>>> earlier(n);
    std::vector<std::vector<std::pair<int, double>>> fixed(n);
    double base_tv = 0.0;
    for (const auto& f : grid.interfaces()) {
        const int pa = pos[f.cell_a], pb = pos[f.cell_b];
        if (pa < 0 && pb < 0) continue;
        base_tv += f.measure * std::abs(sub.base[f.cell_a] - sub.base[f.cell_b]);
        if (pa >= 0 && pb >= 0) {
            earlier[std::max(pa, pb)].push_back({std::min(pa, pb), f.measure});
        } else if (pa >= 0) {
            fixed[pa].push_back({sub.base[f.cell_b], f.measure});
        } else {
            fixed[pb].push_back({sub.base[f.cell_a], f.measure});
        }
    }
    std::vector<int> w(static_cast<std::size_t>(n));
    double best = 0.0;  // the base itself
    auto rec = [&](auto&& self, int i, long used, double cost) -> void {
        if (i == n) {
            best = std::min(best, cost - sub.alpha * base_tv);
            return;
        }
        const int b = sub.base[cells[i]];
        for (int v : sub.values.values()) {
            const long u = used + std::abs(v - b);
            if (u > budget) continue;
            double c = vol * sub.grad.g[cells[i]] * (v - b);
            double t = 0.0;
            for (auto [j, m] : earlier[i]) t += m * std::abs(v - w[j]);
            for (auto [x, m] : fixed[i]) t += m * std::abs(v - x);
            w[i] = v;
            self(self, i + 1, u, cost + c + sub.alpha * t);
        }
    };
    rec(rec, 0, 0, 0.0);
    return -best;
}

} // namespace bslip::fixtures
