#include <cstdlib>
#include <limits>
#include <vector>

#include "bslip/errors.hpp"
#include "bslip/trsub.hpp"
#include "trsub_detail.hpp"

namespace bslip {

// Shortest path through a layered DAG: one layer per patch cell, node =
// (value index, budget units used so far). Arc costs are the linear term
// of the entered cell plus alpha times the jump to the previous cell; the
// fixed neighbors left and right of the patch enter through the first and
// last layer.
CandidateStep solve_dp_1d(const TrustRegionSubproblem& sub, const SolveOptions&)
{
    validate(sub);
    const Grid& grid = sub.base.grid();
    if (grid.dim() != 1) {
        throw InvalidArgument("solve_dp_1d needs a 1D grid");
    }
    const Patch& patch = sub.patch;
    const int lo = patch.first[0];
    const int hi = patch.last[0];
    if (static_cast<int>(patch.cells.size()) != hi - lo + 1) {
        throw InvalidArgument("solve_dp_1d needs a contiguous patch");
    }
    const int len = hi - lo + 1;
    const int m = sub.values.size();
    if (m > 127) {
        throw InvalidArgument("solve_dp_1d supports at most 127 control values");
    }
    const int budget = budget_units(sub);
    const int blen = budget + 1;
    const double vol = grid.cell_volume();
    const double jump = sub.alpha * grid.interface_measure(0);
    constexpr double inf = std::numeric_limits<double>::infinity();

    auto at = [blen](int v, int u) { return static_cast<std::size_t>(v) * blen + u; };
    std::vector<double> cur(static_cast<std::size_t>(m) * blen, inf);
    std::vector<double> nxt(cur.size());
    // back[layer][v][u] = predecessor value index
    std::vector<std::int8_t> back(static_cast<std::size_t>(len) * m * blen, -1);

    SolverStats stats;
    stats.budget_units = budget;

    for (int layer = 0; layer < len; ++layer) {
        const int cell = lo + layer;
        const int wbar = sub.base[cell];
        const double g = sub.grad.g[cell];
        std::fill(nxt.begin(), nxt.end(), inf);
        for (int v = 0; v < m; ++v) {
            const int wv = sub.values[v];
            const int use = std::abs(wv - wbar);
            double local = vol * g * static_cast<double>(wv - wbar);
            if (layer == 0 && cell > 0) {
                local += jump * std::abs(wv - sub.base[cell - 1]);
            }
            if (layer == len - 1 && cell + 1 < grid.cell_count()) {
                local += jump * std::abs(wv - sub.base[cell + 1]);
            }
            for (int u = use; u < blen; ++u) {
                double best = inf;
                int arg = -1;
                if (layer == 0) {
                    if (u == use) {
                        best = local;
                        arg = 0;
                    }
                } else {
                    for (int vp = 0; vp < m; ++vp) {
                        const double p = cur[at(vp, u - use)];
                        if (p == inf) continue;
                        const double c = p + (local + jump * std::abs(wv - sub.values[vp]));
                        if (c < best) {
                            best = c;
                            arg = vp;
                        }
                    }
                }
                nxt[at(v, u)] = best;
                back[(static_cast<std::size_t>(layer) * m + v) * blen + u] = static_cast<std::int8_t>(arg);
                ++stats.states;
            }
        }
        std::swap(cur, nxt);
    }

    double best = inf;
    int bv = -1, bu = -1;
    for (int v = 0; v < m; ++v) {
        for (int u = 0; u < blen; ++u) {
            if (cur[at(v, u)] < best) {
                best = cur[at(v, u)];
                bv = v;
                bu = u;
            }
        }
    }
    std::vector<int> trial(sub.base.values().begin(), sub.base.values().end());
    for (int layer = len - 1; layer >= 0; --layer) {
        const int cell = lo + layer;
        trial[cell] = sub.values[bv];
        const int use = std::abs(sub.values[bv] - sub.base[cell]);
        const int pv = back[(static_cast<std::size_t>(layer) * m + bv) * blen + bu];
        bu -= use;
        bv = pv;
    }
    return detail::finalize(sub, std::move(trial), stats);
}

} // namespace bslip
