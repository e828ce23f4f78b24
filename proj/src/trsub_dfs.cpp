#include <cstdlib>
#include <vector>

#include <fmt/format.h>

#include "bslip/errors.hpp"
#include "bslip/trsub.hpp"
#include "trsub_detail.hpp"

namespace bslip {

namespace {

struct Link {
    int earlier;   // position in the assignment order, or -1 for a fixed exterior value
    int fixed;     // exterior value when earlier == -1
    double weight; // alpha * interface measure
};

class DepthFirstSearch {
public:
    DepthFirstSearch(const TrustRegionSubproblem& sub, int budget) : sub_(sub), budget_(budget)
    {
        const Grid& grid = sub.base.grid();
        const auto& cells = sub.patch.cells;
        const int n = static_cast<int>(cells.size());
        std::vector<int> position(static_cast<std::size_t>(grid.cell_count()), -1);
        for (int i = 0; i < n; ++i) position[cells[i]] = i;
        links_.resize(static_cast<std::size_t>(n));
        lin_.assign(static_cast<std::size_t>(n) * sub.values.size(), 0.0);
        use_.assign(lin_.size(), 0);
        const double vol = grid.cell_volume();
        const auto faces = grid.interfaces();
        for (int i = 0; i < n; ++i) {
            const int c = cells[i];
            for (int v = 0; v < sub.values.size(); ++v) {
                lin_[idx(i, v)] = vol * sub.grad.g[c] * static_cast<double>(sub.values[v] - sub.base[c]);
                use_[idx(i, v)] = std::abs(sub.values[v] - sub.base[c]);
            }
            // every touching interface is charged when its later patch cell is assigned
            for (int nb : grid.neighbors(c)) {
                const Interface& f = faces[grid.interface_between(c, nb)];
                const double w = sub.alpha * f.measure;
                const int p = position[nb];
                if (p < 0) {
                    links_[i].push_back({-1, sub.base[nb], w});
                } else if (p < i) {
                    links_[i].push_back({p, 0, w});
                }
            }
        }
        assignment_.assign(static_cast<std::size_t>(n), -1);
        best_assignment_.clear();
        incumbent_ = 0.0;
        // incumbent: the base itself, whose objective is its own touching TV
        for (int i = 0; i < n; ++i) {
            for (const Link& l : links_[i]) {
                const int other = l.earlier < 0 ? l.fixed : sub.base[cells[l.earlier]];
                incumbent_ += l.weight * std::abs(sub.base[cells[i]] - other);
            }
        }
    }

    std::vector<int> run(SolverStats& stats)
    {
        recurse(0, 0.0, 0);
        stats.nodes = nodes_;
        std::vector<int> trial(sub_.base.values().begin(), sub_.base.values().end());
        if (!best_assignment_.empty()) {
            for (std::size_t i = 0; i < best_assignment_.size(); ++i) {
                trial[sub_.patch.cells[i]] = sub_.values[best_assignment_[i]];
            }
        }
        return trial;
    }

private:
    std::size_t idx(int pos, int v) const { return static_cast<std::size_t>(pos) * sub_.values.size() + v; }

    // Best linear term over the remaining cells, each on its own within the
    // remaining budget. Unassigned interfaces contribute >= 0 and are dropped.
    double optimistic_rest(int pos, int remaining) const
    {
        double s = 0.0;
        const int n = static_cast<int>(assignment_.size());
        for (int i = pos; i < n; ++i) {
            double best = 0.0;
            for (int v = 0; v < sub_.values.size(); ++v) {
                if (use_[idx(i, v)] <= remaining && lin_[idx(i, v)] < best) best = lin_[idx(i, v)];
            }
            s += best;
        }
        return s;
    }

    void recurse(int pos, double cost, int used)
    {
        ++nodes_;
        const int n = static_cast<int>(assignment_.size());
        if (pos == n) {
            if (cost < incumbent_) {
                incumbent_ = cost;
                best_assignment_ = assignment_;
            }
            return;
        }
        if (cost + optimistic_rest(pos, budget_ - used) >= incumbent_) {
            return;
        }
        for (int v = 0; v < sub_.values.size(); ++v) {
            const int u = used + use_[idx(pos, v)];
            if (u > budget_) continue;
            double c = cost + lin_[idx(pos, v)];
            const int wv = sub_.values[v];
            for (const Link& l : links_[pos]) {
                const int other = l.earlier < 0 ? l.fixed : sub_.values[assignment_[l.earlier]];
                c += l.weight * std::abs(wv - other);
            }
            assignment_[pos] = v;
            recurse(pos + 1, c, u);
        }
        assignment_[pos] = -1;
    }

    const TrustRegionSubproblem& sub_;
    int budget_;
    std::vector<std::vector<Link>> links_;
    std::vector<double> lin_;
    std::vector<int> use_;
    std::vector<int> assignment_;
    std::vector<int> best_assignment_;
    double incumbent_ = 0.0;
    std::int64_t nodes_ = 0;
};

} // namespace

// Depth-first search over the patch cells in row-major order with an
// optimistic bound; the incumbent starts at the base control.
CandidateStep solve_dfs_2d(const TrustRegionSubproblem& sub, const SolveOptions& opts)
{
    validate(sub);
    const int n = static_cast<int>(sub.patch.cells.size());
    if (n > opts.dfs_cell_cap) {
        throw PatchTooLarge(fmt::format("patch-too-large: patch {} has {} cells, the search solver accepts at "
                                        "most {}; use more patches",
                                        sub.patch.id, n, opts.dfs_cell_cap));
    }
    SolverStats stats;
    stats.budget_units = budget_units(sub);
    DepthFirstSearch search(sub, stats.budget_units);
    auto trial = search.run(stats);
    return detail::finalize(sub, std::move(trial), stats);
}

} // namespace bslip
