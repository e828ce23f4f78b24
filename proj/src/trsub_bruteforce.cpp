#include <cmath>
#include <cstdlib>
#include <vector>

#include <fmt/format.h>

#include "bslip/errors.hpp"
#include "bslip/trsub.hpp"
#include "trsub_detail.hpp"

namespace bslip {

CandidateStep solve_bruteforce(const TrustRegionSubproblem& sub)
{
    validate(sub);
    const auto& cells = sub.patch.cells;
    const int n = static_cast<int>(cells.size());
    const int m = sub.values.size();
    if (n > 16 || static_cast<double>(n) * std::log2(static_cast<double>(m)) > 24.0) {
        throw PatchTooLarge(fmt::format("patch-too-large: brute force is limited to 16 cells and 2^24 assignments, got {} cells "
                                        "with {} values",
                                        n, m));
    }
    const int budget = budget_units(sub);
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    std::vector<int> values(sub.base.values().begin(), sub.base.values().end());
    ControlField trial(sub.base.grid_ptr(), values);
    std::vector<int> best(values);
    double best_pred = 0.0;
    SolverStats stats;
    stats.budget_units = budget;
    while (true) {
        int used = 0;
        auto& tv = trial.mutable_values();
        for (int i = 0; i < n; ++i) {
            tv[cells[i]] = sub.values[digits[i]];
            used += std::abs(sub.values[digits[i]] - sub.base[cells[i]]);
        }
        ++stats.nodes;
        if (used <= budget) {
            const double p = pred_of(sub, trial);
            if (p > best_pred) {
                best_pred = p;
                best.assign(tv.begin(), tv.end());
            }
        }
        int i = 0;
        while (i < n && ++digits[i] == m) {
            digits[i] = 0;
            ++i;
        }
        if (i == n) break;
    }
    return detail::finalize(sub, std::move(best), stats);
}

} // namespace bslip
