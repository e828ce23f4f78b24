#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <vector>

#include <fmt/format.h>

#include "bslip/errors.hpp"
#include "bslip/kernels.hpp"
#include "bslip/trsub.hpp"
#include "trsub_detail.hpp"

namespace bslip {

namespace {

struct Orientation {
    int fast;    // axis walked inside a frontier row
    int slow;    // axis along which rows advance
    int width;   // cells per row
    int height;  // rows
};

} // namespace

// Transfer-matrix dynamic program over the cells of a rectangular patch in
// row order. The state is the value of the last `width` cells (the frontier
// separating assigned from unassigned cells) plus the budget units used.
// The patch is walked along its longer side so that the frontier is short.
CandidateStep solve_frontier_2d(const TrustRegionSubproblem& sub, const SolveOptions& opts)
{
    validate(sub);
    const Grid& grid = sub.base.grid();
    const Patch& patch = sub.patch;
    if (static_cast<int>(patch.cells.size()) != patch.width() * patch.height()) {
        throw InvalidArgument("frontier solver needs a rectangular patch");
    }
    const Orientation o = patch.width() <= patch.height()
                              ? Orientation{0, 1, patch.width(), patch.height()}
                              : Orientation{1, 0, patch.height(), patch.width()};
    const int m = sub.values.size();
    if (m > 255) {
        throw InvalidArgument("frontier solver supports at most 255 control values");
    }
    const int budget = budget_units(sub);
    const int blen = budget + 1;

    const double digits_bits = o.width * std::log2(static_cast<double>(m));
    if (digits_bits > 40.0) {
        throw PatchTooLarge(fmt::format("patch-too-large: patch {} needs {}^{} frontier states; use more patches", patch.id, m,
                                        o.width));
    }
    std::int64_t n_states = 1;
    for (int i = 0; i < o.width; ++i) n_states *= m;
    const std::int64_t entries = n_states * blen;
    const std::int64_t words = kernels::choice_words(entries, m);
    const std::int64_t cells = static_cast<std::int64_t>(patch.cells.size());
    if (words * cells * 8 > opts.frontier_memory_cap) {
        throw PatchTooLarge(fmt::format("patch-too-large: patch {} ({} x {} cells, {} budget units) needs {} MiB of frontier "
                                        "back-pointers, cap is {} MiB; use more patches",
                                        patch.id, patch.width(), patch.height(), budget,
                                        words * cells * 8 >> 20, opts.frontier_memory_cap >> 20));
    }

    const double vol = grid.cell_volume();
    const double w_fast = sub.alpha * grid.interface_measure(o.fast);
    const double w_slow = sub.alpha * grid.interface_measure(o.slow);
    constexpr double inf = std::numeric_limits<double>::infinity();

    auto global = [&](int a, int b) {
        std::array<int, 2> idx{};
        idx[o.fast] = patch.first[o.fast] + a;
        idx[o.slow] = patch.first[o.slow] + b;
        return idx;
    };
    auto exterior = [&](std::array<int, 2> idx) -> std::optional<int> {
        if (idx[0] < 0 || idx[0] >= grid.nx() || idx[1] < 0 || idx[1] >= grid.ny()) return std::nullopt;
        return sub.base[grid.cell_index(idx[0], idx[1])];
    };

    std::vector<double> prev(static_cast<std::size_t>(entries), inf);
    std::vector<double> next(static_cast<std::size_t>(entries));
    std::vector<std::uint64_t> choices(static_cast<std::size_t>(words * cells));
    prev[0] = 0.0;

    std::vector<std::int64_t> pow_m(static_cast<std::size_t>(o.width) + 1, 1);
    for (int i = 1; i <= o.width; ++i) pow_m[i] = pow_m[i - 1] * m;

    std::vector<double> self_cost(static_cast<std::size_t>(m));
    std::vector<int> use(static_cast<std::size_t>(m));
    // per step: cell index and per-value budget use, kept for the backtrack
    std::vector<int> step_cell(static_cast<std::size_t>(cells));

    SolverStats stats;
    stats.budget_units = budget;
    std::int64_t t = 0;
    for (int b = 0; b < o.height; ++b) {
        for (int a = 0; a < o.width; ++a, ++t) {
            const auto idx = global(a, b);
            const int cell = grid.cell_index(idx[0], idx[1]);
            step_cell[t] = cell;
            const int wbar = sub.base[cell];
            const double g = sub.grad.g[cell];
            std::array<int, 2> before_fast = idx, after_fast = idx, before_slow = idx, after_slow = idx;
            before_fast[o.fast] -= 1;
            after_fast[o.fast] += 1;
            before_slow[o.slow] -= 1;
            after_slow[o.slow] += 1;
            const auto ext_bf = a == 0 ? exterior(before_fast) : std::nullopt;
            const auto ext_af = a == o.width - 1 ? exterior(after_fast) : std::nullopt;
            const auto ext_bs = b == 0 ? exterior(before_slow) : std::nullopt;
            const auto ext_as = b == o.height - 1 ? exterior(after_slow) : std::nullopt;
            for (int v = 0; v < m; ++v) {
                const int wv = sub.values[v];
                use[v] = std::abs(wv - wbar);
                double c = vol * g * static_cast<double>(wv - wbar);
                if (ext_bf) c += w_fast * std::abs(wv - *ext_bf);
                if (ext_af) c += w_fast * std::abs(wv - *ext_af);
                if (ext_bs) c += w_slow * std::abs(wv - *ext_bs);
                if (ext_as) c += w_slow * std::abs(wv - *ext_as);
                self_cost[v] = c;
            }
            kernels::FrontierStep step;
            step.n_values = m;
            step.n_states = n_states;
            step.stride = pow_m[a];
            step.left_stride = a > 0 ? pow_m[a - 1] : 0;
            step.budget_len = blen;
            step.values = sub.values.values();
            step.self_cost = self_cost;
            step.budget_use = use;
            step.up_weight = b > 0 ? w_slow : 0.0;
            step.left_weight = a > 0 ? w_fast : 0.0;
            kernels::frontier_step(opts.exec, step, prev, next,
                                   std::span<std::uint64_t>(choices).subspan(static_cast<std::size_t>(t * words),
                                                                             static_cast<std::size_t>(words)));
            std::swap(prev, next);
            stats.states += entries;
        }
    }

    double best = inf;
    std::int64_t best_entry = -1;
    for (std::int64_t e = 0; e < entries; ++e) {
        if (prev[static_cast<std::size_t>(e)] < best) {
            best = prev[static_cast<std::size_t>(e)];
            best_entry = e;
        }
    }
    std::vector<int> trial(sub.base.values().begin(), sub.base.values().end());
    std::int64_t state = best_entry / blen;
    int u = static_cast<int>(best_entry % blen);
    for (t = cells - 1; t >= 0; --t) {
        const int a = static_cast<int>(t % o.width);
        const int cell = step_cell[t];
        const int v = static_cast<int>((state / pow_m[a]) % m);
        const auto words_t = std::span<const std::uint64_t>(choices).subspan(static_cast<std::size_t>(t * words),
                                                                            static_cast<std::size_t>(words));
        const int vo = kernels::read_choice(words_t, state * blen + u, m);
        trial[cell] = sub.values[v];
        u -= std::abs(sub.values[v] - sub.base[cell]);
        state += (vo - v) * pow_m[a];
    }
    return detail::finalize(sub, std::move(trial), stats);
}

} // namespace bslip
