#include "bslip/slip.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "bslip/errors.hpp"

namespace bslip {

void SlipConfig::validate() const
{
    if (!(sigma > 0.0 && sigma < 1.0)) {
        throw InvalidArgument("sigma must be in (0,1)");
    }
    if (!(delta0 > 0.0) || !std::isfinite(delta0)) {
        throw InvalidArgument("delta0 must be positive");
    }
    if (max_outer_iters < 1) {
        throw InvalidArgument("max_outer_iters must be positive");
    }
    if (k_cap && *k_cap < 0) {
        throw InvalidArgument("k_cap must be nonnegative");
    }
    if (lipschitz && !(*lipschitz >= 0.0)) {
        throw InvalidArgument("Lipschitz constant must be nonnegative");
    }
}

int auto_k_cap(double delta0, double cell_volume)
{
    // k = ceil(log2(delta0 / vol)): smallest k with delta0 2^-k <= vol
    int k = 0;
    while (std::ldexp(delta0, -k) > cell_volume) ++k;
    while (std::ldexp(delta0, -(k - 1)) <= cell_volume) --k;
    return std::max(k + 1, 0);
}

std::string to_string(TerminationReason r)
{
    return r == TerminationReason::Stationary ? "Stationary" : "MaxOuterIters";
}

ControlField default_start(GridPtr grid, const ValueSet& values)
{
    return ControlField::constant(std::move(grid), values.closest_to_zero());
}

namespace {

struct Pending {
    int patch;
    CandidateStep step;
};

CandidateStep solve_one(const ControlField& w_n, const GradientField& g_n, double J_n, const Patch& patch,
                        const Problem& problem, const SlipConfig& cfg, int k)
{
    const double radius = std::ldexp(cfg.delta0, -k);
    const TrustRegionSubproblem sub{w_n, g_n, patch, radius, problem.alpha, problem.values};
    CandidateStep step = solve(sub, cfg.solver, cfg.solve);
    verify_candidate(sub, step);
    step.k = k;
    step.patch_id = patch.id;
    if (step.pred > 0.0) {
        const ObjectiveParts trial = evaluate(problem.model, step.trial, problem.alpha);
        step.ared = J_n - trial.J();
    } else {
        step.ared = 0.0;
    }
    if (radius < w_n.grid().cell_volume() && step.pred != 0.0) {
        throw InvariantViolation(fmt::format("radius {} is below one cell volume but pred = {} on patch {}", radius,
                                             step.pred, patch.id));
    }
    return step;
}

} // namespace

Tabulation tabulate(const ControlField& w_n, const GradientField& g_n, double J_n, const PatchSet& patches,
                    const Problem& problem, const SlipConfig& cfg, double lipschitz, int k_cap)
{
    Tabulation out;
    std::vector<int> level;
    for (const Patch& p : patches.patches) level.push_back(p.id);
    double best_ared = -std::numeric_limits<double>::infinity();

    for (int k = 0; !level.empty(); ++k) {
        std::vector<std::optional<CandidateStep>> steps(level.size());
        if (cfg.parallel_tabulation && level.size() > 1) {
            std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
            for (std::size_t i = 0; i < level.size(); ++i) {
                try {
                    steps[i] = solve_one(w_n, g_n, J_n, patches.patches[level[i]], problem, cfg, k);
                } catch (...) {
#pragma omp critical(bslip_tabulate_error)
                    if (!error) error = std::current_exception();
                }
            }
            if (error) std::rethrow_exception(error);
        } else {
            for (std::size_t i = 0; i < level.size(); ++i) {
                steps[i] = solve_one(w_n, g_n, J_n, patches.patches[level[i]], problem, cfg, k);
            }
        }

        std::vector<int> next_level;
        const double radius = std::ldexp(cfg.delta0, -k);
        for (std::size_t i = 0; i < level.size(); ++i) {
            CandidateStep& step = *steps[i];
            SolveRecord rec{k, level[i], step.pred, *step.ared, false, false, false};
            if (step.pred > 0.0 && *step.ared >= cfg.sigma * step.pred) {
                rec.accepted = true;
                best_ared = std::max(best_ared, *step.ared);
                out.accepted.push_back(std::move(step));
            } else if (step.pred > 0.0 && best_ared < step.pred + lipschitz * radius) {
                if (k + 1 <= k_cap) {
                    rec.refined = true;
                    next_level.push_back(level[i]);
                }
            } else if (step.pred > 0.0) {
                rec.dominated = true;
            }
            out.solved.push_back(rec);
        }
        level = std::move(next_level);
    }
    return out;
}

GreedyResult greedy_apply(const ControlField& w_n, std::vector<CandidateStep> accepted, const Problem& problem,
                          const PatchSet& patches)
{
    GreedyResult out{w_n, {}, false};
    double j0 = evaluate(problem.model, w_n, problem.alpha).J();
    while (!accepted.empty()) {
        auto best = accepted.begin();
        for (auto it = accepted.begin(); it != accepted.end(); ++it) {
            const double a = *it->ared, b = *best->ared;
            if (a > b || (a == b && (it->patch_id < best->patch_id ||
                                     (it->patch_id == best->patch_id && it->k < best->k)))) {
                best = it;
            }
        }
        ControlField candidate = splice(out.next, patches.patches[best->patch_id].cells, best->trial);
        const double j = evaluate(problem.model, candidate, problem.alpha).J();
        if (j < j0) {
            out.applied.push_back({best->k, best->patch_id, j});
            out.next = std::move(candidate);
            j0 = j;
            accepted.erase(best);
        } else {
            out.stopped_on_increase = true;
            break;
        }
    }
    return out;
}

RunResult run(const Problem& problem, const PatchSet& patches, const SlipConfig& cfg, const ControlField& w0,
              const IterationObserver& observer)
{
    cfg.validate();
    const Grid& grid = problem.model.grid();
    if (!(w0.grid() == grid)) {
        throw InvalidArgument("initial control lives on a different grid than the model");
    }
    if (!w0.feasible(problem.values)) {
        throw InvalidArgument("initial control is not feasible");
    }
    const CoverReport cover = validate_cover(patches, grid);
    if (!cover.ok) {
        throw CoverViolation(cover.summary());
    }
    for (int i = 0; i < patches.size(); ++i) {
        if (patches.patches[i].id != i) {
            throw InvalidArgument("patch ids must match their position in the patch set");
        }
    }
    const auto t_start = std::chrono::steady_clock::now();
    const double lipschitz = cfg.lipschitz ? *cfg.lipschitz : problem.model.lipschitz_bound(problem.values);
    const int k_cap = cfg.k_cap ? *cfg.k_cap : auto_k_cap(cfg.delta0, grid.cell_volume());
    const std::int64_t max_solves = static_cast<std::int64_t>(patches.size()) * (k_cap + 1);

    RunResult result{w0, {}, TerminationReason::MaxOuterIters, {}, {}, k_cap, lipschitz, {}};
    ControlField w = w0;
    ObjectiveParts parts = evaluate(problem.model, w, problem.alpha);
    if (cfg.keep_iterates) result.iterates.push_back(w);
    spdlog::debug("block-SLIP start: J = {:.10g}, L = {:.4g}, k_cap = {}, patches = {}", parts.J(), lipschitz,
                  k_cap, patches.size());

    for (int n = 0; n < cfg.max_outer_iters; ++n) {
        const GradientField g = problem.model.gradient_field(w);
        const double J_n = parts.J();
        Tabulation tab = tabulate(w, g, J_n, patches, problem, cfg, lipschitz, k_cap);
        result.totals.subproblems += static_cast<std::int64_t>(tab.solved.size());
        if (static_cast<std::int64_t>(tab.solved.size()) > max_solves) {
            throw InvariantViolation(fmt::format("iteration {} issued {} solves, bound is {}", n, tab.solved.size(),
                                                 max_solves));
        }
        for (const CandidateStep& s : tab.accepted) {
            if (!(s.pred > 0.0 && *s.ared >= cfg.sigma * s.pred)) {
                throw InvariantViolation("accepted step violates the sufficient decrease test");
            }
        }

        IterationRecord rec;
        rec.n = n;
        rec.solved = std::move(tab.solved);
        rec.J_before = J_n;
        if (tab.accepted.empty()) {
            rec.J_after = J_n;
            rec.F = parts.F;
            rec.TV = parts.tv_value();
            rec.terminal = true;
            result.reason = TerminationReason::Stationary;
            if (observer) observer(rec);
            result.records.push_back(std::move(rec));
            break;
        }

        const double first_ared = [&] {
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& s : tab.accepted) best = std::max(best, *s.ared);
            return best;
        }();
        GreedyResult greedy = greedy_apply(w, std::move(tab.accepted), problem, patches);
        if (greedy.applied.empty()) {
            throw InvariantViolation(fmt::format("iteration {}: acceptance set nonempty but nothing applied", n));
        }
        if (J_n - greedy.applied.front().J_after != first_ared) {
            throw InvariantViolation(fmt::format("iteration {}: first greedy application realized {} instead of "
                                                 "the tabulated reduction {}",
                                                 n, J_n - greedy.applied.front().J_after, first_ared));
        }
        w = std::move(greedy.next);
        parts = evaluate(problem.model, w, problem.alpha);
        if (!(parts.J() < J_n)) {
            throw InvariantViolation(fmt::format("iteration {}: objective did not decrease ({} -> {})", n, J_n,
                                                 parts.J()));
        }
        rec.applied = std::move(greedy.applied);
        rec.greedy_break = greedy.stopped_on_increase;
        rec.J_after = parts.J();
        rec.F = parts.F;
        rec.TV = parts.tv_value();
        spdlog::debug("iteration {}: J {:.10g} -> {:.10g}, {} solves, {} applied", n, J_n, rec.J_after,
                      rec.solved.size(), rec.applied.size());
        if (observer) observer(rec);
        result.records.push_back(std::move(rec));
        if (cfg.keep_iterates) result.iterates.push_back(w);
    }

    result.final = w;
    result.final_objective = parts;
    result.totals.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

} // namespace bslip
