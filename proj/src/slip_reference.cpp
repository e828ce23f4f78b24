#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "bslip/errors.hpp"
#include "bslip/slip.hpp"

namespace bslip {

// Classic trust-region loop on the whole domain: halve the radius until the
// step passes the sufficient decrease test, stop when the step predicts no
// reduction.
RunResult run_reference_slip(const Problem& problem, const SlipConfig& cfg, const ControlField& w0)
{
    cfg.validate();
    const Grid& grid = problem.model.grid();
    if (!w0.feasible(problem.values)) {
        throw InvalidArgument("initial control is not feasible");
    }
    const auto t_start = std::chrono::steady_clock::now();
    const int k_cap = cfg.k_cap ? *cfg.k_cap : auto_k_cap(cfg.delta0, grid.cell_volume());
    const Patch domain = whole_domain_patch(grid);

    RunResult result{w0, {}, TerminationReason::MaxOuterIters, {}, {}, k_cap, 0.0, {}};
    ControlField w = w0;
    double F = problem.model.objective(w);
    TvTally tv = tv_tally(w);
    double J = F + problem.alpha * tv.value();
    if (cfg.keep_iterates) result.iterates.push_back(w);

    for (int n = 0; n < cfg.max_outer_iters; ++n) {
        const GradientField g = problem.model.gradient_field(w);
        IterationRecord rec;
        rec.n = n;
        rec.J_before = J;
        bool moved = false;
        for (int k = 0; k <= k_cap; ++k) {
            const double radius = std::ldexp(cfg.delta0, -k);
            const TrustRegionSubproblem sub{w, g, domain, radius, problem.alpha, problem.values};
            CandidateStep step = solve(sub, cfg.solver, cfg.solve);
            ++result.totals.subproblems;
            if (!(step.pred > 0.0)) {
                rec.solved.push_back({k, 0, 0.0, 0.0, false, false, false});
                break;
            }
            const double F_trial = problem.model.objective(step.trial);
            const TvTally tv_trial = tv_tally(step.trial);
            const double J_trial = F_trial + problem.alpha * tv_trial.value();
            const double ared = J - J_trial;
            if (ared >= cfg.sigma * step.pred) {
                rec.solved.push_back({k, 0, step.pred, ared, true, false, false});
                rec.applied.push_back({k, 0, J_trial});
                w = std::move(step.trial);
                F = F_trial;
                tv = tv_trial;
                J = J_trial;
                moved = true;
                break;
            }
            rec.solved.push_back({k, 0, step.pred, ared, false, true, false});
        }
        rec.J_after = J;
        rec.F = F;
        rec.TV = tv.value();
        if (!moved) {
            rec.terminal = true;
            result.reason = TerminationReason::Stationary;
            result.records.push_back(std::move(rec));
            break;
        }
        result.records.push_back(std::move(rec));
        if (cfg.keep_iterates) result.iterates.push_back(w);
    }
    result.final = w;
    result.final_objective = ObjectiveParts{F, tv, problem.alpha};
    result.totals.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

} // namespace bslip
