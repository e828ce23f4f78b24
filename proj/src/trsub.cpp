#include "bslip/trsub.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "bslip/errors.hpp"
#include "trsub_detail.hpp"

namespace bslip {

std::string to_string(SolverKind kind)
{
    switch (kind) {
    case SolverKind::Auto: return "auto";
    case SolverKind::Dp1d: return "dp1d";
    case SolverKind::Frontier2d: return "frontier2d";
    case SolverKind::Dfs2d: return "dfs2d";
    case SolverKind::BruteForce: return "bruteforce";
    }
    return "unknown";
}

SolverKind solver_kind_from_string(const std::string& name)
{
    for (SolverKind k : {SolverKind::Auto, SolverKind::Dp1d, SolverKind::Frontier2d, SolverKind::Dfs2d,
                         SolverKind::BruteForce}) {
        if (to_string(k) == name) return k;
    }
    throw InvalidArgument("unknown subproblem solver '" + name + "'");
}

void validate(const TrustRegionSubproblem& sub)
{
    const Grid& grid = sub.base.grid();
    if (!(sub.radius > 0.0) || !std::isfinite(sub.radius)) {
        throw InvalidArgument("trust-region radius must be positive");
    }
    if (!(sub.alpha >= 0.0) || !std::isfinite(sub.alpha)) {
        throw InvalidArgument("TV weight alpha must be nonnegative");
    }
    if (!sub.grad.grid || !(*sub.grad.grid == grid) || static_cast<int>(sub.grad.g.size()) != grid.cell_count()) {
        throw InvalidArgument("gradient does not live on the control grid");
    }
    if (!sub.base.feasible(sub.values)) {
        throw InvalidArgument("base control takes values outside W");
    }
    for (int c : sub.patch.cells) {
        if (!grid.valid_cell(c)) {
            throw InvalidArgument("patch cell out of range");
        }
    }
}

int budget_units(const TrustRegionSubproblem& sub)
{
    const double vol = sub.base.grid().cell_volume();
    double units = std::floor(sub.radius / vol);
    while (units > 0 && units * vol > sub.radius) units -= 1;
    while ((units + 1) * vol <= sub.radius) units += 1;
    const double cap = static_cast<double>(sub.patch.cells.size()) * sub.values.range();
    return static_cast<int>(std::min(units, cap));
}

double pred_of(const TrustRegionSubproblem& sub, const ControlField& trial)
{
    const Grid& grid = sub.base.grid();
    if (!(trial.grid() == grid)) {
        throw ContractViolation("trial lives on a different grid");
    }
    for (int c = 0; c < grid.cell_count(); ++c) {
        if (trial[c] != sub.base[c] && !sub.patch.contains(grid, c)) {
            throw ContractViolation(fmt::format("trial differs from the base at cell {} outside patch {}", c,
                                                sub.patch.id));
        }
    }
    double lin = 0.0;
    for (int c : sub.patch.cells) {
        lin += sub.grad.g[c] * static_cast<double>(sub.base[c] - trial[c]);
    }
    lin *= grid.cell_volume();
    const TvTally before = tv_tally_restricted(sub.base, sub.patch.touching_interfaces);
    const TvTally after = tv_tally_restricted(trial, sub.patch.touching_interfaces);
    const double dtv = static_cast<double>(before.jumps[0] - after.jumps[0]) * before.measure[0] +
                       static_cast<double>(before.jumps[1] - after.jumps[1]) * before.measure[1];
    return lin + sub.alpha * dtv;
}

void verify_candidate(const TrustRegionSubproblem& sub, const CandidateStep& step)
{
    // pred_of enforces off-patch equality
    (void)pred_of(sub, step.trial);
    if (l1_distance(step.trial, sub.base) > sub.radius) {
        throw ContractViolation(fmt::format("trial leaves the trust region: |w - base|_L1 = {} > {}",
                                            l1_distance(step.trial, sub.base), sub.radius));
    }
    if (!step.trial.feasible(sub.values)) {
        throw ContractViolation("trial takes values outside W");
    }
    if (step.pred < 0.0) {
        throw ContractViolation("negative predicted reduction");
    }
}

namespace detail {

CandidateStep finalize(const TrustRegionSubproblem& sub, std::vector<int> trial_values, SolverStats stats)
{
    ControlField trial(sub.base.grid_ptr(), std::move(trial_values));
    double pred = pred_of(sub, trial);
    if (!(pred > 0.0)) {
        return CandidateStep{sub.base, 0.0, std::nullopt, 0, sub.patch.id, stats};
    }
    return CandidateStep{std::move(trial), pred, std::nullopt, 0, sub.patch.id, stats};
}

} // namespace detail

CandidateStep solve(const TrustRegionSubproblem& sub, SolverKind kind, const SolveOptions& opts)
{
    if (kind == SolverKind::Auto) {
        kind = sub.base.grid().dim() == 1 ? SolverKind::Dp1d : SolverKind::Frontier2d;
    }
    switch (kind) {
    case SolverKind::Dp1d: return solve_dp_1d(sub, opts);
    case SolverKind::Frontier2d: return solve_frontier_2d(sub, opts);
    case SolverKind::Dfs2d: return solve_dfs_2d(sub, opts);
    case SolverKind::BruteForce: return solve_bruteforce(sub);
    case SolverKind::Auto: break;
    }
    throw InvalidArgument("unsupported solver kind");
}

} // namespace bslip
