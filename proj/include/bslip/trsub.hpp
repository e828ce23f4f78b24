#pragma once

// Exact solvers for the patch trust-region subproblem
//
//   min  (g, w - base)_{L2} + alpha TV(w) - alpha TV(base)
//   s.t. |w - base|_{L1} <= radius,  w in W on the patch,  w = base off the patch.
//
// Because W is integer, the L1 budget counts whole cell volumes, so every
// solver works with an integer budget and is exact.

#include <cstdint>
#include <optional>
#include <string>

#include "bslip/control.hpp"
#include "bslip/kernels.hpp"
#include "bslip/model.hpp"
#include "bslip/patches.hpp"

namespace bslip {

struct TrustRegionSubproblem {
    const ControlField& base;
    const GradientField& grad;
    const Patch& patch;
    double radius;
    double alpha;
    const ValueSet& values;
};

struct SolverStats {
    std::int64_t states = 0;  // DP states touched
    std::int64_t nodes = 0;   // search nodes (DFS / enumeration)
    int budget_units = 0;
};

struct CandidateStep {
    ControlField trial;
    double pred = 0.0;
    std::optional<double> ared;
    int k = 0;
    int patch_id = 0;
    SolverStats stats;
};

enum class SolverKind { Auto, Dp1d, Frontier2d, Dfs2d, BruteForce };

std::string to_string(SolverKind kind);
SolverKind solver_kind_from_string(const std::string& name);

struct SolveOptions {
    ExecPolicy exec = ExecPolicy::Serial;
    int dfs_cell_cap = 25;
    std::int64_t frontier_memory_cap = std::int64_t{1} << 30;  // bytes of back-pointers
};

// Throws InvalidArgument for inconsistent subproblem data.
void validate(const TrustRegionSubproblem& sub);

// Largest u with u * cell_volume <= radius, capped by what the patch can use.
int budget_units(const TrustRegionSubproblem& sub);

// (g, base - trial)_{L2} + alpha (TV(base) - TV(trial)), evaluated on the
// interfaces touching the patch only. Throws ContractViolation when the
// trial differs from the base off the patch.
double pred_of(const TrustRegionSubproblem& sub, const ControlField& trial);

// Checks the L1 ball and off-patch equality; throws ContractViolation.
void verify_candidate(const TrustRegionSubproblem& sub, const CandidateStep& step);

CandidateStep solve_dp_1d(const TrustRegionSubproblem& sub, const SolveOptions& opts = {});
CandidateStep solve_frontier_2d(const TrustRegionSubproblem& sub, const SolveOptions& opts = {});
CandidateStep solve_dfs_2d(const TrustRegionSubproblem& sub, const SolveOptions& opts = {});
// Exhaustive enumeration; test oracle for small patches.
CandidateStep solve_bruteforce(const TrustRegionSubproblem& sub);

// Auto picks the 1D dynamic program in 1D and the frontier DP in 2D.
CandidateStep solve(const TrustRegionSubproblem& sub, SolverKind kind = SolverKind::Auto,
                    const SolveOptions& opts = {});

} // namespace bslip
