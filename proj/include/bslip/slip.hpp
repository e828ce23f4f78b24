#pragma once

// Sequential linear integer programming with patch decomposition: every
// outer iteration tabulates trust-region steps on all patches (halving the
// radius per patch until a step is acceptable, provably useless, or
// dominated by an already accepted step), then applies accepted steps
// greedily in order of actual reduction.

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bslip/control.hpp"
#include "bslip/model.hpp"
#include "bslip/patches.hpp"
#include "bslip/trsub.hpp"

namespace bslip {

struct Problem {
    const Model& model;
    ValueSet values;
    double alpha = 0.0;
};

struct SlipConfig {
    double delta0 = 0.125;
    double sigma = 1e-4;
    int max_outer_iters = 1000;
    std::optional<int> k_cap;        // auto when empty
    std::optional<double> lipschitz; // model.lipschitz_bound when empty
    SolverKind solver = SolverKind::Auto;
    SolveOptions solve;
    // Solve same-level subproblems concurrently; bookkeeping stays in patch
    // order, so the iterate sequence is identical to the sequential run.
    bool parallel_tabulation = false;
    bool keep_iterates = false;

    // Throws InvalidArgument when sigma is outside (0,1) or delta0 <= 0.
    void validate() const;
};

// ceil(log2(delta0 / cell_volume)) + 1, clamped at 0. Level k_cap always
// has a radius below one cell volume.
int auto_k_cap(double delta0, double cell_volume);

struct SolveRecord {
    int k = 0;
    int patch = 0;
    double pred = 0.0;
    double ared = 0.0;
    bool accepted = false;
    bool refined = false;    // (k+1, patch) was queued
    bool dominated = false;  // pred > 0, not accepted, dropped by the domination test
};

struct AppliedRecord {
    int k = 0;
    int patch = 0;
    double J_after = 0.0;
};

struct IterationRecord {
    int n = 0;
    std::vector<SolveRecord> solved;
    std::vector<AppliedRecord> applied;
    double J_before = 0.0;
    double J_after = 0.0;
    double F = 0.0;       // at the new iterate
    double TV = 0.0;      // at the new iterate, unweighted
    bool terminal = false;
    bool greedy_break = false;  // greedy loop stopped on a non-improving step
};

enum class TerminationReason { Stationary, MaxOuterIters };

std::string to_string(TerminationReason r);

struct RunTotals {
    std::int64_t subproblems = 0;
    double wall_seconds = 0.0;
};

struct RunResult {
    ControlField final;
    std::vector<IterationRecord> records;
    TerminationReason reason = TerminationReason::Stationary;
    RunTotals totals;
    ObjectiveParts final_objective;
    int k_cap = 0;
    double lipschitz = 0.0;
    std::vector<ControlField> iterates;  // w^0, w^1, ... when keep_iterates
};

struct Tabulation {
    std::vector<CandidateStep> accepted;  // in insertion order, ared set
    std::vector<SolveRecord> solved;
};

// Inner tabulation loop for one outer iteration.
Tabulation tabulate(const ControlField& w_n, const GradientField& g_n, double J_n, const PatchSet& patches,
                    const Problem& problem, const SlipConfig& cfg, double lipschitz, int k_cap);

struct GreedyResult {
    ControlField next;
    std::vector<AppliedRecord> applied;
    bool stopped_on_increase = false;
};

// Applies accepted steps in order of decreasing ared (ties: smaller patch,
// then smaller k) while each application strictly lowers J.
GreedyResult greedy_apply(const ControlField& w_n, std::vector<CandidateStep> accepted, const Problem& problem,
                          const PatchSet& patches);

using IterationObserver = std::function<void(const IterationRecord&)>;

RunResult run(const Problem& problem, const PatchSet& patches, const SlipConfig& cfg, const ControlField& w0,
              const IterationObserver& observer = {});

// Plain single-domain SLIP (no patches, no tabulation); reference for the
// one-patch equivalence check.
RunResult run_reference_slip(const Problem& problem, const SlipConfig& cfg, const ControlField& w0);

// Default start: every cell at the element of W closest to zero.
ControlField default_start(GridPtr grid, const ValueSet& values);

} // namespace bslip
