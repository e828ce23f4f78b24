// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "bslip/config.hpp"
#include "bslip/errors.hpp"
#include "bslip/slip.hpp"
#include "bslip/trsub.hpp"
#include "support.hpp"

using namespace bslip;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct SuiteRun {
    std::string label;
    int n_patches = 0;
    int max_iters = 0;
    double sigma = 0.0;
    double cell_volume = 0.0;
    double delta0 = 0.0;
    std::optional<RunResult> result;
    std::string error;  // invariant violations raised inside the run
};

std::vector<SuiteRun> g_runs;  // shared by criteria 4, 5, 6 and 8

// ---------------------------------------------------------------------------

Outcome oracle_1d()
{
    std::mt19937_64 rng(1001);
    int mismatches = 0;
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        auto s = fixtures::random_1d(rng, 12, 3);
        const auto dp = solve_dp_1d(s.view());
        const auto bf = solve_bruteforce(s.view());
        verify_candidate(s.view(), dp);
        // trial-level comparison: same TV jumps would be too strong (ties),
        // so compare the optimal objective
        const double d = std::abs(dp.pred - bf.pred);
        worst = std::max(worst, d);
        if (d > 1e-12) ++mismatches;
    }
    return {mismatches == 0, fmt::format("500 instances, {} mismatches, max |pred diff| {:.1e}", mismatches, worst)};
}

Outcome oracle_2d()
{
    std::mt19937_64 rng(2002);
    int mismatches = 0;
    double worst = 0.0;
    int count = 0;
    for (int side : {3, 4}) {
        for (int m : {2, 3}) {
            for (int i = 0; i < 75; ++i, ++count) {
                auto s = fixtures::random_2d(rng, side, m);
                const auto step = solve_dfs_2d(s.view());
                verify_candidate(s.view(), step);
                const double oracle = fixtures::exhaustive_best_pred(s.view());
                double d = std::abs(step.pred - oracle);
                if (std::pow(m, side * side) <= double(1 << 24)) {
                    d = std::max(d, std::abs(step.pred - solve_bruteforce(s.view()).pred));
                }
                worst = std::max(worst, d);
                if (d > 1e-12) ++mismatches;
            }
        }
    }
    return {mismatches == 0,
            fmt::format("{} instances, {} mismatches, max |pred diff| {:.1e}", count, mismatches, worst)};
}

Outcome slip_equivalence()
{
    auto g = build_grid_1d(-1.0, 1.0, 512);
    Conv1dModel model(g);
    int bad = 0;
    std::string info;
    for (double alpha : {1.25e-4, 5e-4, 2e-3}) {
        Problem prob{model, ValueSet({-1, 0, 1}), alpha};
        SlipConfig cfg;
        cfg.keep_iterates = true;
        const auto w0 = default_start(g, prob.values);
        const auto block = run(prob, single_patch(g), cfg, w0);
        const auto ref = run_reference_slip(prob, cfg, w0);
        const bool same = block.iterates == ref.iterates && block.final_objective.J() == ref.final_objective.J() &&
                          block.final_objective.F == ref.final_objective.F &&
                          block.final_objective.tv_value() == ref.final_objective.tv_value();
        if (!same) ++bad;
        info += fmt::format(" a={}: {} iterates{}", alpha, block.iterates.size(), same ? "" : " DIFFER");
    }
    return {bad == 0, "bit-identical iterates and (J, F, TV);" + info};
}

// ---------------------------------------------------------------------------

void run_suite_member(const std::string& label, const RunConfig& cfg, int n_patches)
{
    SuiteRun r;
    r.label = label;
    r.n_patches = n_patches;
    r.max_iters = cfg.algorithm.max_outer_iters;
    r.sigma = cfg.algorithm.sigma;
    r.delta0 = cfg.algorithm.delta0;
    auto g = make_grid(cfg);
    r.cell_volume = g->cell_volume();
    auto model = make_model(cfg, g);
    Problem prob{*model, make_values(cfg), cfg.model.alpha};
    try {
        r.result = run(prob, make_patches(cfg, g), make_slip_config(cfg), make_start(cfg, g));
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    g_runs.push_back(std::move(r));
}

void run_suite()
{
    // 1D: alpha x patch count
    for (double alpha : {1.25e-4, 5e-4, 2e-3}) {
        for (int np : {1, 4, 9}) {
            RunConfig cfg = parse_config({{"model", {{"kind", "conv1d"}, {"alpha", alpha}}}});
            cfg.grid.n = {256};
            cfg.patches.counts = {np};
            run_suite_member(fmt::format("conv1d N=256 a={} Np={}", alpha, np), cfg, np);
        }
    }
    // 2D: N = 16 with 4 and 9 patches over a range of alpha, plus the
    // single-patch reference at alpha = 1e-3
    for (double alpha : {5e-4, 1e-3, 1.5e-3, 2e-3}) {
        for (int np : {4, 9}) {
            RunConfig cfg = parse_config({{"model", {{"kind", "pde2d"}, {"alpha", alpha}}}});
            cfg.patches.counts = patch_counts_for(2, np);
            run_suite_member(fmt::format("pde2d N=16 a={} Np={}", alpha, np), cfg, np);
        }
    }
    RunConfig cfg = parse_config({{"model", {{"kind", "pde2d"}, {"alpha", 1e-3}}}});
    cfg.patches.counts = {1, 1};
    run_suite_member("pde2d N=16 a=0.001 Np=1", cfg, 1);
}

Outcome monotone_descent()
{
    int bad = 0;
    std::string first_bad;
    for (const auto& r : g_runs) {
        if (!r.result) {
            ++bad;
            if (first_bad.empty()) first_bad = " first failure: " + r.label + " " + r.error;
            continue;
        }
        bool ok = r.error.empty() && r.result->reason == TerminationReason::Stationary &&
                  static_cast<int>(r.result->records.size()) <= r.max_iters;
        double prev = std::numeric_limits<double>::infinity();
        for (const auto& rec : r.result->records) {
            ok = ok && rec.J_before < prev;
            if (!rec.terminal) ok = ok && rec.J_after < rec.J_before;
            prev = rec.J_before;
        }
        if (!ok) {
            ++bad;
            if (first_bad.empty()) first_bad = " first failure: " + r.label + (r.error.empty() ? "" : " " + r.error);
        }
    }
    return {bad == 0 && g_runs.size() >= 12,
            fmt::format("{} configurations, {} failed{}", g_runs.size(), bad, first_bad)};
}

Outcome acceptance_soundness()
{
    int violations = 0;
    std::int64_t accepted = 0;
    for (const auto& r : g_runs) {
        if (!r.error.empty() || !r.result) {
            ++violations;
            continue;
        }
        for (const auto& rec : r.result->records) {
            bool any = false;
            for (const auto& s : rec.solved) {
                if (!s.accepted) continue;
                any = true;
                ++accepted;
                if (!(s.pred > 0.0 && s.ared >= r.sigma * s.pred)) ++violations;
            }
            if (any && rec.applied.empty()) ++violations;
            if (!any && !rec.terminal) ++violations;
        }
    }
    return {violations == 0, fmt::format("{} accepted steps checked, {} violations", accepted, violations)};
}

Outcome tabulation_bound()
{
    int violations = 0;
    double tightest = 0.0;
    for (const auto& r : g_runs) {
        if (!r.result) {
            ++violations;
            continue;
        }
        const int k_cap = static_cast<int>(std::ceil(std::log2(r.delta0 / r.cell_volume))) + 1;
        const std::int64_t bound = static_cast<std::int64_t>(r.n_patches) * (k_cap + 1);
        for (const auto& rec : r.result->records) {
            const auto solves = static_cast<std::int64_t>(rec.solved.size());
            if (solves > bound) ++violations;
            tightest = std::max(tightest, static_cast<double>(solves) / static_cast<double>(bound));
        }
    }
    return {violations == 0,
            fmt::format("{} iterations over the bound, largest solves/bound ratio {:.2f}", violations, tightest)};
}

Outcome gradient_fd()
{
    Conv1dModel conv(build_grid_1d(-1.0, 1.0, 64));
    Pde2dModel pde(build_grid_2d(Box{{0, 0}, {1, 1}}, 8, 8));
    const auto a = gradient_check(conv, ValueSet({-1, 0, 1}), 10, 77);
    const auto b = gradient_check(pde, ValueSet({0, 1}), 10, 78);
    return {a.max_rel_error <= 1e-6 && b.max_rel_error <= 1e-6 && a.points == 10 && b.points == 10,
            fmt::format("conv1d N=64 {:.2e}, pde2d N=8 {:.2e}", a.max_rel_error, b.max_rel_error)};
}

Outcome parity_2d()
{
    auto find = [](int np) -> const SuiteRun* {
        for (const auto& r : g_runs) {
            if (r.label == fmt::format("pde2d N=16 a=0.001 Np={}", np)) return &r;
        }
        return nullptr;
    };
    const SuiteRun* one = find(1);
    const SuiteRun* four = find(4);
    const SuiteRun* nine = find(9);
    if (!one || !four || !nine || !one->result || !four->result || !nine->result || !one->error.empty() || !four->error.empty() || !nine->error.empty()) {
        return {false, "missing run"};
    }
    const double j1 = one->result->final_objective.J();
    const double d4 = std::abs(four->result->final_objective.J() - j1) / j1;
    const double d9 = std::abs(nine->result->final_objective.J() - j1) / j1;
    const double secs = one->result->totals.wall_seconds + four->result->totals.wall_seconds +
                        nine->result->totals.wall_seconds;
    return {d4 <= 0.01 && d9 <= 0.01 && secs < 300.0,
            fmt::format("J(1) = {:.8f}, rel diff Np=4 {:.2e}, Np=9 {:.2e}, {:.1f} s of runs", j1, d4, d9, secs)};
}

Outcome tv_invariance()
{
    std::mt19937_64 rng(9009);
    int failures = 0;
    int cases = 0;
    auto random_grid = [&](int dim) {
        std::uniform_int_distribution<int> n(1, 9);
        return dim == 1 ? build_grid_1d(0.0, 1.0 + rng() % 3, n(rng))
                        : build_grid_2d(Box{{0, 0}, {1.0 + rng() % 2, 1.0}}, n(rng), n(rng));
    };
    const ValueSet w({-2, -1, 0, 1, 3});
    for (int i = 0; i < 200; ++i, ++cases) {
        // shift
        auto g = random_grid(1 + i % 2);
        ControlField f(g, fixtures::random_field(rng, g->cell_count(), w));
        const int c = static_cast<int>(rng() % 11) - 5;
        std::vector<int> shifted(f.values().begin(), f.values().end());
        for (int& v : shifted) v += c;
        if (tv(ControlField(g, shifted)) != tv(f)) ++failures;
    }
    for (int i = 0; i < 200; ++i, ++cases) {
        // reflection along each axis
        auto g = random_grid(1 + i % 2);
        ControlField f(g, fixtures::random_field(rng, g->cell_count(), w));
        for (int axis = 0; axis < g->dim(); ++axis) {
            std::vector<int> m(static_cast<std::size_t>(g->cell_count()));
            for (int cell = 0; cell < g->cell_count(); ++cell) {
                auto mi = g->multi_index(cell);
                if (axis == 0) mi.ix = g->nx() - 1 - mi.ix;
                else mi.iy = g->ny() - 1 - mi.iy;
                m[g->cell_index(mi.ix, mi.iy)] = f[cell];
            }
            if (tv(ControlField(g, m)) != tv(f)) ++failures;
        }
    }
    for (int i = 0; i < 200; ++i, ++cases) {
        auto g = random_grid(1 + i % 2);
        if (tv(ControlField::constant(g, w[static_cast<int>(rng() % 5)])) != 0.0) ++failures;
    }
    for (int i = 0; i < 200; ++i, ++cases) {
        // restricted additivity over a random partition
        auto g = random_grid(1 + i % 2);
        ControlField f(g, fixtures::random_field(rng, g->cell_count(), w));
        std::vector<int> a, b;
        for (int id = 0; id < static_cast<int>(g->interfaces().size()); ++id) (rng() % 2 ? a : b).push_back(id);
        const auto ta = tv_tally_restricted(f, a), tb = tv_tally_restricted(f, b), t = tv_tally(f);
        if (ta.jumps[0] + tb.jumps[0] != t.jumps[0] || ta.jumps[1] + tb.jumps[1] != t.jumps[1]) ++failures;
        if (std::abs(ta.value() + tb.value() - t.value()) > 1e-12) ++failures;
    }
    for (int i = 0; i < 200; ++i, ++cases) {
        // pred is monotone in the radius
        auto s = i % 2 ? fixtures::random_1d(rng, 12, 3) : fixtures::random_2d(rng, 3, 2 + i % 3);
        const double r1 = s.radius * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const double p2 = solve(s.view()).pred;
        s.radius = std::max(r1, 1e-9);
        const double p1 = solve(s.view()).pred;
        if (p1 > p2 + 1e-12) ++failures;
    }
    return {failures == 0, fmt::format("{} cases, {} failures", cases, failures)};
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 when unbounded
    std::function<Outcome()> check;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria = {
        {1, "1D subproblem solver equals brute force", 10.0, oracle_1d},
        {2, "2D subproblem solver equals brute force", 60.0, oracle_2d},
        {3, "one-patch block-SLIP reproduces plain SLIP", 120.0, slip_equivalence},
        {4, "monotone descent and stationary termination", 0.0, monotone_descent},
        {5, "acceptance soundness", 0.0, acceptance_soundness},
        {6, "solves per outer iteration within Np (k_cap + 1)", 0.0, tabulation_bound},
        {7, "gradient finite-difference check", 30.0, gradient_fd},
        {8, "2D objective parity across patch counts", 300.0, parity_2d},
        {9, "TV invariance suite", 5.0, tv_invariance},
    };

    const auto t0 = std::chrono::steady_clock::now();
    run_suite();
    const double suite_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("suite: %zu block-SLIP runs in %.1f s\n", g_runs.size(), suite_s);

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.limit_s == 0.0 || secs < c.limit_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("criterion %d %s: %s (%s; %.2f s%s)\n", c.id, c.name, pass ? "PASS" : "FAIL", o.detail.c_str(),
                    secs, in_time ? "" : ", over time limit");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
