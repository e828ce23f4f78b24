// Command-line front end: run a configuration, check gradients, solve a
// stored subproblem, or sweep the benchmark suites.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "bslip/config.hpp"
#include "bslip/errors.hpp"
#include "bslip/io.hpp"
#include "bslip/log.hpp"
#include "bslip/slip.hpp"
#include "bslip/trsub_io.hpp"

namespace fs = std::filesystem;
using namespace bslip;

namespace {

int cmd_run(const std::string& config_path)
{
    const RunConfig cfg = load_config(config_path);
    const GridPtr grid = make_grid(cfg);
    const auto model = make_model(cfg, grid);
    const PatchSet patches = make_patches(cfg, grid);
    const Problem problem{*model, make_values(cfg), cfg.model.alpha};
    const SlipConfig slip = make_slip_config(cfg);
    const ControlField w0 = make_start(cfg, grid);

    const fs::path dir = cfg.output.dir;
    fs::create_directories(dir);
    std::ofstream log(dir / cfg.output.log);
    if (!log) throw ConfigError("cannot write " + (dir / cfg.output.log).string());

    spdlog::info("running {} on {} cells with {} patches, alpha = {}", to_string(model->kind()),
                 grid->cell_count(), patches.size(), problem.alpha);
    const RunResult result = run(problem, patches, slip, w0, [&](const IterationRecord& rec) {
        log << to_json(rec).dump() << '\n';
    });

    const SummaryRow row = summarize(result, patches.size(), problem.alpha);
    {
        std::ofstream csv(dir / cfg.output.summary);
        csv << summary_header() << '\n' << summary_line(row) << '\n';
    }
    {
        std::ofstream out(dir / cfg.output.result);
        nlohmann::json j = to_json(result);
        j["config"] = to_json(cfg);
        out << j.dump(2) << '\n';
    }
    {
        std::ofstream out(dir / "final.csv");
        write_field_csv(result.final, out);
    }
    if (grid->dim() == 2 && cfg.output.pgm) {
        write_pgm(w0, problem.values, dir / "w0.pgm");
        write_pgm(result.final, problem.values, dir / "final.pgm");
    }
    if (const auto* pde = dynamic_cast<const Pde2dModel*>(model.get())) {
        const auto u = pde->solve_state(result.final.as_real());
        write_nodal_csv(u, grid->nx(), grid->ny(), dir / "u.csv");
        write_nodal_csv(pde->target_state(), grid->nx(), grid->ny(), dir / "u_d.csv");
    }
    std::cout << summary_header() << '\n' << summary_line(row) << '\n';
    return 0;
}

int cmd_gradcheck(const std::string& config_path, int points, std::uint64_t seed)
{
    const RunConfig cfg = load_config(config_path);
    const GridPtr grid = make_grid(cfg);
    const auto model = make_model(cfg, grid);
    const auto res = gradient_check(*model, make_values(cfg), points, seed);
    constexpr double tol = 1e-6;
    std::cout << fmt::format("model {} cells {} points {} max relative error {:.3e} (tolerance {:.0e})\n",
                             to_string(model->kind()), grid->cell_count(), res.points, res.max_rel_error, tol);
    return res.max_rel_error <= tol ? 0 : 1;
}

int cmd_subsolve(const std::string& path, const std::string& solver_override)
{
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open instance " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed instance: ") + e.what());
    }
    const SubproblemInstance inst = instance_from_json(j);
    const SolverKind kind = solver_override.empty() ? inst.solver : solver_kind_from_string(solver_override);
    const CandidateStep step = solve(inst.view(), kind);
    verify_candidate(inst.view(), step);
    std::cout << to_json(step, kind).dump(2) << '\n';
    return 0;
}

struct BenchOptions {
    int n = 0;
    std::string out;
    int max_iters = 0;
    bool parallel = false;
};

int cmd_bench(const std::string& suite, const BenchOptions& opts)
{
    RunConfig cfg;
    std::vector<double> alphas;
    if (suite == "oned") {
        cfg = parse_config({{"model", {{"kind", "conv1d"}}}});
        cfg.grid.n = {opts.n > 0 ? opts.n : 256};
        alphas = {1.25e-4, 5.0e-4, 2.0e-3};
    } else if (suite == "twod") {
        cfg = parse_config({{"model", {{"kind", "pde2d"}}}});
        const int n = opts.n > 0 ? opts.n : 16;
        cfg.grid.n = {n, n};
        alphas = {5e-4, 7.5e-4, 1e-3, 1.25e-3, 1.5e-3, 1.75e-3, 2e-3, 2.25e-3};
    } else {
        throw ConfigError("unknown bench suite '" + suite + "' (expected oned or twod)");
    }
    if (opts.max_iters > 0) cfg.algorithm.max_outer_iters = opts.max_iters;
    if (opts.parallel) {
        cfg.algorithm.exec = ExecPolicy::Parallel;
        cfg.algorithm.parallel_tabulation = true;
    }
    const GridPtr grid = make_grid(cfg);
    const auto model = make_model(cfg, grid);
    const ValueSet values = make_values(cfg);

    std::ofstream file;
    if (!opts.out.empty()) {
        fs::create_directories(opts.out);
        file.open(fs::path(opts.out) / fmt::format("bench_{}.csv", suite));
        file << summary_header() << '\n';
    }
    std::cout << summary_header() << '\n';
    for (int np : {1, 4, 9}) {
        cfg.patches.counts = patch_counts_for(cfg.grid.dim, np);
        const PatchSet patches = make_patches(cfg, grid);
        for (double alpha : alphas) {
            const Problem problem{*model, values, alpha};
            const RunResult result = run(problem, patches, make_slip_config(cfg), make_start(cfg, grid));
            const std::string line = summary_line(summarize(result, patches.size(), alpha));
            std::cout << line << std::endl;
            if (file) file << line << '\n';
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    init_logging_from_env();
    CLI::App app{"block-SLIP: trust-region patch decomposition for TV-regularized integer control problems"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "run block-SLIP on a JSON configuration");
    run_cmd->add_option("config", config_path, "configuration file")->required();

    int points = 10;
    std::uint64_t seed = 7;
    auto* grad_cmd = app.add_subcommand("gradcheck", "finite-difference check of the model gradient");
    grad_cmd->add_option("config", config_path, "configuration file")->required();
    grad_cmd->add_option("--points", points, "random points");
    grad_cmd->add_option("--seed", seed, "random seed");

    std::string instance_path;
    std::string solver;
    auto* sub_cmd = app.add_subcommand("subsolve", "solve one serialized trust-region subproblem");
    sub_cmd->add_option("instance", instance_path, "instance JSON")->required();
    sub_cmd->add_option("--solver", solver, "override solver (dp1d, frontier2d, dfs2d, bruteforce, auto)");

    std::string suite;
    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "sweep alpha and patch counts for a benchmark suite");
    bench_cmd->add_option("suite", suite, "oned or twod")->required();
    bench_cmd->add_option("--n", bench.n, "cells per axis");
    bench_cmd->add_option("--out", bench.out, "directory for bench_<suite>.csv");
    bench_cmd->add_option("--max-iters", bench.max_iters, "outer iteration cap override");
    bench_cmd->add_flag("--parallel", bench.parallel, "OpenMP kernels and parallel tabulation");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return cmd_run(config_path);
        if (*grad_cmd) return cmd_gradcheck(config_path, points, seed);
        if (*sub_cmd) return cmd_subsolve(instance_path, solver);
        if (*bench_cmd) return cmd_bench(suite, bench);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
