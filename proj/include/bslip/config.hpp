#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bslip/grid.hpp"
#include "bslip/model.hpp"
#include "bslip/patches.hpp"
#include "bslip/slip.hpp"

namespace bslip {

// Run configuration, read from JSON. Every field has a default; model kind
// selects kind-specific defaults for the grid, value set, patch overlap and
// iteration cap.
struct RunConfig {
    struct ModelSection {
        ModelKind kind = ModelKind::Conv1d;
        double alpha = 5e-4;
        std::vector<int> values;       // W
        double tau = 0.1;              // conv1d kernel time constant
        double eps = 4e-2;             // pde2d diffusion
        double c2 = 2.0;               // pde2d reaction
        std::string target = "reference";  // pde2d: reference | zero
        std::vector<double> quadratic_target;  // one value per cell, or one value for all
    } model;

    struct GridSection {
        int dim = 1;
        std::vector<int> n;
        std::vector<double> lower;
        std::vector<double> upper;
    } grid;

    struct PatchSection {
        std::vector<int> counts;       // per axis
        std::vector<double> overlap;   // per axis
        bool strict = true;
    } patches;

    struct AlgorithmSection {
        double delta0 = 0.125;
        double sigma = 1e-4;
        int max_outer_iters = 1000;
        std::optional<double> lipschitz;
        std::optional<int> k_cap;
        SolverKind solver = SolverKind::Auto;
        bool parallel_tabulation = false;
        ExecPolicy exec = ExecPolicy::Serial;
        int dfs_cell_cap = 25;
        std::string start = "zero";    // zero | min | max
    } algorithm;

    struct OutputSection {
        std::string dir = "out";
        std::string log = "iterations.jsonl";
        std::string summary = "summary.csv";
        std::string result = "result.json";
        bool pgm = true;
    } output;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);

GridPtr make_grid(const RunConfig& cfg);
std::unique_ptr<Model> make_model(const RunConfig& cfg, GridPtr grid);
PatchSet make_patches(const RunConfig& cfg, GridPtr grid);
SlipConfig make_slip_config(const RunConfig& cfg);
ValueSet make_values(const RunConfig& cfg);
ControlField make_start(const RunConfig& cfg, GridPtr grid);

// Patch counts per axis for a total of n patches: {n} in 1D, {r, r} with
// r * r = n in 2D.
std::vector<int> patch_counts_for(int dim, int n_patches);

} // namespace bslip
