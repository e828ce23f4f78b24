#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "bslip/control.hpp"
#include "bslip/patches.hpp"
#include "bslip/slip.hpp"

namespace bslip {

// Integers in cell order, one row per grid row (a single line in 1D).
void write_field_csv(const ControlField& field, std::ostream& out);
ControlField read_field_csv(GridPtr grid, const std::filesystem::path& path);

// ASCII PGM (P2), W mapped linearly onto [0, 255]; image row 0 is the top
// row of cells.
void write_pgm(const ControlField& field, const ValueSet& values, std::ostream& out);
void write_pgm(const ControlField& field, const ValueSet& values, const std::filesystem::path& path);

// Nodal values on an (nx+1) x (ny+1) vertex grid, one CSV row per grid row.
void write_nodal_csv(std::span<const double> values, int nx, int ny, const std::filesystem::path& path);

nlohmann::json to_json(const PatchSet& patches);
nlohmann::json to_json(const IterationRecord& rec);
nlohmann::json to_json(const RunResult& result);

struct SummaryRow {
    int n_cells = 0;
    int n_patches = 0;
    double alpha = 0.0;
    double J = 0.0;
    double F = 0.0;
    double TV = 0.0;
    std::int64_t n_subproblems = 0;
    double wall_s = 0.0;
    std::string reason;
};

SummaryRow summarize(const RunResult& result, int n_patches, double alpha);
std::string summary_header();
std::string summary_line(const SummaryRow& row);

} // namespace bslip
