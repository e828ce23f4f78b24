#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "bslip/grid.hpp"

namespace bslip {

// An axis-aligned box of the domain together with the grid cells whose
// interior meets it. Membership is always a rectangular block of cells.
struct Patch {
    int id = 0;
    Box box;
    std::array<int, kMaxDim> first{0, 0};  // inclusive cell range per axis
    std::array<int, kMaxDim> last{0, 0};
    std::vector<int> cells;                // ascending
    std::vector<int> interior_interfaces;  // both cells in the patch
    std::vector<int> boundary_interfaces;  // exactly one cell in the patch
    std::vector<int> touching_interfaces;  // union of the two, ascending

    int width() const { return last[0] - first[0] + 1; }
    int height() const { return last[1] - first[1] + 1; }
    bool contains(const Grid& grid, int cell) const;
};

Patch make_patch(const Grid& grid, const Box& box, int id);
Patch whole_domain_patch(const Grid& grid);

struct CoverReport {
    bool ok = true;
    std::vector<int> uncovered;            // cells in no patch
    std::vector<int> split_neighborhoods;  // cells whose closed neighborhood lies in no single patch

    std::string summary() const;
};

struct PatchSet {
    GridPtr grid;
    std::vector<Patch> patches;
    std::array<int, kMaxDim> counts{1, 1};
    std::array<double, kMaxDim> overlap{0.0, 0.0};

    int size() const { return static_cast<int>(patches.size()); }
};

// n_per_axis patches of equal length per axis; neighbors share a strip of
// width overlap_per_axis. Patch i along an axis of length L starts at
// i (L - o) / n and has length (L + (n - 1) o) / n. Patches are numbered
// row-major (x fastest). When `strict` is set, a cover or strong-overlap
// failure throws CoverViolation.
PatchSet make_uniform_patches(GridPtr grid, std::span<const int> n_per_axis,
                              std::span<const double> overlap_per_axis, bool strict = true);

PatchSet single_patch(GridPtr grid);

CoverReport validate_cover(const PatchSet& patches, const Grid& grid);

} // namespace bslip
