#include "bslip/patches.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/spdlog.h>

#include "bslip/errors.hpp"

namespace bslip {

namespace {

// Cells along `axis` whose open interval meets the open interval (lo, hi).
std::pair<int, int> cell_range(const Grid& grid, int axis, double lo, double hi)
{
    const double origin = grid.domain().lower[axis];
    const double h = grid.spacing(axis);
    const double tol = 1e-9 * h;
    int first = grid.n(axis);
    int last = -1;
    for (int j = 0; j < grid.n(axis); ++j) {
        const double a = origin + j * h;
        const double b = origin + (j + 1) * h;
        if (a < hi - tol && b > lo + tol) {
            first = std::min(first, j);
            last = std::max(last, j);
        }
    }
    return {first, last};
}

} // namespace

bool Patch::contains(const Grid& grid, int cell) const
{
    const MultiIndex m = grid.multi_index(cell);
    return m.ix >= first[0] && m.ix <= last[0] && m.iy >= first[1] && m.iy <= last[1];
}

Patch make_patch(const Grid& grid, const Box& box, int id)
{
    Patch p;
    p.id = id;
    p.box = box;
    for (int a = 0; a < grid.dim(); ++a) {
        const double tol = 1e-9 * grid.spacing(a);
        if (box.lower[a] < grid.domain().lower[a] - tol || box.upper[a] > grid.domain().upper[a] + tol) {
            throw InvalidArgument(fmt::format("patch box [{}, {}] on axis {} leaves the domain",
                                              box.lower[a], box.upper[a], a));
        }
        if (!(box.upper[a] > box.lower[a])) {
            throw InvalidArgument("patch box must have positive extent");
        }
        auto [f, l] = cell_range(grid, a, box.lower[a], box.upper[a]);
        if (l < f) {
            throw InvalidArgument("patch box contains no cell");
        }
        p.first[a] = f;
        p.last[a] = l;
    }
    if (grid.dim() == 1) {
        p.first[1] = p.last[1] = 0;
    }
    for (int iy = p.first[1]; iy <= p.last[1]; ++iy) {
        for (int ix = p.first[0]; ix <= p.last[0]; ++ix) {
            p.cells.push_back(grid.cell_index(ix, iy));
        }
    }
    const auto faces = grid.interfaces();
    for (int i = 0; i < static_cast<int>(faces.size()); ++i) {
        const bool in_a = p.contains(grid, faces[i].cell_a);
        const bool in_b = p.contains(grid, faces[i].cell_b);
        if (in_a && in_b) {
            p.interior_interfaces.push_back(i);
        } else if (in_a || in_b) {
            p.boundary_interfaces.push_back(i);
        }
        if (in_a || in_b) {
            p.touching_interfaces.push_back(i);
        }
    }
    return p;
}

Patch whole_domain_patch(const Grid& grid)
{
    return make_patch(grid, grid.domain(), 0);
}

std::string CoverReport::summary() const
{
    if (ok) {
        return "patch cover ok";
    }
    return fmt::format("patch cover invalid: {} uncovered cells {}, {} cells without a patch containing their "
                       "neighborhood {}",
                       uncovered.size(), uncovered, split_neighborhoods.size(), split_neighborhoods);
}

CoverReport validate_cover(const PatchSet& patches, const Grid& grid)
{
    CoverReport report;
    for (int c = 0; c < grid.cell_count(); ++c) {
        bool covered = false;
        bool strong = false;
        const auto nb = grid.neighbors(c);
        for (const Patch& p : patches.patches) {
            if (!p.contains(grid, c)) continue;
            covered = true;
            if (std::all_of(nb.begin(), nb.end(), [&](int n) { return p.contains(grid, n); })) {
                strong = true;
                break;
            }
        }
        if (!covered) report.uncovered.push_back(c);
        if (!strong) report.split_neighborhoods.push_back(c);
    }
    report.ok = report.uncovered.empty() && report.split_neighborhoods.empty();
    return report;
}

PatchSet make_uniform_patches(GridPtr grid, std::span<const int> n_per_axis,
                              std::span<const double> overlap_per_axis, bool strict)
{
    const int dim = grid->dim();
    if (static_cast<int>(n_per_axis.size()) < dim || static_cast<int>(overlap_per_axis.size()) < dim) {
        throw InvalidArgument("need a patch count and an overlap per axis");
    }
    PatchSet set;
    set.grid = grid;
    std::array<std::vector<std::pair<double, double>>, kMaxDim> spans;
    for (int a = 0; a < kMaxDim; ++a) {
        if (a >= dim) {
            spans[a] = {{grid->domain().lower[a], grid->domain().upper[a]}};
            continue;
        }
        const int n = n_per_axis[a];
        const double o = overlap_per_axis[a];
        const double L = grid->domain().extent(a);
        if (n < 1) throw InvalidArgument("patch count per axis must be positive");
        if (o < 0.0) throw InvalidArgument("patch overlap must be nonnegative");
        if (n > 1 && o >= L) throw InvalidArgument("patch overlap must be smaller than the domain extent");
        set.counts[a] = n;
        set.overlap[a] = o;
        const double len = n == 1 ? L : (L + (n - 1) * o) / n;
        const double lo = grid->domain().lower[a];
        for (int i = 0; i < n; ++i) {
            const double start = lo + i * (L - o) / n;
            const double end = i + 1 == n ? grid->domain().upper[a] : start + len;
            spans[a].emplace_back(start, end);
        }
    }
    int id = 0;
    for (const auto& [ylo, yhi] : spans[1]) {
        for (const auto& [xlo, xhi] : spans[0]) {
            Box b;
            b.lower = {xlo, ylo};
            b.upper = {xhi, yhi};
            set.patches.push_back(make_patch(*grid, b, id++));
        }
    }
    const CoverReport report = validate_cover(set, *grid);
    if (!report.ok) {
        if (strict) throw CoverViolation(report.summary());
        spdlog::warn("{}", report.summary());
    }
    return set;
}

PatchSet single_patch(GridPtr grid)
{
    PatchSet set;
    set.patches.push_back(whole_domain_patch(*grid));
    set.grid = std::move(grid);
    return set;
}

} // namespace bslip
