#include "bslip/control.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "bslip/errors.hpp"

namespace bslip {

ValueSet::ValueSet(std::vector<int> values) : values_(std::move(values))
{
    if (values_.empty()) {
        throw InvalidArgument("value set must be nonempty");
    }
    for (std::size_t i = 1; i < values_.size(); ++i) {
        if (values_[i] <= values_[i - 1]) {
            throw InvalidArgument("value set must be strictly increasing");
        }
    }
}

bool ValueSet::contains(int v) const
{
    return std::binary_search(values_.begin(), values_.end(), v);
}

std::optional<int> ValueSet::index_of(int v) const
{
    auto it = std::lower_bound(values_.begin(), values_.end(), v);
    if (it == values_.end() || *it != v) {
        return std::nullopt;
    }
    return static_cast<int>(it - values_.begin());
}

int ValueSet::closest_to_zero() const
{
    int best = values_.front();
    for (int v : values_) {
        if (std::abs(v) < std::abs(best)) best = v;
    }
    return best;
}

ControlField::ControlField(GridPtr grid, std::vector<int> values)
    : grid_(std::move(grid)), values_(std::move(values))
{
    if (!grid_) {
        throw InvalidArgument("control field needs a grid");
    }
    if (static_cast<int>(values_.size()) != grid_->cell_count()) {
        throw InvalidArgument("control field has " + std::to_string(values_.size()) +
                              " values for a grid with " + std::to_string(grid_->cell_count()) + " cells");
    }
}

ControlField ControlField::constant(GridPtr grid, int value)
{
    const int n = grid->cell_count();
    return ControlField(std::move(grid), std::vector<int>(static_cast<std::size_t>(n), value));
}

bool ControlField::feasible(const ValueSet& w) const
{
    return std::all_of(values_.begin(), values_.end(), [&](int v) { return w.contains(v); });
}

std::vector<double> ControlField::as_real() const
{
    return {values_.begin(), values_.end()};
}

bool ControlField::operator==(const ControlField& other) const
{
    return (grid_ == other.grid_ || *grid_ == *other.grid_) && values_ == other.values_;
}

namespace {

void require_same_grid(const ControlField& a, const ControlField& b)
{
    if (a.grid_ptr() != b.grid_ptr() && !(a.grid() == b.grid())) {
        throw InvalidArgument("control fields live on different grids");
    }
}

} // namespace

TvTally tv_tally(const ControlField& field)
{
    const Grid& g = field.grid();
    TvTally t;
    t.measure = {g.interface_measure(0), g.interface_measure(1)};
    for (const Interface& f : g.interfaces()) {
        t.jumps[f.axis] += std::abs(field[f.cell_a] - field[f.cell_b]);
    }
    return t;
}

TvTally tv_tally_restricted(const ControlField& field, std::span<const int> interface_ids)
{
    const Grid& g = field.grid();
    const auto faces = g.interfaces();
    TvTally t;
    t.measure = {g.interface_measure(0), g.interface_measure(1)};
    for (int id : interface_ids) {
        if (id < 0 || id >= static_cast<int>(faces.size())) {
            throw InvalidArgument("interface " + std::to_string(id) + " is not part of the grid");
        }
        const Interface& f = faces[id];
        t.jumps[f.axis] += std::abs(field[f.cell_a] - field[f.cell_b]);
    }
    return t;
}

double tv(const ControlField& field, std::optional<double> alpha)
{
    const double v = tv_tally(field).value();
    return alpha ? *alpha * v : v;
}

double tv_restricted(const ControlField& field, std::span<const int> interface_ids)
{
    return tv_tally_restricted(field, interface_ids).value();
}

std::int64_t l1_units(const ControlField& a, const ControlField& b)
{
    require_same_grid(a, b);
    std::int64_t s = 0;
    for (int i = 0; i < a.size(); ++i) {
        s += std::abs(a[i] - b[i]);
    }
    return s;
}

double l1_distance(const ControlField& a, const ControlField& b)
{
    return static_cast<double>(l1_units(a, b)) * a.grid().cell_volume();
}

ControlField splice(const ControlField& base, std::span<const int> patch_cells, const ControlField& donor)
{
    require_same_grid(base, donor);
    std::vector<int> out(base.values().begin(), base.values().end());
    for (int c : patch_cells) {
        if (!base.grid().valid_cell(c)) {
            throw InvalidArgument("patch cell out of range");
        }
        out[c] = donor[c];
    }
    return ControlField(base.grid_ptr(), std::move(out));
}

} // namespace bslip
