#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bslip/grid.hpp"

namespace bslip {

// The admissible integer values W = {w_1 < ... < w_M}.
class ValueSet {
public:
    explicit ValueSet(std::vector<int> values);

    std::span<const int> values() const { return values_; }
    int size() const { return static_cast<int>(values_.size()); }
    int operator[](int m) const { return values_[m]; }
    int min() const { return values_.front(); }
    int max() const { return values_.back(); }
    int range() const { return values_.back() - values_.front(); }
    bool contains(int v) const;
    // Position of v in the set, or nullopt.
    std::optional<int> index_of(int v) const;
    // Element with the smallest magnitude; ties go to the smaller element.
    int closest_to_zero() const;

    bool operator==(const ValueSet&) const = default;

private:
    std::vector<int> values_;
};

// Integer piecewise-constant control: one value per grid cell.
class ControlField {
public:
    ControlField(GridPtr grid, std::vector<int> values);

    static ControlField constant(GridPtr grid, int value);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    std::span<const int> values() const { return values_; }
    std::vector<int>& mutable_values() { return values_; }
    int operator[](int cell) const { return values_[cell]; }
    int size() const { return static_cast<int>(values_.size()); }

    bool feasible(const ValueSet& w) const;
    std::vector<double> as_real() const;

    bool operator==(const ControlField& other) const;

private:
    GridPtr grid_;
    std::vector<int> values_;
};

// Total variation kept as integer jump sums per interface orientation so
// that comparisons between fields do not accumulate rounding drift.
struct TvTally {
    std::array<std::int64_t, kMaxDim> jumps{0, 0};
    std::array<double, kMaxDim> measure{0.0, 0.0};

    double value() const
    {
        return static_cast<double>(jumps[0]) * measure[0] + static_cast<double>(jumps[1]) * measure[1];
    }
};

TvTally tv_tally(const ControlField& field);
TvTally tv_tally_restricted(const ControlField& field, std::span<const int> interface_ids);

// Anisotropic TV: sum over interior interfaces of measure * |jump|, times
// alpha when given.
double tv(const ControlField& field, std::optional<double> alpha = std::nullopt);
double tv_restricted(const ControlField& field, std::span<const int> interface_ids);

// Sum of |a_i - b_i| over cells (integer units of cell volume).
std::int64_t l1_units(const ControlField& a, const ControlField& b);
double l1_distance(const ControlField& a, const ControlField& b);

// donor on patch_cells, base elsewhere.
ControlField splice(const ControlField& base, std::span<const int> patch_cells, const ControlField& donor);

} // namespace bslip
