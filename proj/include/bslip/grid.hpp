#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace bslip {

inline constexpr int kMaxDim = 2;

// Axis-aligned box; only the first `dim` axes are meaningful.
struct Box {
    std::array<double, kMaxDim> lower{0.0, 0.0};
    std::array<double, kMaxDim> upper{1.0, 1.0};

    double extent(int axis) const { return upper[axis] - lower[axis]; }
    bool operator==(const Box&) const = default;
};

struct Interface {
    int cell_a;   // lower cell index
    int cell_b;   // upper cell index, the +1 neighbor along `axis`
    int axis;     // axis along which cell_a and cell_b are adjacent
    double measure;
};

struct MultiIndex {
    int ix = 0;
    int iy = 0;
    bool operator==(const MultiIndex&) const = default;
};

// Uniform tensor grid on a box in 1D or 2D. Cells are numbered row-major with
// x fastest: index = iy * nx + ix. Immutable after construction.
class Grid {
public:
    Grid(int dim, const Box& domain, std::array<int, kMaxDim> n_per_axis);

    int dim() const { return dim_; }
    const Box& domain() const { return domain_; }
    int n(int axis) const { return n_[axis]; }
    int nx() const { return n_[0]; }
    int ny() const { return n_[1]; }
    int cell_count() const { return cell_count_; }
    double spacing(int axis) const { return h_[axis]; }
    double cell_volume() const { return cell_volume_; }

    // Measure of an interface separating neighbors along `axis`: 1 in 1D,
    // the transverse edge length in 2D.
    double interface_measure(int axis) const { return measure_[axis]; }

    std::span<const Interface> interfaces() const { return interfaces_; }

    int cell_index(int ix, int iy = 0) const { return iy * n_[0] + ix; }
    MultiIndex multi_index(int cell) const;
    bool valid_cell(int cell) const { return cell >= 0 && cell < cell_count_; }

    std::array<double, kMaxDim> cell_center(int cell) const;
    Box cell_box(int cell) const;

    // Axis-adjacent cells in ascending index order.
    std::vector<int> neighbors(int cell) const;

    // Index into interfaces() of the interface between a and b, or -1.
    int interface_between(int a, int b) const;

    bool operator==(const Grid& other) const;

private:
    int dim_;
    Box domain_;
    std::array<int, kMaxDim> n_;
    std::array<double, kMaxDim> h_;
    std::array<double, kMaxDim> measure_;
    int cell_count_;
    double cell_volume_;
    std::vector<Interface> interfaces_;
    // per cell: interface index to the +x / +y neighbor, -1 if none
    std::vector<std::array<int, kMaxDim>> upper_iface_;
};

using GridPtr = std::shared_ptr<const Grid>;

// Validates the arguments and builds a shared immutable grid. For dim == 1
// only domain axis 0 and n_per_axis[0] are read.
GridPtr build_grid(int dim, const Box& domain, std::span<const int> n_per_axis);
GridPtr build_grid_1d(double lower, double upper, int n);
GridPtr build_grid_2d(const Box& domain, int nx, int ny);

} // namespace bslip
