#include "bslip/grid.hpp"

#include <cmath>
#include <string>

#include "bslip/errors.hpp"

namespace bslip {

Grid::Grid(int dim, const Box& domain, std::array<int, kMaxDim> n_per_axis)
    : dim_(dim), domain_(domain), n_(n_per_axis)
{
    if (dim != 1 && dim != 2) {
        throw InvalidArgument("grid dimension must be 1 or 2, got " + std::to_string(dim));
    }
    if (dim == 1) {
        n_[1] = 1;
        domain_.lower[1] = 0.0;
        domain_.upper[1] = 1.0;
    }
    for (int a = 0; a < dim_; ++a) {
        if (n_[a] < 1) {
            throw InvalidArgument("cell count per axis must be positive");
        }
        if (!(domain_.extent(a) > 0.0) || !std::isfinite(domain_.extent(a))) {
            throw InvalidArgument("domain extent must be positive and finite");
        }
    }
    cell_count_ = n_[0] * n_[1];
    h_[0] = domain_.extent(0) / n_[0];
    h_[1] = dim_ == 2 ? domain_.extent(1) / n_[1] : 1.0;
    cell_volume_ = dim_ == 2 ? h_[0] * h_[1] : h_[0];
    if (dim_ == 1) {
        measure_ = {1.0, 0.0};
    } else {
        measure_ = {h_[1], h_[0]};
    }

    upper_iface_.assign(cell_count_, {-1, -1});
    interfaces_.reserve(static_cast<std::size_t>(2 * cell_count_));
    for (int c = 0; c < cell_count_; ++c) {
        const MultiIndex m = multi_index(c);
        if (m.ix + 1 < n_[0]) {
            upper_iface_[c][0] = static_cast<int>(interfaces_.size());
            interfaces_.push_back({c, c + 1, 0, measure_[0]});
        }
        if (dim_ == 2 && m.iy + 1 < n_[1]) {
            upper_iface_[c][1] = static_cast<int>(interfaces_.size());
            interfaces_.push_back({c, c + n_[0], 1, measure_[1]});
        }
    }
}

MultiIndex Grid::multi_index(int cell) const
{
    return {cell % n_[0], cell / n_[0]};
}

std::array<double, kMaxDim> Grid::cell_center(int cell) const
{
    const MultiIndex m = multi_index(cell);
    return {domain_.lower[0] + (m.ix + 0.5) * h_[0],
            dim_ == 2 ? domain_.lower[1] + (m.iy + 0.5) * h_[1] : 0.0};
}

Box Grid::cell_box(int cell) const
{
    const MultiIndex m = multi_index(cell);
    Box b;
    b.lower = {domain_.lower[0] + m.ix * h_[0], domain_.lower[1] + m.iy * h_[1]};
    b.upper = {domain_.lower[0] + (m.ix + 1) * h_[0], domain_.lower[1] + (m.iy + 1) * h_[1]};
    return b;
}

std::vector<int> Grid::neighbors(int cell) const
{
    if (!valid_cell(cell)) {
        throw InvalidArgument("cell index " + std::to_string(cell) + " out of range");
    }
    const MultiIndex m = multi_index(cell);
    std::vector<int> out;
    out.reserve(4);
    if (m.iy > 0) out.push_back(cell - n_[0]);
    if (m.ix > 0) out.push_back(cell - 1);
    if (m.ix + 1 < n_[0]) out.push_back(cell + 1);
    if (m.iy + 1 < n_[1]) out.push_back(cell + n_[0]);
    return out;
}

int Grid::interface_between(int a, int b) const
{
    if (!valid_cell(a) || !valid_cell(b)) {
        return -1;
    }
    if (a > b) std::swap(a, b);
    for (int axis = 0; axis < dim_; ++axis) {
        const int idx = upper_iface_[a][axis];
        if (idx >= 0 && interfaces_[idx].cell_b == b) {
            return idx;
        }
    }
    return -1;
}

bool Grid::operator==(const Grid& other) const
{
    return dim_ == other.dim_ && domain_ == other.domain_ && n_ == other.n_;
}

GridPtr build_grid(int dim, const Box& domain, std::span<const int> n_per_axis)
{
    if (dim != 1 && dim != 2) {
        throw InvalidArgument("grid dimension must be 1 or 2");
    }
    if (n_per_axis.size() < static_cast<std::size_t>(dim)) {
        throw InvalidArgument("need one cell count per axis");
    }
    std::array<int, kMaxDim> n{n_per_axis[0], dim == 2 ? n_per_axis[1] : 1};
    return std::make_shared<const Grid>(dim, domain, n);
}

GridPtr build_grid_1d(double lower, double upper, int n)
{
    Box b;
    b.lower = {lower, 0.0};
    b.upper = {upper, 1.0};
    const int counts[] = {n};
    return build_grid(1, b, counts);
}

GridPtr build_grid_2d(const Box& domain, int nx, int ny)
{
    const int counts[] = {nx, ny};
    return build_grid(2, domain, counts);
}

} // namespace bslip
