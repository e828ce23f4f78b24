#include <string>

#include "bslip/errors.hpp"
#include "bslip/model.hpp"

namespace bslip {

QuadraticModel::QuadraticModel(GridPtr grid, std::vector<double> target)
    : Model(std::move(grid)), target_(std::move(target))
{
    if (static_cast<int>(target_.size()) != grid_->cell_count()) {
        throw InvalidArgument("quadratic target needs one value per cell, got " + std::to_string(target_.size()));
    }
}

double QuadraticModel::objective(std::span<const double> w) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < target_.size(); ++i) {
        const double d = w[i] - target_[i];
        s += d * d;
    }
    return 0.5 * grid_->cell_volume() * s;
}

std::vector<double> QuadraticModel::gradient(std::span<const double> w) const
{
    std::vector<double> g(target_.size());
    for (std::size_t i = 0; i < target_.size(); ++i) {
        g[i] = w[i] - target_[i];
    }
    return g;
}

double QuadraticModel::lipschitz_bound(const ValueSet&) const
{
    return 1.0 / grid_->cell_volume();
}

} // namespace bslip
