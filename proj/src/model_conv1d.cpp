#include <algorithm>
#include <cmath>
#include <numbers>

#include "bslip/errors.hpp"
#include "bslip/model.hpp"

namespace bslip {

double conv1d_default_target(double t)
{
    return 0.2 * std::cos(2.0 * std::numbers::pi * t - 0.25) * std::exp(t);
}

Conv1dModel::Conv1dModel(GridPtr grid, Conv1dParams params) : Model(std::move(grid)), params_(std::move(params))
{
    if (grid_->dim() != 1) {
        throw InvalidArgument("conv1d model needs a 1D grid");
    }
    if (!params_.kernel) {
        if (!(params_.tau > 0.0)) {
            throw InvalidArgument("kernel time constant tau must be positive");
        }
        const double tau = params_.tau;
        params_.kernel = [tau](double s) { return std::exp(-s / tau); };
    }
    if (!params_.target) {
        params_.target = conv1d_default_target;
    }
    n_ = grid_->cell_count();
    const double h = grid_->cell_volume();
    a_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
    f_.resize(static_cast<std::size_t>(n_));
    for (int m = 0; m < n_; ++m) {
        const double tm = grid_->cell_center(m)[0];
        f_[m] = params_.target(tm);
        for (int j = 0; j < m; ++j) {
            const double tj = grid_->cell_center(j)[0];
            a_[static_cast<std::size_t>(m) * n_ + j] = h * params_.kernel(tm - tj);
        }
    }
}

std::vector<double> Conv1dModel::residual(std::span<const double> w) const
{
    std::vector<double> r(static_cast<std::size_t>(n_));
    kernels::matvec(params_.exec, a_, n_, n_, w, r);
    for (int m = 0; m < n_; ++m) {
        r[m] -= f_[m];
    }
    return r;
}

double Conv1dModel::objective(std::span<const double> w) const
{
    const auto r = residual(w);
    double s = 0.0;
    for (double x : r) s += x * x;
    return 0.5 * grid_->cell_volume() * s;
}

std::vector<double> Conv1dModel::gradient(std::span<const double> w) const
{
    const auto r = residual(w);
    std::vector<double> g(static_cast<std::size_t>(n_));
    kernels::matvec_transposed(params_.exec, a_, n_, n_, r, g);
    return g;
}

double Conv1dModel::lipschitz_bound(const ValueSet&) const
{
    // |A^T A delta|_inf <= max|A^T A| * sum|delta_j| = max|A^T A| * |delta|_L1 / h
    double m = 0.0;
    for (int i = 0; i < n_; ++i) {
        for (int j = i; j < n_; ++j) {
            double s = 0.0;
            for (int k = std::max(i, j) + 1; k < n_; ++k) {
                s += a_[static_cast<std::size_t>(k) * n_ + i] * a_[static_cast<std::size_t>(k) * n_ + j];
            }
            m = std::max(m, std::abs(s));
        }
    }
    return m / grid_->cell_volume();
}

} // namespace bslip
