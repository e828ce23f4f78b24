#include "bslip/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bslip/errors.hpp"

namespace bslip {

double GradientField::inner(std::span<const double> v) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        s += g[i] * v[i];
    }
    return grid->cell_volume() * s;
}

double GradientField::sup_norm() const
{
    double m = 0.0;
    for (double x : g) m = std::max(m, std::abs(x));
    return m;
}

std::string to_string(ModelKind kind)
{
    switch (kind) {
    case ModelKind::Conv1d: return "conv1d";
    case ModelKind::Pde2d: return "pde2d";
    case ModelKind::Quadratic: return "quadratic";
    }
    return "unknown";
}

double Model::objective(const ControlField& w) const
{
    const auto real = w.as_real();
    return objective(std::span<const double>(real));
}

GradientField Model::gradient_field(const ControlField& w) const
{
    const auto real = w.as_real();
    return {grid_, gradient(std::span<const double>(real))};
}

ObjectiveParts evaluate(const Model& model, const ControlField& w, double alpha)
{
    ObjectiveParts parts;
    parts.F = model.objective(w);
    parts.tv = tv_tally(w);
    parts.alpha = alpha;
    return parts;
}

GradientCheckResult gradient_check(const Model& model, const ValueSet& values, int points, std::uint64_t seed,
                                   double step)
{
    const Grid& grid = model.grid();
    const int n = grid.cell_count();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, values.size() - 1);
    std::uniform_int_distribution<int> dir(-1, 1);
    GradientCheckResult out;
    for (int p = 0; p < points; ++p) {
        std::vector<double> w(static_cast<std::size_t>(n));
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            w[i] = values[pick(rng)];
            v[i] = dir(rng);
        }
        if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) {
            v[0] = 1.0;
        }
        const GradientField g{model.grid_ptr(), model.gradient(w)};
        const double directional = g.inner(v);
        std::vector<double> plus(w), minus(w);
        for (int i = 0; i < n; ++i) {
            plus[i] += step * v[i];
            minus[i] -= step * v[i];
        }
        const double fd = (model.objective(plus) - model.objective(minus)) / (2.0 * step);
        const double err = std::abs(directional - fd) / std::max(std::abs(directional), 1e-12);
        out.max_rel_error = std::max(out.max_rel_error, err);
        ++out.points;
    }
    return out;
}

} // namespace bslip
