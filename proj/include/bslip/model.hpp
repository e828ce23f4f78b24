#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bslip/control.hpp"
#include "bslip/grid.hpp"
#include "bslip/kernels.hpp"

namespace bslip {

// Cellwise Riesz representative of dF: (g, v)_{L2} = sum_i cell_volume * g_i * v_i.
struct GradientField {
    GridPtr grid;
    std::vector<double> g;

    double inner(std::span<const double> v) const;
    double sup_norm() const;
};

enum class ModelKind { Conv1d, Pde2d, Quadratic };

std::string to_string(ModelKind kind);

// Smooth part F of the objective J = F + alpha TV. All evaluations accept
// real-valued (relaxed) controls so that derivatives can be checked by
// finite differences.
class Model {
public:
    explicit Model(GridPtr grid) : grid_(std::move(grid)) {}
    virtual ~Model() = default;
    Model(const Model&) = delete;
    Model& operator=(const Model&) = delete;

    virtual ModelKind kind() const = 0;
    virtual double objective(std::span<const double> w) const = 0;
    virtual std::vector<double> gradient(std::span<const double> w) const = 0;
    // Upper bound on ||grad F(w1) - grad F(w2)||_inf / ||w1 - w2||_L1.
    virtual double lipschitz_bound(const ValueSet& values) const = 0;

    double objective(const ControlField& w) const;
    GradientField gradient_field(const ControlField& w) const;

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }

protected:
    GridPtr grid_;
};

// ---------------------------------------------------------------------------
// 1D deconvolution: F(w) = 1/2 h |A w - f|^2 with A[m][j] = h k(t_m - t_j)
// for j < m (collocation at cell midpoints).

struct Conv1dParams {
    double tau = 0.1;
    // Convolution kernel k(s) for s > 0; defaults to exp(-s / tau).
    std::function<double(double)> kernel;
    // Tracking target f(t); defaults to 0.2 cos(2 pi t - 0.25) exp(t).
    std::function<double(double)> target;
    ExecPolicy exec = ExecPolicy::Serial;
};

double conv1d_default_target(double t);

class Conv1dModel final : public Model {
public:
    Conv1dModel(GridPtr grid, Conv1dParams params = {});

    ModelKind kind() const override { return ModelKind::Conv1d; }
    double objective(std::span<const double> w) const override;
    std::vector<double> gradient(std::span<const double> w) const override;
    double lipschitz_bound(const ValueSet& values) const override;
    using Model::objective;

    std::span<const double> matrix() const { return a_; }
    std::span<const double> target() const { return f_; }
    int size() const { return n_; }

private:
    std::vector<double> residual(std::span<const double> w) const;

    Conv1dParams params_;
    int n_;
    std::vector<double> a_;  // row-major n x n
    std::vector<double> f_;
};

// ---------------------------------------------------------------------------
// 2D convection-diffusion-reaction on (0,1)^2:
//   -eps Lap u + c1 . grad u + c2 u w = f,
// u = 0 on x1 in {0,1} and on the bottom edge outside (0.25, 0.75),
// u = g_bottom on (0.25, 0.75) x {0}, du/dn = 0 on the top edge.
// Finite differences on the cell vertices (5-point Laplacian, central
// convection, first-order upwind where the cell Peclet number exceeds 2).
// F(w) = 1/2 sum_nodes q_n (u_n - ud_n)^2 with trapezoidal weights q.

using VectorField2 = std::function<std::array<double, 2>(double, double)>;
using ScalarField2 = std::function<double(double, double)>;

enum class Pde2dTarget {
    Reference,  // u_d from the rotated-convection variant with a real-valued control
    Zero,   // u_d = 0
};

struct Pde2dParams {
    double eps = 4e-2;
    double c2 = 2.0;
    VectorField2 convection;              // default (sin(pi x1), cos(2 pi x2))
    ScalarField2 source;                  // default sin(2 pi x1 + 2 pi x2) + 3
    std::function<double(double)> bottom; // default sin(2 pi (x1 - 0.25)) on (0.25, 0.75), 0 elsewhere
    Pde2dTarget target = Pde2dTarget::Reference;
    double residual_tol = 1e-10;
    int lipschitz_samples = 16;
    std::uint64_t lipschitz_seed = 20240917;
};

// Real-valued control used to generate the reference tracking target.
double pde2d_target_control(double x1, double x2);

class Pde2dModel final : public Model {
public:
    Pde2dModel(GridPtr grid, Pde2dParams params = {});
    ~Pde2dModel() override;

    ModelKind kind() const override { return ModelKind::Pde2d; }
    double objective(std::span<const double> w) const override;
    std::vector<double> gradient(std::span<const double> w) const override;
    double lipschitz_bound(const ValueSet& values) const override;
    using Model::objective;

    // Nodal state for a cellwise control, (nx+1)(ny+1) values, x fastest.
    std::vector<double> solve_state(std::span<const double> w) const;
    const std::vector<double>& target_state() const { return ud_; }
    const std::vector<double>& quadrature_weights() const { return q_; }
    // Reaction coefficient per node: mean of w over the cells touching it.
    std::vector<double> nodal_coefficient(std::span<const double> w) const;
    int node_count() const { return (grid_->nx() + 1) * (grid_->ny() + 1); }
    const Pde2dParams& params() const { return params_; }

private:
    struct Impl;
    Pde2dParams params_;
    std::unique_ptr<Impl> impl_;
    std::vector<double> ud_;
    std::vector<double> q_;
    mutable std::mutex lipschitz_mutex_;
    mutable std::optional<std::pair<ValueSet, double>> lipschitz_cache_;
};

// ---------------------------------------------------------------------------
// F(w) = 1/2 ||w - target||_{L2}^2.

class QuadraticModel final : public Model {
public:
    QuadraticModel(GridPtr grid, std::vector<double> target);

    ModelKind kind() const override { return ModelKind::Quadratic; }
    double objective(std::span<const double> w) const override;
    std::vector<double> gradient(std::span<const double> w) const override;
    double lipschitz_bound(const ValueSet& values) const override;
    using Model::objective;

    std::span<const double> target() const { return target_; }

private:
    std::vector<double> target_;
};

// ---------------------------------------------------------------------------

struct ObjectiveParts {
    double F = 0.0;
    TvTally tv;
    double alpha = 0.0;

    double tv_value() const { return tv.value(); }
    double J() const { return F + alpha * tv.value(); }
};

ObjectiveParts evaluate(const Model& model, const ControlField& w, double alpha);

struct GradientCheckResult {
    double max_rel_error = 0.0;
    int points = 0;
};

// Central differences of F along random integer directions at random
// feasible points: |(g,v) - fd| / |(g,v)| (floored at 1e-12).
GradientCheckResult gradient_check(const Model& model, const ValueSet& values, int points, std::uint64_t seed,
                                   double step = 1e-5);

} // namespace bslip
