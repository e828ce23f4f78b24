#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <fmt/format.h>

#include "bslip/errors.hpp"
#include "bslip/model.hpp"

namespace bslip {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
constexpr double kPi = std::numbers::pi;

std::array<double, 2> default_convection(double x1, double x2)
{
    return {std::sin(kPi * x1), std::cos(2.0 * kPi * x2)};
}

std::array<double, 2> target_convection(double x1, double x2)
{
    return {-x2, 2.0 * x1};
}

double default_source(double x1, double x2)
{
    return std::sin(2.0 * kPi * x1 + 2.0 * kPi * x2) + 3.0;
}

double default_bottom(double x1)
{
    return (x1 > 0.25 && x1 < 0.75) ? std::sin(2.0 * kPi * (x1 - 0.25)) : 0.0;
}

} // namespace

double pde2d_target_control(double x1, double x2)
{
    const bool in_a = x1 > 0.0 && x1 < 0.35 && x2 > 0.0 && x2 < 0.35;
    if (in_a) {
        return 2.5 - 4.0 * std::pow(x1 - 0.35, 3);
    }
    return -6.0 * std::pow(x2 - 0.35, 3);
}

// Node (i, j) has id j * (nx + 1) + i. Unknowns are the nodes off the
// Dirichlet part of the boundary: 1 <= i <= nx - 1, 1 <= j <= ny.
struct Pde2dModel::Impl {
    int nx = 0;
    int ny = 0;
    double hx = 0.0;
    double hy = 0.0;
    std::vector<int> unknown_of_node;  // -1 for Dirichlet nodes
    std::vector<int> node_of_unknown;
    std::vector<double> dirichlet;     // per node, meaningful on Dirichlet nodes
    SpMat base_operator;               // diffusion + convection, reaction excluded
    Vec rhs;
    SpMat target_operator;

    int node(int i, int j) const { return j * (nx + 1) + i; }

    SpMat assemble(const Pde2dParams& p, const VectorField2& convection, Vec* rhs_out) const
    {
        const int n_unknown = static_cast<int>(node_of_unknown.size());
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(n_unknown) * 5);
        Vec b = Vec::Zero(n_unknown);
        const double ex = p.eps / (hx * hx);
        const double ey = p.eps / (hy * hy);
        for (int r = 0; r < n_unknown; ++r) {
            const int nd = node_of_unknown[r];
            const int i = nd % (nx + 1);
            const int j = nd / (nx + 1);
            const double x = i * hx;
            const double y = j * hy;
            double diag = 2.0 * ex + 2.0 * ey;
            // coefficients toward W, E, S, N
            double cw = -ex, ce = -ex, cs = -ey, cn = -ey;
            const auto c = convection(x, y);
            if (std::abs(c[0]) * hx / p.eps > 2.0) {
                if (c[0] > 0.0) {
                    diag += c[0] / hx;
                    cw -= c[0] / hx;
                } else {
                    diag -= c[0] / hx;
                    ce += c[0] / hx;
                }
            } else {
                ce += c[0] / (2.0 * hx);
                cw -= c[0] / (2.0 * hx);
            }
            if (std::abs(c[1]) * hy / p.eps > 2.0) {
                if (c[1] > 0.0) {
                    diag += c[1] / hy;
                    cs -= c[1] / hy;
                } else {
                    diag -= c[1] / hy;
                    cn += c[1] / hy;
                }
            } else {
                cn += c[1] / (2.0 * hy);
                cs -= c[1] / (2.0 * hy);
            }
            b[r] = p.source(x, y);
            trip.emplace_back(r, r, diag);
            auto couple = [&](int ni, int nj, double coef) {
                const int other = node(ni, nj);
                const int col = unknown_of_node[other];
                if (col >= 0) {
                    trip.emplace_back(r, col, coef);
                } else {
                    b[r] -= coef * dirichlet[other];
                }
            };
            couple(i - 1, j, cw);
            couple(i + 1, j, ce);
            couple(i, j - 1, cs);
            // homogeneous Neumann on the top edge: mirrored ghost node
            if (j == ny) {
                couple(i, j - 1, cn);
            } else {
                couple(i, j + 1, cn);
            }
        }
        SpMat a(n_unknown, n_unknown);
        a.setFromTriplets(trip.begin(), trip.end());
        a.makeCompressed();
        if (rhs_out) *rhs_out = b;
        return a;
    }

    std::vector<double> nodal(std::span<const double> w) const
    {
        std::vector<double> out(static_cast<std::size_t>((nx + 1) * (ny + 1)));
        for (int j = 0; j <= ny; ++j) {
            for (int i = 0; i <= nx; ++i) {
                double s = 0.0;
                int count = 0;
                for (int cy = std::max(j - 1, 0); cy <= std::min(j, ny - 1); ++cy) {
                    for (int cx = std::max(i - 1, 0); cx <= std::min(i, nx - 1); ++cx) {
                        s += w[static_cast<std::size_t>(cy * nx + cx)];
                        ++count;
                    }
                }
                out[static_cast<std::size_t>(node(i, j))] = s / count;
            }
        }
        return out;
    }

    SpMat with_reaction(const SpMat& base, double c2, const std::vector<double>& coef) const
    {
        SpMat a = base;
        for (int r = 0; r < a.rows(); ++r) {
            a.coeffRef(r, r) += c2 * coef[static_cast<std::size_t>(node_of_unknown[r])];
        }
        return a;
    }

    static void check_residual(const SpMat& a, const Vec& x, const Vec& b, double tol, const char* what)
    {
        const double bn = b.norm();
        const double rn = (a * x - b).norm();
        const double rel = bn > 0.0 ? rn / bn : rn;
        if (!std::isfinite(rel) || rel > tol) {
            throw SolverFailure(fmt::format("{} solve: relative residual {:.3e} exceeds {:.1e}", what, rel, tol));
        }
    }

    // Full nodal vector (Dirichlet values filled in) plus the factorization.
    std::vector<double> solve(const SpMat& a, const Vec& b, double tol, Eigen::SparseLU<SpMat>& lu) const
    {
        lu.analyzePattern(a);
        lu.factorize(a);
        if (lu.info() != Eigen::Success) {
            throw SolverFailure("state operator factorization failed: " + lu.lastErrorMessage());
        }
        Vec x = lu.solve(b);
        if (lu.info() != Eigen::Success) {
            throw SolverFailure("state solve failed");
        }
        // one step of iterative refinement
        Vec r = b - a * x;
        x += lu.solve(r);
        check_residual(a, x, b, tol, "state");
        std::vector<double> u(dirichlet);
        for (int k = 0; k < static_cast<int>(node_of_unknown.size()); ++k) {
            u[static_cast<std::size_t>(node_of_unknown[k])] = x[k];
        }
        return u;
    }
};

Pde2dModel::Pde2dModel(GridPtr grid, Pde2dParams params)
    : Model(std::move(grid)), params_(std::move(params)), impl_(std::make_unique<Impl>())
{
    const Grid& g = *grid_;
    if (g.dim() != 2) {
        throw InvalidArgument("pde2d model needs a 2D grid");
    }
    const Box unit{{0.0, 0.0}, {1.0, 1.0}};
    if (!(g.domain() == unit)) {
        throw InvalidArgument("pde2d model is defined on the unit square");
    }
    if (g.nx() < 2 || g.ny() < 1) {
        throw InvalidArgument("pde2d model needs at least 2 x 1 cells");
    }
    if (!(params_.eps > 0.0)) {
        throw InvalidArgument("diffusion coefficient eps must be positive");
    }
    if (!params_.convection) params_.convection = default_convection;
    if (!params_.source) params_.source = default_source;
    if (!params_.bottom) params_.bottom = default_bottom;

    Impl& m = *impl_;
    m.nx = g.nx();
    m.ny = g.ny();
    m.hx = g.spacing(0);
    m.hy = g.spacing(1);
    const int nodes = node_count();
    m.unknown_of_node.assign(static_cast<std::size_t>(nodes), -1);
    m.dirichlet.assign(static_cast<std::size_t>(nodes), 0.0);
    for (int j = 0; j <= m.ny; ++j) {
        for (int i = 0; i <= m.nx; ++i) {
            const int nd = m.node(i, j);
            const bool on_dirichlet = i == 0 || i == m.nx || j == 0;
            if (on_dirichlet) {
                m.dirichlet[nd] = (j == 0 && i != 0 && i != m.nx) ? params_.bottom(i * m.hx) : 0.0;
            } else {
                m.unknown_of_node[nd] = static_cast<int>(m.node_of_unknown.size());
                m.node_of_unknown.push_back(nd);
            }
        }
    }
    m.base_operator = m.assemble(params_, params_.convection, &m.rhs);

    q_.resize(static_cast<std::size_t>(nodes));
    for (int j = 0; j <= m.ny; ++j) {
        for (int i = 0; i <= m.nx; ++i) {
            const double wx = (i == 0 || i == m.nx) ? 0.5 : 1.0;
            const double wy = (j == 0 || j == m.ny) ? 0.5 : 1.0;
            q_[m.node(i, j)] = m.hx * m.hy * wx * wy;
        }
    }

    if (params_.target == Pde2dTarget::Zero) {
        ud_.assign(static_cast<std::size_t>(nodes), 0.0);
    } else {
        Vec b;
        const SpMat variant = m.assemble(params_, target_convection, &b);
        std::vector<double> wt(static_cast<std::size_t>(g.cell_count()));
        for (int c = 0; c < g.cell_count(); ++c) {
            const auto x = g.cell_center(c);
            wt[c] = pde2d_target_control(x[0], x[1]);
        }
        const SpMat a = m.with_reaction(variant, params_.c2, m.nodal(wt));
        Eigen::SparseLU<SpMat> lu;
        ud_ = m.solve(a, b, params_.residual_tol, lu);
    }
}

Pde2dModel::~Pde2dModel() = default;

std::vector<double> Pde2dModel::nodal_coefficient(std::span<const double> w) const
{
    return impl_->nodal(w);
}

std::vector<double> Pde2dModel::solve_state(std::span<const double> w) const
{
    const Impl& m = *impl_;
    const SpMat a = m.with_reaction(m.base_operator, params_.c2, m.nodal(w));
    Eigen::SparseLU<SpMat> lu;
    return m.solve(a, m.rhs, params_.residual_tol, lu);
}

double Pde2dModel::objective(std::span<const double> w) const
{
    const auto u = solve_state(w);
    double s = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) {
        const double d = u[n] - ud_[n];
        s += q_[n] * d * d;
    }
    return 0.5 * s;
}

std::vector<double> Pde2dModel::gradient(std::span<const double> w) const
{
    const Impl& m = *impl_;
    const SpMat a = m.with_reaction(m.base_operator, params_.c2, m.nodal(w));
    Eigen::SparseLU<SpMat> lu;
    const auto u = m.solve(a, m.rhs, params_.residual_tol, lu);

    const int n_unknown = static_cast<int>(m.node_of_unknown.size());
    Vec rhs(n_unknown);
    for (int k = 0; k < n_unknown; ++k) {
        const auto nd = static_cast<std::size_t>(m.node_of_unknown[k]);
        rhs[k] = q_[nd] * (u[nd] - ud_[nd]);
    }
    Vec p = lu.transpose().solve(rhs);
    const SpMat at = a.transpose();
    Vec r = rhs - at * p;
    p += lu.transpose().solve(r);
    Impl::check_residual(at, p, rhs, params_.residual_tol, "adjoint");

    // dF/dcoef_n = -c2 p_n u_n on unknown nodes, then spread to cells with
    // the averaging weights of nodal().
    std::vector<double> dnode(static_cast<std::size_t>(node_count()), 0.0);
    for (int k = 0; k < n_unknown; ++k) {
        const auto nd = static_cast<std::size_t>(m.node_of_unknown[k]);
        dnode[nd] = -params_.c2 * p[k] * u[nd];
    }
    const Grid& g = *grid_;
    std::vector<double> grad(static_cast<std::size_t>(g.cell_count()), 0.0);
    for (int j = 0; j <= m.ny; ++j) {
        for (int i = 0; i <= m.nx; ++i) {
            const double d = dnode[static_cast<std::size_t>(m.node(i, j))];
            if (d == 0.0) continue;
            const int y0 = std::max(j - 1, 0), y1 = std::min(j, m.ny - 1);
            const int x0 = std::max(i - 1, 0), x1 = std::min(i, m.nx - 1);
            const int count = (y1 - y0 + 1) * (x1 - x0 + 1);
            for (int cy = y0; cy <= y1; ++cy) {
                for (int cx = x0; cx <= x1; ++cx) {
                    grad[static_cast<std::size_t>(cy * m.nx + cx)] += d / count;
                }
            }
        }
    }
    const double vol = g.cell_volume();
    for (double& x : grad) x /= vol;
    return grad;
}

double Pde2dModel::lipschitz_bound(const ValueSet& values) const
{
    std::lock_guard lock(lipschitz_mutex_);
    if (lipschitz_cache_ && lipschitz_cache_->first == values) {
        return lipschitz_cache_->second;
    }
    // Sampled sup of |grad F|_inf over feasible controls (constants plus
    // random fields); any two integer-feasible fields differ by at least one
    // cell volume in L1, so 2 c / vol bounds the difference quotient. The
    // extra factor 2 covers sampling error.
    const int n = grid_->cell_count();
    double c = 0.0;
    auto sample = [&](const std::vector<double>& w) {
        GradientField g{grid_, gradient(w)};
        c = std::max(c, g.sup_norm());
    };
    for (int v : values.values()) {
        sample(std::vector<double>(static_cast<std::size_t>(n), v));
    }
    std::mt19937_64 rng(params_.lipschitz_seed);
    std::uniform_int_distribution<int> pick(0, values.size() - 1);
    for (int s = 0; s < params_.lipschitz_samples; ++s) {
        std::vector<double> w(static_cast<std::size_t>(n));
        for (auto& x : w) x = values[pick(rng)];
        sample(w);
    }
    const double bound = 2.0 * (2.0 * c) / grid_->cell_volume();
    lipschitz_cache_.emplace(values, bound);
    return bound;
}

} // namespace bslip
