#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bslip/errors.hpp"
#include "bslip/model.hpp"
#include "support.hpp"

using namespace bslip;

namespace {

constexpr double kPi = std::numbers::pi;

GridPtr unit2d(int n) { return build_grid_2d(Box{{0, 0}, {1, 1}}, n, n); }

// Dense Gaussian elimination with partial pivoting.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b)
{
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i) {
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        }
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (int i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            if (f == 0.0) continue;
            for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

// Second implementation of the vertex finite-difference scheme: every node
// is an unknown, boundary nodes get identity rows, the top edge uses a ghost
// node mirrored across it.
struct DenseCdr {
    int n;
    double eps = 0.04, c2 = 2.0;
    std::function<std::array<double, 2>(double, double)> conv = [](double x, double y) {
        return std::array<double, 2>{std::sin(kPi * x), std::cos(2 * kPi * y)};
    };
    std::function<double(double, double)> src = [](double x, double y) {
        return std::sin(2 * kPi * x + 2 * kPi * y) + 3.0;
    };
    std::function<double(double)> bottom = [](double x) {
        return (x > 0.25 && x < 0.75) ? std::sin(2 * kPi * (x - 0.25)) : 0.0;
    };

    std::vector<double> solve(const std::vector<double>& w) const
    {
        const int nn = (n + 1) * (n + 1);
        const double h = 1.0 / n;
        auto id = [&](int i, int j) { return j * (n + 1) + i; };
        std::vector<std::vector<double>> a(nn, std::vector<double>(nn, 0.0));
        std::vector<double> b(nn, 0.0);
        for (int j = 0; j <= n; ++j) {
            for (int i = 0; i <= n; ++i) {
                const int r = id(i, j);
                if (i == 0 || i == n || j == 0) {
                    a[r][r] = 1.0;
                    b[r] = (j == 0 && i > 0 && i < n) ? bottom(i * h) : 0.0;
                    continue;
                }
                const double x = i * h, y = j * h;
                // node coefficient: mean of the adjacent cells
                double ws = 0.0;
                int cnt = 0;
                for (int cy : {j - 1, j}) {
                    for (int cx : {i - 1, i}) {
                        if (cx < 0 || cy < 0 || cx >= n || cy >= n) continue;
                        ws += w[cy * n + cx];
                        ++cnt;
                    }
                }
                const int north = j == n ? id(i, j - 1) : id(i, j + 1);
                const double d = eps / (h * h);
                a[r][r] += 4 * d + c2 * ws / cnt;
                a[r][id(i - 1, j)] -= d;
                a[r][id(i + 1, j)] -= d;
                a[r][id(i, j - 1)] -= d;
                a[r][north] -= d;
                const auto c = conv(x, y);
                // x direction
                if (std::abs(c[0]) * h / eps <= 2.0) {
                    a[r][id(i + 1, j)] += c[0] / (2 * h);
                    a[r][id(i - 1, j)] -= c[0] / (2 * h);
                } else if (c[0] > 0) {
                    a[r][r] += c[0] / h;
                    a[r][id(i - 1, j)] -= c[0] / h;
                } else {
                    a[r][r] -= c[0] / h;
                    a[r][id(i + 1, j)] += c[0] / h;
                }
                if (std::abs(c[1]) * h / eps <= 2.0) {
                    a[r][north] += c[1] / (2 * h);
                    a[r][id(i, j - 1)] -= c[1] / (2 * h);
                } else if (c[1] > 0) {
                    a[r][r] += c[1] / h;
                    a[r][id(i, j - 1)] -= c[1] / h;
                } else {
                    a[r][r] -= c[1] / h;
                    a[r][north] += c[1] / h;
                }
                b[r] = src(x, y);
            }
        }
        return dense_solve(a, b);
    }

    double trapezoid(const std::vector<double>& v) const
    {
        const double h = 1.0 / n;
        double s = 0.0;
        for (int j = 0; j <= n; ++j) {
            for (int i = 0; i <= n; ++i) {
                const double q = (i == 0 || i == n ? 0.5 : 1.0) * (j == 0 || j == n ? 0.5 : 1.0) * h * h;
                s += q * v[j * (n + 1) + i];
            }
        }
        return s;
    }
};

} // namespace

TEST(Conv1d, ZeroControl)
{
    auto g = build_grid_1d(-1.0, 1.0, 16);
    Conv1dModel m(g);
    std::vector<double> w(16, 0.0);
    double s = 0.0;
    for (int i = 0; i < 16; ++i) {
        const double f = conv1d_default_target(g->cell_center(i)[0]);
        s += f * f;
    }
    EXPECT_NEAR(m.objective(w), 0.5 * g->cell_volume() * s, 1e-15);
    // value from tests/oracles/conv1d_oracle.py
    EXPECT_NEAR(m.objective(w), 0.03385449848866699, 1e-14);
}

TEST(Conv1d, ZeroTarget)
{
    auto g = build_grid_1d(-1.0, 1.0, 16);
    Conv1dParams p;
    p.target = [](double) { return 0.0; };
    Conv1dModel m(g, p);
    std::vector<double> w(16, 0.0);
    EXPECT_EQ(m.objective(w), 0.0);
    for (double x : m.gradient(w)) EXPECT_EQ(x, 0.0);
}

TEST(Conv1d, OnesMatchesOracleScript)
{
    Conv1dModel m(build_grid_1d(-1.0, 1.0, 16));
    std::vector<double> w(16, 1.0);
    EXPECT_NEAR(m.objective(w), 0.037040437657698336, 1e-14);
}

TEST(Conv1d, RejectsTwoDimensionalGrid)
{
    EXPECT_THROW(Conv1dModel(unit2d(4)), InvalidArgument);
}

TEST(Conv1d, ParallelMatchesSerial)
{
    auto g = build_grid_1d(-1.0, 1.0, 200);
    Conv1dParams par;
    par.exec = ExecPolicy::Parallel;
    Conv1dModel a(g), b(g, par);
    std::mt19937_64 rng(3);
    const auto w = fixtures::random_gradient(rng, 200);
    EXPECT_EQ(a.objective(w), b.objective(w));
    EXPECT_EQ(a.gradient(w), b.gradient(w));
}

TEST(Conv1d, GradientFiniteDifferences)
{
    Conv1dModel m(build_grid_1d(-1.0, 1.0, 64));
    const auto r = gradient_check(m, ValueSet({-1, 0, 1}), 10, 1);
    EXPECT_LE(r.max_rel_error, 1e-6);
    EXPECT_EQ(r.points, 10);
}

TEST(Conv1d, LipschitzBoundDominatesRandomPairs)
{
    auto g = build_grid_1d(-1.0, 1.0, 16);
    Conv1dModel m(g);
    const ValueSet w({-1, 0, 1});
    const double bound = m.lipschitz_bound(w);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        ControlField a(g, fixtures::random_field(rng, 16, w));
        ControlField b(g, fixtures::random_field(rng, 16, w));
        if (a == b) continue;
        const auto ga = m.gradient_field(a), gb = m.gradient_field(b);
        double sup = 0.0;
        for (int c = 0; c < 16; ++c) sup = std::max(sup, std::abs(ga.g[c] - gb.g[c]));
        EXPECT_LE(sup / l1_distance(a, b), bound);
    }
}

TEST(Pde2d, ZeroDataGivesZeroState)
{
    Pde2dParams p;
    p.source = [](double, double) { return 0.0; };
    p.bottom = [](double) { return 0.0; };
    p.target = Pde2dTarget::Zero;
    Pde2dModel m(unit2d(8), p);
    for (double u : m.solve_state(std::vector<double>(64, 0.0))) EXPECT_EQ(u, 0.0);
}

TEST(Pde2d, MaximumPrinciplePureDiffusion)
{
    Pde2dParams p;
    p.convection = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
    p.c2 = 0.0;
    p.source = [](double x, double y) { return 1.0 + x * y; };
    p.target = Pde2dTarget::Zero;
    Pde2dModel m(unit2d(12), p);
    const auto u = m.solve_state(std::vector<double>(144, 0.0));
    // boundary data ranges over [0, 1]
    EXPECT_GE(*std::min_element(u.begin(), u.end()), 0.0);
}

TEST(Pde2d, StateMatchesDenseOracle)
{
    auto g = unit2d(16);
    Pde2dParams p;
    p.target = Pde2dTarget::Zero;
    Pde2dModel m(g, p);
    DenseCdr oracle{16};
    std::vector<double> zero(256, 0.0);
    const auto u = m.solve_state(zero);
    const auto v = oracle.solve(zero);
    ASSERT_EQ(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(u[i], v[i], 1e-8) << "node " << i;

    // and for a nonconstant integer control
    std::mt19937_64 rng(2);
    const auto w = ControlField(g, fixtures::random_field(rng, 256, ValueSet({0, 1}))).as_real();
    const auto u2 = m.solve_state(w);
    const auto v2 = oracle.solve(w);
    for (std::size_t i = 0; i < u2.size(); ++i) EXPECT_NEAR(u2[i], v2[i], 1e-8) << "node " << i;
}

TEST(Pde2d, ObjectiveMatchesDenseOracle)
{
    auto g = unit2d(16);
    Pde2dModel m(g);
    DenseCdr oracle{16};
    // target: rotated convection with the piecewise cubic control at cell centers
    DenseCdr variant{16};
    variant.conv = [](double x, double y) { return std::array<double, 2>{-y, 2 * x}; };
    std::vector<double> wt(256);
    for (int c = 0; c < 256; ++c) {
        const double x = (c % 16 + 0.5) / 16, y = (c / 16 + 0.5) / 16;
        const bool a = x < 0.35 && y < 0.35;
        wt[c] = a ? 2.5 - 4 * std::pow(x - 0.35, 3) : -6 * std::pow(y - 0.35, 3);
    }
    const auto ud = variant.solve(wt);
    for (std::size_t i = 0; i < ud.size(); ++i) EXPECT_NEAR(m.target_state()[i], ud[i], 1e-8);

    const auto u = oracle.solve(std::vector<double>(256, 0.0));
    std::vector<double> sq(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) sq[i] = (u[i] - ud[i]) * (u[i] - ud[i]);
    EXPECT_NEAR(m.objective(std::vector<double>(256, 0.0)), 0.5 * oracle.trapezoid(sq), 1e-10);
}

TEST(Pde2d, TargetControlValues)
{
    EXPECT_DOUBLE_EQ(pde2d_target_control(0.1, 0.1), 2.5625);
    EXPECT_NEAR(pde2d_target_control(0.5, 0.5), -0.02025, 1e-15);
}

TEST(Pde2d, TargetIsDeterministic)
{
    auto g = unit2d(12);
    Pde2dModel a(g), b(g);
    EXPECT_EQ(a.target_state(), b.target_state());
}

TEST(Pde2d, GradientFiniteDifferences)
{
    Pde2dModel m(unit2d(8));
    EXPECT_LE(gradient_check(m, ValueSet({0, 1}), 10, 4).max_rel_error, 1e-6);
}

TEST(Pde2d, EveryCellCouplesToTheState)
{
    Pde2dModel m(unit2d(8));
    const auto g = m.gradient(std::vector<double>(64, 0.5));
    for (double x : g) EXPECT_NE(x, 0.0);
}

TEST(Pde2d, LipschitzBoundDominatesRandomPairs)
{
    auto g = unit2d(8);
    Pde2dModel m(g);
    const ValueSet w({0, 1});
    const double bound = m.lipschitz_bound(w);
    std::mt19937_64 rng(23);
    for (int i = 0; i < 50; ++i) {
        ControlField a(g, fixtures::random_field(rng, 64, w));
        ControlField b(g, fixtures::random_field(rng, 64, w));
        if (a == b) continue;
        const auto ga = m.gradient_field(a), gb = m.gradient_field(b);
        double sup = 0.0;
        for (int c = 0; c < 64; ++c) sup = std::max(sup, std::abs(ga.g[c] - gb.g[c]));
        EXPECT_LE(sup / l1_distance(a, b), bound);
    }
}

TEST(Pde2d, RejectsOtherDomains)
{
    EXPECT_THROW(Pde2dModel(build_grid_2d(Box{{0, 0}, {2, 1}}, 4, 4)), InvalidArgument);
    EXPECT_THROW(Pde2dModel(build_grid_1d(0, 1, 4)), InvalidArgument);
}

TEST(Quadratic, Examples)
{
    auto g = build_grid_1d(-1.0, 1.0, 2);
    QuadraticModel m(g, {0.0, 0.0});
    EXPECT_EQ(m.objective(std::vector<double>{1.0, 0.0}), 0.5);
    QuadraticModel t(g, {1.0, -2.0});
    EXPECT_EQ(t.objective(std::vector<double>{1.0, -2.0}), 0.0);
    for (double x : t.gradient(std::vector<double>{1.0, -2.0})) EXPECT_EQ(x, 0.0);
    EXPECT_EQ(QuadraticModel(build_grid_1d(0, 4, 4), {0, 0, 0, 0}).lipschitz_bound(ValueSet({0, 1})), 1.0);
    // central differences are exact for a quadratic up to rounding
    QuadraticModel u(g, {0.3, -1.7});
    EXPECT_LE(gradient_check(u, ValueSet({-2, 1}), 10, 9).max_rel_error, 1e-9);
}

TEST(Evaluate, JIsFPlusAlphaTv)
{
    auto g = build_grid_1d(0.0, 1.0, 4);
    QuadraticModel m(g, {0, 0, 0, 0});
    const auto parts = evaluate(m, ControlField(g, {0, 1, 1, 0}), 0.25);
    EXPECT_DOUBLE_EQ(parts.F, 0.5 * 0.25 * 2);
    EXPECT_EQ(parts.tv_value(), 2.0);
    EXPECT_DOUBLE_EQ(parts.J(), 0.25 + 0.5);
}
