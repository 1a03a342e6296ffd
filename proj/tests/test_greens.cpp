#include <cmath>

#include <stdexcept>

#include <doctest.h>

#include "hwsmile/greens.hpp"
#include "hwsmile/pricing.hpp"
#include "oracles.hpp"

using namespace hwsmile;

namespace {

ModelParams flat_params(double alpha, double sigma, double gamma, double ystar = 0.0,
                        double rbar = 0.02, double horizon = 5.0) {
    ModelParams p;
    p.alpha = PiecewiseCurve::constant(alpha, "alpha");
    p.sigma = PiecewiseCurve::constant(sigma, "sigma");
    p.gamma = PiecewiseCurve::constant(gamma, "gamma");
    p.y_star = PiecewiseCurve::constant(ystar, "y_star");
    p.rbar = PiecewiseCurve::constant(rbar, "rbar");
    p.horizon = horizon;
    return p;
}

// Quadrature of fn(eta, zeta) * weight over the grid box.
template <class Fn>
double grid_sum(const PayoffGrid& g, Fn&& fn) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.eta_nodes.size(); ++i)
        for (std::size_t j = 0; j < g.zeta_nodes.size(); ++j)
            sum += g.eta_weights[i] * g.zeta_weights[j] * fn(g.eta_nodes[i], g.zeta_nodes[j]);
    return sum;
}

} // namespace

TEST_CASE("gaussian2d density integrates to one on a 10-sd box") {
    Cov2 cov{9.7e-5, 4.8e-7, 5.1e-7};
    const Gaussian2D n2(0.001, -0.0005, cov);
    const int n = 160;
    const GaussLegendreRule& rule = gauss_legendre(n);
    const double sy = std::sqrt(cov.rr), sz = std::sqrt(cov.zz);
    double mass = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double y = n2.mean_y + 10.0 * sy * rule.nodes[i];
            const double z = n2.mean_z + 10.0 * sz * rule.nodes[j];
            mass += rule.weights[i] * rule.weights[j] * n2.density(y, z) * 100.0 * sy * sz;
        }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(Gaussian2D(0.0, 0.0, Cov2{1.0, 2.0, 1.0}), DegenerateKernel);
}

TEST_CASE("g0 normalization, mean and covariance") {
    const KernelSet k(flat_params(0.03, 0.01, 20.0, -0.002));
    const Greens greens(k);
    const double t = 0.25, v = 1.0, y = 0.004, z = 0.0;

    auto one = [](double, double) { return 1.0; };
    const PayoffGrid grid = greens.make_grid(y, z, t, v, one, {});
    double mass = 0.0, m_eta = 0.0, m_zeta = 0.0;
    for (std::size_t i = 0; i < grid.eta_nodes.size(); ++i)
        for (std::size_t j = 0; j < grid.zeta_nodes.size(); ++j) {
            const double w = grid.eta_weights[i] * grid.zeta_weights[j];
            const double g = greens.g0(y, z, t, grid.eta_nodes[i], grid.zeta_nodes[j], v);
            mass += w * g;
            m_eta += w * g * grid.eta_nodes[i];
            m_zeta += w * g * grid.zeta_nodes[j];
        }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m_eta == doctest::Approx(k.phi_r(t, v) * y).epsilon(1e-8));
    CHECK(m_zeta == doctest::Approx(z + k.mu_star(y, t, v)).epsilon(1e-8));

    const Cov2 cov = k.covariance(t, v);
    double c_rr = 0.0, c_rz = 0.0, c_zz = 0.0;
    for (std::size_t i = 0; i < grid.eta_nodes.size(); ++i)
        for (std::size_t j = 0; j < grid.zeta_nodes.size(); ++j) {
            const double w = grid.eta_weights[i] * grid.zeta_weights[j];
            const double g = greens.g0(y, z, t, grid.eta_nodes[i], grid.zeta_nodes[j], v);
            const double de = grid.eta_nodes[i] - m_eta;
            const double dz = grid.zeta_nodes[j] - m_zeta;
            c_rr += w * g * de * de;
            c_rz += w * g * de * dz;
            c_zz += w * g * dz * dz;
        }
    CHECK(c_rr == doctest::Approx(cov.rr).epsilon(1e-8));
    CHECK(c_rz == doctest::Approx(cov.rz).epsilon(1e-8));
    CHECK(c_zz == doctest::Approx(cov.zz).epsilon(1e-8));
}

TEST_CASE("g0 signals the deterministic limit") {
    const KernelSet k(flat_params(0.03, 0.0, 20.0));
    const Greens greens(k);
    CHECK_THROWS_AS(greens.g0(0.0, 0.0, 0.0, 0.0, 0.0, 1.0), DegenerateKernel);
}

TEST_CASE("g1 mass vanishes") {
    // smile off: first-order correction must integrate to zero
    {
        const KernelSet k(flat_params(0.03, 0.01, 1e-7, 0.0));
        const Greens greens(k);
        const PayoffGrid grid = greens.make_grid(0.002, 0.0, 0.25, 1.0, [](double, double) {
            return 1.0;
        }, {});
        const double mass = grid_sum(grid, [&](double eta, double zeta) {
            return greens.g1(0.002, 0.0, 0.25, eta, zeta, 1.0);
        });
        CHECK(std::abs(mass) < 1e-8);
    }
    // generic smile and skew
    {
        const KernelSet k(flat_params(0.03, 0.01, 20.0, -0.002));
        const Greens greens(k);
        const PayoffGrid grid = greens.make_grid(-0.003, 0.0, 0.25, 1.0, [](double, double) {
            return 1.0;
        }, {});
        const double mass = grid_sum(grid, [&](double eta, double zeta) {
            return greens.g1(-0.003, 0.0, 0.25, eta, zeta, 1.0);
        });
        CHECK(std::abs(mass) < 1e-8);
    }
}

TEST_CASE("convolve_price of the unit payoff is one") {
    const KernelSet k(flat_params(0.03, 0.01, 20.0, -0.002));
    const Greens greens(k);
    auto one = [](double, double) { return 1.0; };
    const PayoffGrid grid = greens.make_grid(0.0, 0.0, 0.25, 1.0, one, {});
    CHECK(greens.convolve_price(grid, 0.0, 0.0, 0.25, 1.0) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("convolve_price of zeta with gamma off gives the drifted mean") {
    const KernelSet k(flat_params(0.03, 0.01, 1e-7, 0.0));
    const Greens greens(k);
    const double y = 0.006, t = 0.25, v = 1.0;
    auto payoff = [](double, double zeta) { return zeta; };
    const PayoffGrid grid = greens.make_grid(y, 0.0, t, v, payoff, {});
    const double conv = greens.convolve_price(grid, y, 0.0, t, v);
    // The correction kernel adds the intrinsic drift Sigma_zz/2 on top of
    // the Gaussian mean mu*.
    const double expected = k.mu_star(y, t, v) + 0.5 * k.sigma_zz(t, v);
    CHECK(conv == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("first-order kernel drops out for state-only payoffs at the gamma floor") {
    ModelParams p = flat_params(0.03, 0.01, 0.0, 0.0);
    p.gamma = PiecewiseCurve::constant(p.quadrature.gamma_floor, "gamma");
    const KernelSet k(p);
    const Greens greens(k);
    const double t = 0.0, v = 0.5;
    const double b = k.b_star(v, 1.0);
    auto payoff = [&](double eta, double) { return std::exp(b * eta); };
    const PayoffGrid grid = greens.make_grid(0.0, 0.0, t, v, payoff, {});

    const double with_g1 = greens.convolve_price(grid, 0.0, 0.0, t, v);
    const double g0_only = grid_sum(grid, [&](double eta, double zeta) {
        return greens.g0(0.0, 0.0, t, eta, zeta, v) * payoff(eta, zeta);
    });
    CHECK(std::abs(with_g1 - g0_only) <= 1e-10 * std::abs(g0_only));
}

TEST_CASE("narrow or mismatched boxes are rejected") {
    const KernelSet k(flat_params(0.03, 0.01, 20.0));
    const Greens greens(k);
    auto one = [](double, double) { return 1.0; };

    ConvolveOptions narrow;
    narrow.box_sd = 3.0;
    CHECK_THROWS_AS(greens.make_grid(0.0, 0.0, 0.25, 1.0, one, narrow), std::invalid_argument);

    // A valid grid built for one state leaves mass outside when convolved
    // from a distant state.
    const PayoffGrid grid = greens.make_grid(0.0, 0.0, 0.25, 1.0, one, {});
    const double far_y = 20.0 * std::sqrt(k.sigma_rr(0.25, 1.0));
    CHECK_THROWS_AS(greens.convolve_price(grid, far_y, 0.0, 0.25, 1.0), BoxTooNarrow);
}

TEST_CASE("staged pricing matches the closed forms to first order") {
    const KernelSet k(flat_params(0.03, 0.01, 20.0, -0.002));
    const Greens greens(k);
    const Pricer pricer(k);
    const double T1 = 0.5, T2 = 0.75;
    const double d = k.params().discount(T1, T2);
    const double eps = k.epsilon_at(T2);

    ConvolveOptions opts;
    opts.grid_n = 140;

    auto payoff_3m = [&](double z1, double z2) { return std::exp(z2 - z1) / d - 1.0; };
    const StagedResult r3 = greens.staged_price(payoff_3m, 0.0, 0.0, 0.0, T1, T2, opts);
    const double closed3 = pricer.price_sofr_3m(0.0, 0.0, T1, T2).total;
    CHECK(std::abs(r3.value - closed3) <= 2.0 * eps * eps * std::abs(closed3) + 1e-6);
    CHECK(std::abs(r3.v10_cross) < 1e-8);

    const double rbar_int = -std::log(d);
    auto payoff_1m = [&](double z1, double z2) { return (z2 - z1) + rbar_int; };
    const StagedResult r1 = greens.staged_price(payoff_1m, 0.0, 0.0, 0.0, T1, T2, opts);
    const double closed1 = pricer.price_sofr_1m(0.0, 0.0, T1, T2).total;
    CHECK(std::abs(r1.value - closed1) <= 2.0 * eps * eps * std::abs(closed1) + 1e-6);
}

TEST_CASE("staged pricing in the deterministic limit evaluates the forward path") {
    const KernelSet k(flat_params(0.03, 0.0, 20.0, -0.002));
    const Greens greens(k);
    const double T1 = 0.5, T2 = 0.75;
    const double d = k.params().discount(T1, T2);
    auto payoff = [&](double z1, double z2) { return std::exp(z2 - z1) / d - 1.0; };
    const StagedResult r = greens.staged_price(payoff, 0.0, 0.0, 0.0, T1, T2, {});
    // Zero volatility pins z increments at zero (the drift corrections cancel).
    CHECK(r.value == doctest::Approx(1.0 / d - 1.0).epsilon(1e-14));
}

TEST_CASE("piecewise parameters keep the kernel masses exact") {
    ModelParams p;
    p.alpha = PiecewiseCurve({0.0, 0.4}, {0.02, 0.045}, "alpha");
    p.sigma = PiecewiseCurve({0.0, 0.6}, {0.008, 0.012}, "sigma");
    p.gamma = PiecewiseCurve({0.0, 0.55}, {15.0, 22.0}, "gamma");
    p.y_star = PiecewiseCurve({0.0, 0.7}, {-0.003, 0.001}, "y_star");
    p.rbar = PiecewiseCurve::constant(0.02, "rbar");
    p.horizon = 2.0;
    const KernelSet k(p);
    const Greens greens(k);
    const PayoffGrid grid =
        greens.make_grid(0.0, 0.0, 0.25, 1.0, [](double, double) { return 1.0; }, {});
    double mass0 = 0.0, mass1 = 0.0;
    for (std::size_t i = 0; i < grid.eta_nodes.size(); ++i)
        for (std::size_t j = 0; j < grid.zeta_nodes.size(); ++j) {
            const double w = grid.eta_weights[i] * grid.zeta_weights[j];
            mass0 += w * greens.g0(0.0, 0.0, 0.25, grid.eta_nodes[i], grid.zeta_nodes[j], 1.0);
            mass1 += w * greens.g1(0.0, 0.0, 0.25, grid.eta_nodes[i], grid.zeta_nodes[j], 1.0);
        }
    CHECK(mass0 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(mass1) < 1e-8);
}

TEST_CASE("staged pricing rejects payoffs that are not increment-form") {
    const KernelSet k(flat_params(0.03, 0.01, 20.0));
    const Greens greens(k);
    auto bad = [](double z1, double z2) { return z1 + z2; };
    ConvolveOptions opts;
    opts.grid_n = 64;
    CHECK_THROWS_AS(greens.staged_price(bad, 0.0, 0.0, 0.0, 0.5, 0.75, opts),
                    std::invalid_argument);
}
