#include <cmath>

#include <stdexcept>

#include <doctest.h>

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

ModelParams desk_params() { return flat_params(0.03, 0.01, 20.0, -0.002); }

} // namespace

TEST_CASE("compounded futures price in the deterministic limit") {
    const KernelSet k(flat_params(0.03, 0.0, 20.0, 0.0));
    const Pricer p(k);
    const double d = k.params().discount(0.5, 0.75);
    const PriceBreakdown b = p.price_sofr_3m(0.0, 0.0, 0.5, 0.75);
    CHECK(b.total == 1.0 / d - 1.0);
    CHECK(b.v1 == 0.0);
    CHECK(b.convexity == 0.0);
}

TEST_CASE("compounded futures price reduces to the baseline without smile") {
    ModelParams p = flat_params(0.03, 0.01, 0.0, 0.0);
    p.gamma = PiecewiseCurve::constant(p.quadrature.gamma_floor, "gamma");
    const KernelSet k(p);
    const Pricer pricer(k);
    const PriceBreakdown b = pricer.price_sofr_3m(0.01, 0.0, 0.5, 0.75);
    const double hw = pricer.price_hw(0.01, 0.0, 0.5, 0.75, ContractKind::Sofr3M);
    CHECK(b.total == doctest::Approx(hw).epsilon(1e-10));
}

TEST_CASE("breakdown totals are consistent") {
    const KernelSet k(desk_params());
    const Pricer p(k);
    for (double y : {-0.01, 0.0, 0.02}) {
        const PriceBreakdown b3 = p.price_sofr_3m(y, 0.1, 0.5, 0.75);
        CHECK(b3.total == b3.v0 + b3.v1);
        const PriceBreakdown b1 = p.price_sofr_1m(y, 0.1, 0.5, 0.75);
        CHECK(b1.total == doctest::Approx(b1.v0 + b1.v1).epsilon(1e-15));
        const PriceBreakdown be = p.price_eurodollar(y, 0.1, 0.5, 0.75);
        CHECK(be.total == be.v0 + be.v1);
        CHECK(be.convexity == be.total - be.reference);
    }
    CHECK_THROWS_AS(p.price_sofr_3m(0.0, 0.6, 0.5, 0.75), std::invalid_argument);
}

TEST_CASE("averaged futures price in the deterministic limit") {
    const KernelSet k(flat_params(0.03, 0.0, 20.0, 0.0));
    const Pricer p(k);
    const double log_d = std::log(k.params().discount(0.5, 0.75));
    const PriceBreakdown b = p.price_sofr_1m(0.0, 0.0, 0.5, 0.75);
    CHECK(b.total == doctest::Approx(-log_d).epsilon(1e-15));
    CHECK(b.convexity == 0.0);
}

TEST_CASE("averaged futures price keeps the intrinsic drift over the baseline") {
    // Without smile the first-order term integrates R*_1 = Sigma_rz(0,.)
    // over the accrual period, which exceeds the zeroth-order mu* by
    // Sigma_zz(T1,T2)/2 exactly.
    ModelParams p = flat_params(0.03, 0.01, 0.0, 0.0);
    p.gamma = PiecewiseCurve::constant(1e-6, "gamma");
    const KernelSet k(p);
    const Pricer pricer(k);
    const double T1 = 0.5, T2 = 0.75;
    const PriceBreakdown b = pricer.price_sofr_1m(0.0, 0.0, T1, T2);
    const double hw = pricer.price_hw(0.0, 0.0, T1, T2, ContractKind::Sofr1M);
    CHECK(b.total - hw == doctest::Approx(0.5 * k.sigma_zz(T1, T2)).epsilon(1e-6));
}

TEST_CASE("bond price matches the discount curve at the calibration point") {
    const KernelSet k(desk_params());
    const Pricer p(k);
    for (double T : {0.25, 0.5, 1.0, 2.0, 5.0}) {
        const double bond = p.bond_price(0.0, 0.0, T);
        const double d = k.params().discount(0.0, T);
        CHECK(bond / d == doctest::Approx(1.0).epsilon(1e-7));
    }
}

TEST_CASE("bond price in the deterministic limit at the anchor state") {
    const KernelSet k(flat_params(0.03, 0.0, 20.0, -0.002));
    const Pricer p(k);
    CHECK(p.bond_price(0.0, 0.0, 2.0) ==
          doctest::Approx(k.params().discount(0.0, 2.0)).epsilon(1e-14));
}

TEST_CASE("forward premium limits and bond-ratio consistency") {
    const KernelSet kz(flat_params(0.03, 0.0, 20.0, 0.0));
    const Pricer pz(kz);
    const double dz = kz.params().discount(0.5, 0.75);
    CHECK(pz.price_forward(0.0, 0.0, 0.5, 0.75) == doctest::Approx(1.0 / dz - 1.0).epsilon(1e-14));

    const KernelSet k(desk_params());
    const Pricer p(k);
    const double d = k.params().discount(0.5, 0.75);
    CHECK(p.price_forward(0.0, 0.0, 0.5, 0.75) == doctest::Approx(1.0 / d - 1.0).epsilon(1e-9));

    const double eps = k.epsilon_at(0.75);
    for (double y : {-0.01, 0.005}) {
        const double direct = p.price_forward(y, 0.0, 0.5, 0.75);
        const double ratio = p.bond_price(y, 0.0, 0.5) / p.bond_price(y, 0.0, 0.75) - 1.0;
        CHECK(std::abs(direct - ratio) <= 2.0 * eps * eps * std::abs(ratio) + 1e-12);
    }
}

TEST_CASE("forward-looking futures price limits") {
    const KernelSet kz(flat_params(0.03, 0.0, 20.0, 0.0));
    const Pricer pz(kz);
    const double dz = kz.params().discount(0.5, 0.75);
    CHECK(pz.price_eurodollar(0.0, 0.0, 0.5, 0.75).total == 1.0 / dz - 1.0);

    ModelParams hwp = flat_params(0.03, 0.01, 0.0, 0.0);
    hwp.gamma = PiecewiseCurve::constant(1e-6, "gamma");
    const KernelSet k(hwp);
    const Pricer p(k);
    const PriceBreakdown b = p.price_eurodollar(0.004, 0.0, 0.5, 0.75);
    const double hw = p.price_hw(0.004, 0.0, 0.5, 0.75, ContractKind::Eurodollar);
    CHECK(b.total == doctest::Approx(hw).epsilon(1e-10));
}

TEST_CASE("baseline prices in the deterministic limit") {
    const KernelSet k(flat_params(0.03, 0.0, 20.0, 0.0));
    const Pricer p(k);
    const double d = k.params().discount(0.5, 0.75);
    CHECK(p.price_hw(0.0, 0.0, 0.5, 0.75, ContractKind::Sofr1M) ==
          doctest::Approx(-std::log(d)).epsilon(1e-15));
    CHECK(p.price_hw(0.0, 0.0, 0.5, 0.75, ContractKind::Sofr3M) == 1.0 / d - 1.0);
    CHECK(p.price_hw(0.0, 0.0, 0.5, 0.75, ContractKind::Eurodollar) == 1.0 / d - 1.0);
    CHECK_THROWS_AS(p.price_hw(0.0, 0.0, 0.5, 0.75, ContractKind::Forward),
                    std::invalid_argument);
}

TEST_CASE("compounded minus forward-looking baseline follows the variance split") {
    const KernelSet k(flat_params(0.03, 0.012, 1e-6, 0.0));
    const Pricer p(k);
    const double T1 = 0.5, T2 = 0.75;
    const double d = k.params().discount(T1, T2);
    const double direct = p.price_hw(0.0, 0.0, T1, T2, ContractKind::Sofr3M) -
                          p.price_hw(0.0, 0.0, T1, T2, ContractKind::Eurodollar);
    const double identity = std::exp(k.mu_star(0.0, T1, T2) + 0.5 * k.v_c_tilde(0.0, T1, T2)) *
                            (std::exp(0.5 * k.sigma_zz(T1, T2)) - 1.0) / d;
    CHECK(direct == doctest::Approx(identity).epsilon(1e-12));
    CHECK(direct > 0.0);
}

TEST_CASE("convexity vanishes exactly at zero volatility for every kind") {
    const KernelSet k(flat_params(0.03, 0.0, 20.0, -0.002));
    const Pricer p(k);
    for (ContractKind kind : {ContractKind::Sofr3M, ContractKind::Sofr1M,
                              ContractKind::Eurodollar, ContractKind::Forward}) {
        ContractSpec spec;
        spec.kind = kind;
        spec.t1 = 0.5;
        spec.t2 = kind == ContractKind::Sofr1M ? 0.5 + 1.0 / 12.0 : 0.75;
        spec.delta = spec.t2 - spec.t1;
        CHECK(p.convexity(spec).convexity == 0.0);
    }
}

TEST_CASE("averaged-contract convexity is positive without skew") {
    const KernelSet k(flat_params(0.03, 0.01, 20.0, 0.0));
    const Pricer p(k);
    ContractSpec spec;
    spec.kind = ContractKind::Sofr1M;
    spec.t1 = 0.5;
    spec.t2 = 0.5 + 1.0 / 12.0;
    spec.delta = 1.0 / 12.0;
    const PriceBreakdown b = p.convexity(spec);
    CHECK(b.convexity > 0.0);
    CHECK(b.convexity == b.total - b.reference);

    // The direct integral form differs only by the second-order correction
    // inside R*_1.
    const double integral = p.sofr_1m_convexity_integral(spec.t1, spec.t2);
    CHECK(integral == doctest::Approx(b.convexity).epsilon(1e-4));
    CHECK(integral > 0.0);
}

TEST_CASE("first-order correction scales with the expansion parameter") {
    // Skew-dominated regime: the surviving O(epsilon) piece of the
    // correction carries a y*^2 coefficient, so the scaling is measured
    // where that piece dominates the O(epsilon^2) remainder.
    const ModelParams base = flat_params(0.03, 0.004, 20.0, -0.01);
    std::vector<double> log_eps, log_v1;
    for (double lambda : {0.5, 1.0, 2.0}) {
        const KernelSet k(base.with_sigma_scaled(lambda));
        const Pricer p(k);
        log_eps.push_back(std::log(k.epsilon_at(0.75)));
        log_v1.push_back(std::log(std::abs(p.price_sofr_3m(0.0, 0.0, 0.5, 0.75).v1)));
    }
    // least-squares slope over the three points
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < 3; ++i) {
        mx += log_eps[i] / 3.0;
        my += log_v1[i] / 3.0;
    }
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 3; ++i) {
        num += (log_eps[i] - mx) * (log_v1[i] - my);
        den += (log_eps[i] - mx) * (log_eps[i] - mx);
    }
    const double slope = num / den;
    CHECK(slope > 0.9);
    CHECK(slope < 1.1);
}

TEST_CASE("unrealistic exponents are rejected") {
    const KernelSet k(flat_params(0.03, 0.5, 20.0, 0.0, 2.0));
    const Pricer p(k);
    CHECK_THROWS_AS(p.price_sofr_3m(0.0, 0.0, 0.5, 4.9), std::overflow_error);
}
