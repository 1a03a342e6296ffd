#pragma once

#include <string>

#include "hwsmile/piecewise_curve.hpp"

namespace hwsmile {

// Quadrature controls. Composite Gauss-Legendre panels are split at every
// parameter breakpoint; long segments are further capped so panels never
// exceed one year.
struct QuadConfig {
    int nodes_per_segment = 16;
    int inner_grid_points = 64;
    double gamma_floor = 1e-4;

    void validate() const;
};

enum class ContractKind { Sofr1M, Sofr3M, Eurodollar, Forward };

std::string to_string(ContractKind kind);
ContractKind contract_kind_from_string(const std::string& s);

struct ContractSpec {
    ContractKind kind = ContractKind::Sofr3M;
    double t1 = 0.0;
    double t2 = 0.0;
    double delta = 0.0; // accrual year fraction for [t1, t2]

    void validate(double horizon) const;
};

// Full model state: the five time-dependent parameter curves plus the
// calibration horizon and quadrature settings. Immutable after construction.
//
//   dy = -alpha(t) y dt + sigma(t) dW,   y_0 = 0
//   r(y,t) = rbar(t) + R*(t) + sinh(gamma(t) (y + y_star(t))) / gamma(t)
struct ModelParams {
    PiecewiseCurve alpha = PiecewiseCurve::constant(0.0, "alpha");
    PiecewiseCurve sigma = PiecewiseCurve::constant(0.0, "sigma");
    PiecewiseCurve gamma = PiecewiseCurve::constant(0.0, "gamma");
    PiecewiseCurve y_star = PiecewiseCurve::constant(0.0, "y_star");
    PiecewiseCurve rbar = PiecewiseCurve::constant(0.0, "rbar");
    double horizon = 0.0;
    QuadConfig quadrature;

    void validate() const;

    // exp(-int_{t1}^{t2} rbar), exact per piecewise-constant segment.
    double discount(double t1, double t2) const;

    ModelParams with_sigma_scaled(double factor) const;

    // Smile/skew switched off: gamma pinned at the series-guard floor and
    // y_star at zero. Used as the default comparison parameter set.
    ModelParams hull_white_proxy() const;
};

} // namespace hwsmile
