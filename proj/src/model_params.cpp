#include "hwsmile/model_params.hpp"

#include <cmath>
#include <stdexcept>

namespace hwsmile {

void QuadConfig::validate() const {
    if (nodes_per_segment < 4)
        throw std::invalid_argument("quadrature.nodes_per_segment must be >= 4");
    if (inner_grid_points < 2)
        throw std::invalid_argument("quadrature.inner_grid_points must be >= 2");
    if (!(gamma_floor > 0.0) || gamma_floor > 1e-4)
        throw std::invalid_argument("quadrature.gamma_floor must be in (0, 1e-4]");
}

std::string to_string(ContractKind kind) {
    switch (kind) {
    case ContractKind::Sofr1M:
        return "sofr1m";
    case ContractKind::Sofr3M:
        return "sofr3m";
    case ContractKind::Eurodollar:
        return "eurodollar";
    case ContractKind::Forward:
        return "forward";
    }
    throw std::invalid_argument("unknown contract kind");
}

ContractKind contract_kind_from_string(const std::string& s) {
    if (s == "sofr1m")
        return ContractKind::Sofr1M;
    if (s == "sofr3m")
        return ContractKind::Sofr3M;
    if (s == "eurodollar")
        return ContractKind::Eurodollar;
    if (s == "forward")
        return ContractKind::Forward;
    throw std::invalid_argument("contract kind must be one of sofr1m|sofr3m|eurodollar|forward, got \"" + s +
                                "\"");
}

void ContractSpec::validate(double horizon) const {
    if (!(t1 >= 0.0))
        throw std::invalid_argument("contract t1 must be >= 0");
    if (!(t1 < t2))
        throw std::invalid_argument("contract requires t1 < t2");
    if (!(t2 <= horizon))
        throw std::invalid_argument("contract t2 exceeds model horizon");
    if (!(delta > 0.0))
        throw std::invalid_argument("contract delta must be positive");
}

void ModelParams::validate() const {
    if (!(horizon > 0.0))
        throw std::invalid_argument("horizon must be positive");
    quadrature.validate();
    if (sigma.min_value() < 0.0)
        throw std::invalid_argument("sigma must be non-negative");
    if (gamma.min_value() < 0.0)
        throw std::invalid_argument("gamma must be non-negative");
    if (alpha.min_value() < 0.0)
        throw std::invalid_argument("alpha must be non-negative");
}

double ModelParams::discount(double t1, double t2) const {
    if (t1 > t2)
        throw std::invalid_argument("discount requires t1 <= t2");
    return std::exp(-rbar.integral(t1, t2));
}

ModelParams ModelParams::with_sigma_scaled(double factor) const {
    ModelParams scaled(*this);
    scaled.sigma = sigma.scaled(factor);
    return scaled;
}

ModelParams ModelParams::hull_white_proxy() const {
    ModelParams hw(*this);
    hw.gamma = PiecewiseCurve::constant(quadrature.gamma_floor, "gamma");
    hw.y_star = PiecewiseCurve::constant(0.0, "y_star");
    return hw;
}

} // namespace hwsmile
