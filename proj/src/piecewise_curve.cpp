#include "hwsmile/piecewise_curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hwsmile {

PiecewiseCurve::PiecewiseCurve(std::vector<double> breakpoints, std::vector<double> values,
                               std::string name)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)), name_(std::move(name)) {
    if (values_.empty())
        throw std::invalid_argument(name_ + ": needs at least one value");
    if (breakpoints_.size() != values_.size())
        throw std::invalid_argument(name_ + ": breakpoints and values must have the same size");
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
        if (!(breakpoints_[i] < breakpoints_[i + 1]))
            throw std::invalid_argument(name_ + ": breakpoints must be strictly increasing");
    }
    for (double b : breakpoints_) {
        if (!std::isfinite(b))
            throw std::invalid_argument(name_ + ": breakpoints must be finite");
    }
    for (double v : values_) {
        if (!std::isfinite(v))
            throw std::invalid_argument(name_ + ": values must be finite");
    }
}

PiecewiseCurve PiecewiseCurve::constant(double value, std::string name) {
    return PiecewiseCurve({0.0}, {value}, std::move(name));
}

std::size_t PiecewiseCurve::index_of(double t) const {
    // First breakpoint strictly greater than t; the interval starting at a
    // breakpoint owns it (right-continuity).
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    if (it == breakpoints_.begin())
        return 0;
    return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

double PiecewiseCurve::operator()(double t) const { return values_[index_of(t)]; }

double PiecewiseCurve::integral(double a, double b) const {
    if (b < a)
        throw std::invalid_argument(name_ + ": integral bounds out of order");
    double sum = 0.0;
    for_segments(a, b, [&](double l, double r, double v) { sum += v * (r - l); });
    return sum;
}

double PiecewiseCurve::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

double PiecewiseCurve::max_abs() const {
    double m = 0.0;
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

PiecewiseCurve PiecewiseCurve::scaled(double factor) const {
    std::vector<double> scaled_values(values_);
    for (double& v : scaled_values)
        v *= factor;
    return PiecewiseCurve(breakpoints_, std::move(scaled_values), name_);
}

} // namespace hwsmile
