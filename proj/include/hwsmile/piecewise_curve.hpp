#pragma once

#include <string>
#include <vector>

namespace hwsmile {

// Right-continuous piecewise-constant function of time with flat
// extrapolation on both sides. values[i] applies on [breakpoints[i],
// breakpoints[i+1]); the last value extends to +inf, the first to -inf.
class PiecewiseCurve {
  public:
    PiecewiseCurve(std::vector<double> breakpoints, std::vector<double> values,
                   std::string name = "curve");

    static PiecewiseCurve constant(double value, std::string name = "curve");

    double operator()(double t) const;

    // Exact integral over [a, b] (a <= b), summed segment by segment.
    double integral(double a, double b) const;

    // Visits the constant pieces of [a, b] in order: fn(left, right, value).
    template <class Fn>
    void for_segments(double a, double b, Fn&& fn) const {
        if (b <= a)
            return;
        std::size_t i = index_of(a);
        double left = a;
        while (left < b) {
            double right = (i + 1 < breakpoints_.size()) ? breakpoints_[i + 1] : b;
            if (right > b)
                right = b;
            if (right > left)
                fn(left, right, values_[i]);
            left = right;
            ++i;
            if (i >= values_.size()) {
                if (left < b)
                    fn(left, b, values_.back());
                break;
            }
        }
    }

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& values() const { return values_; }
    const std::string& name() const { return name_; }

    double min_value() const;
    double max_abs() const;

    // Same breakpoints, every value multiplied by factor.
    PiecewiseCurve scaled(double factor) const;

  private:
    std::size_t index_of(double t) const;

    std::vector<double> breakpoints_;
    std::vector<double> values_;
    std::string name_;
};

} // namespace hwsmile
