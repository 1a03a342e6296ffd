#pragma once

// Test-side numerical oracles, kept independent of the library's quadrature
// path: plain trapezoid / adaptive Simpson rules and the constant-coefficient
// closed forms of the kernels.

#include <cmath>
#include <cstdint>
#include <functional>

namespace oracles {

inline double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
    double sum = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i)
        sum += f(a + (b - a) * i / n);
    return sum * (b - a) / n;
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-14) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Constant-coefficient closed forms (smile off), anchored at any t.
struct ConstCoef {
    double alpha;
    double sigma;

    double phi(double t, double v) const { return std::exp(-alpha * (v - t)); }
    double sigma_rr(double t, double v) const {
        const double tau = v - t;
        if (alpha < 1e-14)
            return sigma * sigma * tau;
        return sigma * sigma * (1.0 - std::exp(-2.0 * alpha * tau)) / (2.0 * alpha);
    }
    double b_star(double t, double v) const {
        const double tau = v - t;
        if (alpha < 1e-14)
            return tau;
        return (1.0 - std::exp(-alpha * tau)) / alpha;
    }
    double sigma_rz(double t, double v) const {
        const double tau = v - t;
        if (alpha < 1e-14)
            return 0.5 * sigma * sigma * tau * tau;
        const double e = 1.0 - std::exp(-alpha * tau);
        return sigma * sigma * e * e / (2.0 * alpha * alpha);
    }
    double sigma_zz(double t, double v) const {
        const double tau = v - t;
        if (alpha < 1e-14)
            return sigma * sigma * tau * tau * tau / 3.0;
        const double a = alpha;
        return sigma * sigma / (a * a) *
               (tau - 2.0 * (1.0 - std::exp(-a * tau)) / a +
                (1.0 - std::exp(-2.0 * a * tau)) / (2.0 * a));
    }
};

// Small deterministic generator for property-test inputs.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    double uniform(double lo, double hi) {
        state_ ^= state_ << 13;
        state_ ^= state_ >> 7;
        state_ ^= state_ << 17;
        return lo + (hi - lo) * static_cast<double>(state_ >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

} // namespace oracles
