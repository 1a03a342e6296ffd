#include "hwsmile/pricing.hpp"

#include <cmath>
#include <stdexcept>

namespace hwsmile {

namespace {

void require_period(double t, double T1, double T2, const char* what) {
    if (!(t <= T1) || !(T1 < T2))
        throw std::invalid_argument(std::string(what) + ": requires t <= T1 < T2");
}

} // namespace

Pricer::Pricer(const KernelSet& kernels) : k_(kernels) {}

double Pricer::check_exponent(double x) const {
    if (std::abs(x) > 50.0)
        throw std::overflow_error("pricing exponent out of range; parameters look unrealistic");
    return x;
}

// Integral bracket of the compounded futures price: the zero-mean part of
// the first-order correction. The sinh argument couples the state carried
// from t with the in-period covariance terms.
double Pricer::phi_integral_3m(double y, double t, double T1, double T2) const {
    const double b_12 = k_.b_star(T1, T2);
    const double srr_t1 = k_.sigma_rr(t, T1);
    auto f = [&](double t1) {
        const double arg = k_.phi_r(t, t1) * y + k_.params().y_star(t1) +
                           b_12 * k_.phi_r(T1, t1) * srr_t1 + k_.sigma_rz(T1, t1);
        return k_.psi_r(t, t1) * k_.sinh_over(k_.params().gamma(t1), arg) + k_.r_star_1(t1);
    };
    const double integral = gl_composite(f, k_.panels(T1, T2), k_.gl_order());
    return integral - k_.mu_star(k_.phi_r(t, T1) * y, T1, T2) - k_.v_c(t, T1, T2);
}

PriceBreakdown Pricer::price_sofr_3m(double y, double t, double T1, double T2) const {
    require_period(t, T1, T2, "price_sofr_3m");
    const double d = k_.params().discount(T1, T2);
    const double expo =
        check_exponent(k_.mu_star(k_.phi_r(t, T1) * y, T1, T2) + 0.5 * k_.v_c(t, T1, T2));
    const double base = std::exp(expo) / d;
    const double phi = phi_integral_3m(y, t, T1, T2);

    PriceBreakdown out;
    out.v0 = base - 1.0;
    out.v1 = phi * base;
    out.total = out.v0 + out.v1;
    out.reference = 1.0 / d - 1.0;
    out.convexity = out.total - out.reference;
    return out;
}

PriceBreakdown Pricer::price_sofr_1m(double y, double t, double T1, double T2) const {
    require_period(t, T1, T2, "price_sofr_1m");
    const double log_d = -k_.params().rbar.integral(T1, T2);
    auto f = [&](double t1) {
        const double arg = k_.phi_r(t, t1) * y + k_.params().y_star(t1);
        return k_.psi_r(t, t1) * k_.sinh_over(k_.params().gamma(t1), arg) + k_.r_star_1(t1);
    };
    const double integral = gl_composite(f, k_.panels(T1, T2), k_.gl_order());

    PriceBreakdown out;
    out.v0 = -log_d + k_.mu_star(y * k_.phi_r(t, T1), T1, T2);
    out.total = -log_d + integral;
    out.v1 = out.total - out.v0;
    out.reference = -log_d;
    out.convexity = out.total - out.reference;
    return out;
}

double Pricer::f_one(double y, double t, double T) const {
    if (t > T)
        throw std::invalid_argument("f_one: requires t <= T");
    if (t == T)
        return 0.0;
    auto f = [&](double t1) {
        const double arg = k_.phi_r(t, t1) * y + k_.params().y_star(t1) -
                           k_.b_plus(t, t1, T) * k_.sigma_rr(t, t1) - k_.sigma_rz(t, t1);
        return k_.psi_r(t, t1) * k_.sinh_over(k_.params().gamma(t1), arg) + k_.r_star_1(t1);
    };
    const double integral = gl_composite(f, k_.panels(t, T), k_.gl_order());
    return integral - k_.mu_star(y, t, T) + 0.5 * k_.sigma_zz(t, T);
}

double Pricer::bond_price(double y, double t, double T) const {
    if (t > T)
        throw std::invalid_argument("bond_price: requires t <= T");
    const double d = k_.params().discount(t, T);
    const double expo = check_exponent(-k_.mu_star(y, t, T));
    return d * std::exp(expo) * (1.0 - f_one(y, t, T));
}

double Pricer::price_forward(double y, double t, double T1, double T2) const {
    require_period(t, T1, T2, "price_forward");
    const double d = k_.params().discount(T1, T2);
    const double expo = check_exponent(-k_.mu_star(y, t, T1) + k_.mu_star(y, t, T2));
    return std::exp(expo) / d * (1.0 - f_one(y, t, T1) + f_one(y, t, T2)) - 1.0;
}

PriceBreakdown Pricer::price_eurodollar(double y, double t, double T1, double T2) const {
    require_period(t, T1, T2, "price_eurodollar");
    const double d = k_.params().discount(T1, T2);
    const double b_12 = k_.b_star(T1, T2);
    const double srr_t1 = k_.sigma_rr(t, T1);
    const double vct = k_.v_c_tilde(t, T1, T2);
    const double mu = k_.mu_star(k_.phi_r(t, T1) * y, T1, T2);
    const double base = std::exp(check_exponent(mu + 0.5 * vct)) / d;

    // First-order bracket: bond-side correction integrated against the
    // kernel, with the state carried from t and the cross-variance picked up
    // by the shift operators acting on the exponential prefactor.
    auto f = [&](double t1) {
        const double arg = k_.phi_r(t, t1) * y + k_.params().y_star(t1) +
                           b_12 * k_.phi_r(T1, t1) * srr_t1 -
                           k_.b_plus(T1, t1, T2) * k_.sigma_rr(T1, t1) - k_.sigma_rz(T1, t1);
        return k_.psi_r(t, t1) * k_.sinh_over(k_.params().gamma(t1), arg) + k_.r_star_1(t1);
    };
    const double integral = gl_composite(f, k_.panels(T1, T2), k_.gl_order());
    const double bracket = integral - mu - vct + 0.5 * k_.sigma_zz(T1, T2);

    PriceBreakdown out;
    out.v0 = base - 1.0;
    out.v1 = bracket * base;
    out.total = out.v0 + out.v1;
    out.reference = 1.0 / d - 1.0;
    out.convexity = out.total - out.reference;
    return out;
}

double Pricer::price_hw(double y, double t, double T1, double T2, ContractKind kind) const {
    require_period(t, T1, T2, "price_hw");
    const double d = k_.params().discount(T1, T2);
    switch (kind) {
    case ContractKind::Sofr1M:
        return k_.params().rbar.integral(T1, T2) + k_.mu_star(y * k_.phi_r(t, T1), T1, T2);
    case ContractKind::Sofr3M:
        return std::exp(check_exponent(k_.mu_star(k_.phi_r(t, T1) * y, T1, T2) +
                                       0.5 * k_.v_c(t, T1, T2))) /
                   d -
               1.0;
    case ContractKind::Eurodollar:
        return std::exp(check_exponent(k_.mu_star(k_.phi_r(t, T1) * y, T1, T2) +
                                       0.5 * k_.v_c_tilde(t, T1, T2))) /
                   d -
               1.0;
    case ContractKind::Forward:
        break;
    }
    throw std::invalid_argument("price_hw: unsupported contract kind");
}

PriceBreakdown Pricer::convexity(const ContractSpec& spec) const {
    switch (spec.kind) {
    case ContractKind::Sofr3M:
        return price_sofr_3m(0.0, 0.0, spec.t1, spec.t2);
    case ContractKind::Sofr1M:
        return price_sofr_1m(0.0, 0.0, spec.t1, spec.t2);
    case ContractKind::Eurodollar: {
        PriceBreakdown out = price_eurodollar(0.0, 0.0, spec.t1, spec.t2);
        out.reference = price_forward(0.0, 0.0, spec.t1, spec.t2);
        out.convexity = out.total - out.reference;
        return out;
    }
    case ContractKind::Forward: {
        PriceBreakdown out;
        out.v0 = price_forward(0.0, 0.0, spec.t1, spec.t2);
        out.total = out.v0;
        out.reference = out.total;
        out.convexity = 0.0;
        return out;
    }
    }
    throw std::invalid_argument("convexity: unsupported contract kind");
}

double Pricer::sofr_1m_convexity_integral(double T1, double T2) const {
    require_period(0.0, T1, T2, "sofr_1m_convexity_integral");
    auto f = [&](double t1) {
        const double g = k_.params().gamma(t1);
        const double ys = k_.params().y_star(t1);
        return k_.psi_r(0.0, t1) *
               (k_.sinh_over(g, ys) - k_.sinh_over(g, ys - k_.sigma_rz(0.0, t1)));
    };
    return gl_composite(f, k_.panels(T1, T2), k_.gl_order());
}

} // namespace hwsmile
