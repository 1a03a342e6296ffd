#include "hwsmile/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hwsmile {

namespace detail {

double sinh_over(double g, double x, double floor) {
    const double gx = g * x;
    if (std::abs(g) <= floor)
        return x * (1.0 + gx * gx / 6.0);
    return std::sinh(gx) / g;
}

double cosh_minus_one(double g, double x, double floor) {
    const double gx = g * x;
    if (std::abs(g) <= floor)
        return 0.5 * gx * gx * (1.0 + gx * gx / 12.0);
    // 2 sinh^2(gx/2) keeps precision where cosh(gx) - 1 would cancel.
    const double s = std::sinh(0.5 * gx);
    return 2.0 * s * s;
}

} // namespace detail

namespace {

constexpr double kTimeGranularity = 1e12; // memo keys round times to 1e-12

std::int64_t round_key(double t) { return static_cast<std::int64_t>(std::llround(t * kTimeGranularity)); }

void require_order(double t, double v, const char* what) {
    if (t > v)
        throw std::invalid_argument(std::string(what) + ": time arguments out of order");
}

} // namespace

std::size_t KernelSet::KeyHash::operator()(const Key& k) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::uint64_t x : {static_cast<std::uint64_t>(k.a), static_cast<std::uint64_t>(k.b),
                            static_cast<std::uint64_t>(k.c)}) {
        x *= 0xbf58476d1ce4e5b9ull;
        x ^= x >> 31;
        h = (h ^ x) * 0x94d049bb133111ebull;
    }
    return static_cast<std::size_t>(h);
}

KernelSet::KernelSet(ModelParams params) : params_(std::move(params)) {
    params_.validate();
    auto add = [&](const PiecewiseCurve& c) {
        cut_times_.insert(cut_times_.end(), c.breakpoints().begin(), c.breakpoints().end());
    };
    add(params_.alpha);
    add(params_.sigma);
    add(params_.gamma);
    add(params_.y_star);
    add(params_.rbar);
    std::sort(cut_times_.begin(), cut_times_.end());
    cut_times_.erase(std::unique(cut_times_.begin(), cut_times_.end()), cut_times_.end());
}

std::vector<double> KernelSet::panels(double a, double b) const {
    return make_panels(a, b, cut_times_);
}

template <class Fn>
double KernelSet::cached(Memo& table, Key key, Fn&& compute) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = table.find(key);
        if (it != table.end())
            return it->second;
    }
    const double value = compute();
    std::lock_guard<std::mutex> lock(mutex_);
    table.emplace(key, value);
    return value;
}

double KernelSet::phi_r(double t, double v) const {
    require_order(t, v, "phi_r");
    return std::exp(-params_.alpha.integral(t, v));
}

double KernelSet::sigma_rr(double t, double v) const {
    require_order(t, v, "sigma_rr");
    if (v - t <= 0.0)
        return 0.0;
    // Exact per sub-segment on which both alpha and sigma are constant:
    //   contribution = sigma^2 e^{-2 A(b,v)} (1 - e^{-2 alpha (b-a)}) / (2 alpha)
    // with A(b,v) the remaining alpha integral to the right of the segment.
    const double total_alpha = params_.alpha.integral(t, v);
    double consumed = 0.0; // alpha integral over [t, current segment end]
    double sum = 0.0;
    params_.alpha.for_segments(t, v, [&](double l, double r, double a) {
        params_.sigma.for_segments(l, r, [&](double sl, double sr, double s) {
            const double len = sr - sl;
            consumed += a * len;
            const double right_tail = total_alpha - consumed; // int_{sr}^{v} alpha
            const double damp = std::exp(-2.0 * right_tail);
            double piece;
            if (a < 1e-14) {
                piece = len;
            } else {
                piece = -std::expm1(-2.0 * a * len) / (2.0 * a);
            }
            sum += s * s * damp * piece;
        });
    });
    return sum;
}

double KernelSet::psi_r(double t, double v) const {
    require_order(t, v, "psi_r");
    const double g = params_.gamma(v); // gamma at the outer time
    return std::exp(0.5 * g * g * sigma_rr(t, v));
}

double KernelSet::h_integral(double t, double v) const {
    require_order(t, v, "sigma_rz");
    if (v - t <= 0.0)
        return 0.0;
    return cached(memo_h_, {round_key(t), round_key(v), 0}, [&] {
        auto h = [&](double s) { return psi_r(t, s) * sigma_rr(t, s) / phi_r(t, s); };
        return gl_composite(h, panels(t, v), gl_order());
    });
}

double KernelSet::sigma_rz(double t, double v) const {
    require_order(t, v, "sigma_rz");
    if (v - t <= 0.0)
        return 0.0;
    // phi_r(u,v) = phi_r(t,v)/phi_r(t,u) turns the kernel into a cumulative
    // integral of a function of u alone.
    return phi_r(t, v) * h_integral(t, v);
}

double KernelSet::sigma_zz_raw(double t, double v) const {
    // 2 int_t^v psi_r(t,u) phi_r(t,u) H(u) du with H the cumulative integrand
    // of sigma_rz; H is advanced panel by panel, partial values inside a panel
    // come from a nested Gauss-Legendre pass.
    const std::vector<double> edges = panels(t, v);
    const int order = gl_order();
    auto h = [&](double s) { return psi_r(t, s) * sigma_rr(t, s) / phi_r(t, s); };
    double h_cum = 0.0;
    double sum = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double l = edges[p];
        const double r = edges[p + 1];
        auto outer = [&](double u) {
            const double h_u = h_cum + gl_panel(h, l, u, order);
            return psi_r(t, u) * phi_r(t, u) * h_u;
        };
        sum += gl_panel(outer, l, r, order);
        h_cum += gl_panel(h, l, r, order);
    }
    return 2.0 * sum;
}

double KernelSet::sigma_zz(double t, double v) const {
    require_order(t, v, "sigma_zz");
    if (v - t <= 0.0)
        return 0.0;
    return cached(memo_szz_, {round_key(t), round_key(v), 0}, [&] { return sigma_zz_raw(t, v); });
}

double KernelSet::b_star_raw(double t, double v) const {
    auto f = [&](double u) { return psi_r(t, u) * phi_r(t, u); };
    return gl_composite(f, panels(t, v), gl_order());
}

double KernelSet::b_star(double t, double v) const {
    require_order(t, v, "b_star");
    if (v - t <= 0.0)
        return 0.0;
    return cached(memo_bstar_, {round_key(t), round_key(v), 0}, [&] { return b_star_raw(t, v); });
}

double KernelSet::b_plus_raw(double t, double t1, double v) const {
    auto f = [&](double u) { return psi_r(t, u) * phi_r(t1, u); };
    return gl_composite(f, panels(t1, v), gl_order());
}

double KernelSet::b_plus(double t, double t1, double v) const {
    if (t > t1 || t1 > v)
        throw std::invalid_argument("b_plus: requires t <= t1 <= v");
    if (v - t1 <= 0.0)
        return 0.0;
    return cached(memo_bplus_, {round_key(t), round_key(t1), round_key(v)},
                  [&] { return b_plus_raw(t, t1, v); });
}

double KernelSet::mu_star(double y, double t, double v) const {
    require_order(t, v, "mu_star");
    const double b = b_star(t, v);
    // The inner kernels anchor at global time zero.
    return b * (y + sigma_rz(0.0, t)) + 0.5 * b * b * sigma_rr(0.0, t);
}

double KernelSet::v_c(double t, double u, double v) const {
    if (t > u || u > v)
        throw std::invalid_argument("v_c: requires t <= u <= v");
    const double b = b_star(u, v);
    return b * b * sigma_rr(t, u) + sigma_zz(u, v);
}

double KernelSet::v_c_tilde(double t, double T1, double T2) const {
    if (t > T1 || T1 > T2)
        throw std::invalid_argument("v_c_tilde: requires t <= T1 <= T2");
    const double b = b_star(T1, T2);
    return b * b * sigma_rr(t, T1);
}

std::pair<double, double> KernelSet::delta_shifts(double t, double u) const {
    require_order(t, u, "delta_shifts");
    const double g = params_.gamma(u);
    const double dy = g * sigma_rr(t, u) / phi_r(t, u);
    const double dz = g * sigma_rz(t, u) - b_star(t, u) * dy;
    return {dy, dz};
}

double KernelSet::y_star_cap(double t1, double t) const {
    if (t1 < 0.0 || t1 > t)
        throw std::invalid_argument("y_star_cap: requires 0 <= t1 <= t");
    const double g = params_.gamma(t1);
    return g * (params_.y_star(t1) - b_plus(0.0, t1, t) * sigma_rr(0.0, t1) - sigma_rz(0.0, t1));
}

double KernelSet::r_star_1_raw(double t) const {
    const double floor = params_.quadrature.gamma_floor;
    // Exponent of the sinh/cosh, with the gamma factor kept separate so the
    // guarded helpers can handle gamma below the floor.
    auto x_arg = [&](double t1) {
        return params_.y_star(t1) - b_plus(0.0, t1, t) * sigma_rr(0.0, t1) - sigma_rz(0.0, t1);
    };
    const double lead = detail::sinh_over(params_.gamma(t), x_arg(t), floor);
    auto integrand = [&](double t1) {
        const double c = detail::cosh_minus_one(params_.gamma(t1), x_arg(t1), floor);
        return psi_r(0.0, t1) * phi_r(t1, t) * sigma_rr(0.0, t1) * c;
    };
    const double tail = gl_composite(integrand, panels(0.0, t), gl_order());
    // Minus in front of the correction integral: this is the sign that keeps
    // the zero-coupon identity F(0,0,T) = D(0,T) exact at first order (the
    // total derivative of the bond expansion in T vanishes term by term).
    return -psi_r(0.0, t) * (lead - tail);
}

double KernelSet::r_star_1(double t) const {
    if (t < 0.0)
        throw std::invalid_argument("r_star_1: t must be >= 0");
    // At t = 0 only the skew term survives: -sinh(gamma(0) y*(0)) / gamma(0).
    return cached(memo_r1_, {round_key(t), 0, 0}, [&] { return r_star_1_raw(t); });
}

Cov2 KernelSet::covariance(double t, double v) const {
    Cov2 cov;
    cov.rr = sigma_rr(t, v);
    cov.rz = sigma_rz(t, v);
    cov.zz = sigma_zz(t, v);
    return cov;
}

EpsilonReport KernelSet::epsilon_report() const {
    EpsilonReport rep;
    const int n = 64;
    for (int i = 1; i <= n; ++i) {
        const double v = params_.horizon * i / n;
        const double g = params_.gamma(v);
        rep.epsilon = std::max(rep.epsilon, g * g * sigma_rr(0.0, v));
        rep.skew_scale = std::max(rep.skew_scale, std::abs(g * params_.y_star(v)));
    }
    return rep;
}

double KernelSet::epsilon_at(double horizon) const {
    double eps = 0.0;
    const int n = 64;
    for (int i = 1; i <= n; ++i) {
        const double v = horizon * i / n;
        const double g = params_.gamma(v);
        eps = std::max(eps, g * g * sigma_rr(0.0, v));
    }
    return eps;
}

} // namespace hwsmile
