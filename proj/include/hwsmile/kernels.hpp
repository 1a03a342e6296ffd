#pragma once

#include <cstdint>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hwsmile/model_params.hpp"
#include "hwsmile/quadrature.hpp"

namespace hwsmile {

namespace detail {

// sinh(g*x)/g with the removable g -> 0 singularity replaced by its series.
double sinh_over(double g, double x, double floor);

// cosh(g*x) - 1, series-guarded for small g so the difference keeps full
// relative precision.
double cosh_minus_one(double g, double x, double floor);

} // namespace detail

struct EpsilonReport {
    double epsilon = 0.0;    // sup over grid of gamma^2(v) * Sigma_rr(0, v)
    double skew_scale = 0.0; // sup over grid of |gamma(v) * y_star(v)|
};

struct Cov2 {
    double rr = 0.0;
    double rz = 0.0;
    double zz = 0.0;
};

// Deterministic integral functions of the model parameters:
//
//   phi_r(t,v)    = exp(-int_t^v alpha)
//   Sigma_rr(t,v) = int_t^v phi_r(u,v)^2 sigma(u)^2 du
//   psi_r(t,v)    = exp(gamma(v)^2 Sigma_rr(t,v) / 2)
//   Sigma_rz(t,v) = int_t^v psi_r(t,u) phi_r(u,v) Sigma_rr(t,u) du
//   Sigma_zz(t,v) = 2 int_t^v psi_r(t,u) Sigma_rz(t,u) du
//   B*(t,v)       = int_t^v psi_r(t,u) phi_r(t,u) du
//   B+(t,t1,v)    = int_{t1}^v psi_r(t,u) phi_r(t1,u) du
//   mu*(y,t,v)    = B*(t,v) (y + Sigma_rz(0,t)) + B*(t,v)^2 Sigma_rr(0,t) / 2
//
// phi_r and Sigma_rr are exact per piecewise-constant segment; the nested
// integrals use composite Gauss-Legendre split at every parameter breakpoint.
// Top-level results are memoized on time arguments rounded to 1e-12 so sweeps
// over settlement dates reuse prior work. Evaluation is logically pure; the
// memo cache is mutex-guarded so concurrent readers see consistent entries.
class KernelSet {
  public:
    explicit KernelSet(ModelParams params);

    const ModelParams& params() const { return params_; }

    double phi_r(double t, double v) const;
    double sigma_rr(double t, double v) const;
    double psi_r(double t, double v) const;
    double sigma_rz(double t, double v) const;
    double sigma_zz(double t, double v) const;
    double b_star(double t, double v) const;
    double b_plus(double t, double t1, double v) const;
    double mu_star(double y, double t, double v) const;

    // V_C(t,u,v) = B*(u,v)^2 Sigma_rr(t,u) + Sigma_zz(u,v); the tilde variant
    // keeps only the first piece.
    double v_c(double t, double u, double v) const;
    double v_c_tilde(double t, double T1, double T2) const;

    // (dy, dz) with dy = gamma(u) Sigma_rr(t,u) / phi_r(t,u) and
    // dz = gamma(u) Sigma_rz(t,u) - B*(t,u) dy.
    std::pair<double, double> delta_shifts(double t, double u) const;

    // Y*(t1,t) = gamma(t1) (y_star(t1) - B+(0,t1,t) Sigma_rr(0,t1) - Sigma_rz(0,t1)).
    double y_star_cap(double t1, double t) const;

    // First-order drift calibration term enforcing the curve fit.
    double r_star_1(double t) const;

    Cov2 covariance(double t, double v) const;

    EpsilonReport epsilon_report() const;
    // Same sup taken over [0, horizon] instead of [0, T_m].
    double epsilon_at(double horizon) const;

    // Guarded helpers bound to this parameter set's gamma_floor.
    double sinh_over(double g, double x) const {
        return detail::sinh_over(g, x, params_.quadrature.gamma_floor);
    }
    double cosh_minus_one(double g, double x) const {
        return detail::cosh_minus_one(g, x, params_.quadrature.gamma_floor);
    }

    // Panel edges for [a, b] split at every parameter breakpoint.
    std::vector<double> panels(double a, double b) const;
    int gl_order() const { return params_.quadrature.nodes_per_segment; }

  private:
    double sigma_zz_raw(double t, double v) const;
    double b_star_raw(double t, double v) const;
    double b_plus_raw(double t, double t1, double v) const;
    double r_star_1_raw(double t) const;

    // int_t^v psi_r(t,s) Sigma_rr(t,s) / phi_r(t,s) ds; Sigma_rz(t,v) equals
    // phi_r(t,v) times this.
    double h_integral(double t, double v) const;

    struct Key {
        std::int64_t a, b, c;
        bool operator==(const Key& o) const { return a == o.a && b == o.b && c == o.c; }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };
    using Memo = std::unordered_map<Key, double, KeyHash>;

    template <class Fn>
    double cached(Memo& table, Key key, Fn&& compute) const;

    ModelParams params_;
    std::vector<double> cut_times_; // union of all curve breakpoints
    mutable std::mutex mutex_;
    mutable Memo memo_szz_, memo_bstar_, memo_bplus_, memo_r1_, memo_h_;
};

} // namespace hwsmile
