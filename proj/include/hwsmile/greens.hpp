#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "hwsmile/kernels.hpp"

namespace hwsmile {

// Bivariate Gaussian density with covariance [[rr, rz], [rz, zz]].
struct Gaussian2D {
    Gaussian2D(double mean_y, double mean_z, const Cov2& cov);

    double density(double y, double z) const;

    double mean_y, mean_z;
    Cov2 cov;
    double det, inv_rr, inv_rz, inv_zz, norm;
};

class DegenerateKernel : public std::domain_error {
  public:
    DegenerateKernel() : std::domain_error("deterministic limit; use point mass") {}
};

class BoxTooNarrow : public std::runtime_error {
  public:
    explicit BoxTooNarrow(const std::string& msg) : std::runtime_error(msg) {}
};

// Payoff sampled on a tensor Gauss-Legendre lattice over a bounding box.
struct PayoffGrid {
    std::vector<double> eta_nodes, zeta_nodes;
    std::vector<double> eta_weights, zeta_weights;
    std::vector<double> values; // row-major, [i_eta * zeta_nodes.size() + j]
    double eta_lo = 0.0, eta_hi = 0.0, zeta_lo = 0.0, zeta_hi = 0.0;
    double box_sd = 0.0;
    bool exp_tilt_zeta = false; // payoff grows like e^zeta

    double value(std::size_t i, std::size_t j) const { return values[i * zeta_nodes.size() + j]; }
};

struct ConvolveOptions {
    int grid_n = 200;     // nodes per side of the payoff lattice
    double box_sd = 10.0; // half-width of the box in standard deviations
};

struct StagedResult {
    double value = 0.0;
    // Outer-stage contribution of the first-order kernel against the
    // (z-independent) inner value; vanishes analytically and is reported so
    // callers can verify rather than assume.
    double v10_cross = 0.0;
};

// Perturbative pricing kernel G0 + G1 and direct 2D convolution pricing.
// G0 is the Gaussian kernel in (y, z); G1 applies the first-order smile and
// skew correction as shift operators and closed-form Gaussian derivatives
// acting on d/dz G0. Serves as the order-epsilon oracle for the closed-form
// prices. The z state is measured relative to the pricing time, so all
// entry points take z = 0 without loss of generality.
class Greens {
  public:
    explicit Greens(const KernelSet& kernels);

    double g0(double y, double z, double t, double eta, double zeta, double v) const;
    double g1(double y, double z, double t, double eta, double zeta, double v) const;

    PayoffGrid make_grid(double y, double z, double t, double v,
                         const std::function<double(double, double)>& payoff,
                         const ConvolveOptions& opts = {}, bool exp_tilt_zeta = false) const;

    double convolve_price(const PayoffGrid& grid, double y, double z, double t, double v) const;

    // Prices a payoff on (z_{T1}, z_{T2}): inner convolution over [T1, T2],
    // outer convolution over [t, T1], both with G0 + G1. The payoff must
    // depend on its two arguments only through their difference (checked).
    StagedResult staged_price(const std::function<double(double, double)>& payoff, double y,
                              double z, double t, double T1, double T2,
                              const ConvolveOptions& opts = {}) const;

    const KernelSet& kernels() const { return k_; }

  private:
    struct TimeNode {
        double w;      // quadrature weight
        double gamma;  // gamma(t1)
        double psifac; // psi_r(t, t1)
        double phi;    // phi_r(t, t1)
        double ystar;  // y_star(t1)
        double dy, dz; // argument shifts
        double srr, srz, bstar; // Sigma_rr(t,t1), Sigma_rz(t,t1), B*(t,t1)
    };
    struct Slice {
        double t, v;
        double phi_tv, bstar_tv;
        double srz_tv, szz_tv;
        double srz_0t, srr_0t; // anchors of mu*
        Cov2 cov;
        double det, inv_rr, inv_rz, inv_zz, norm;
        double r1_integral; // int_t^v R*_1
        std::vector<TimeNode> nodes;
        double mu_star(double y) const;
    };

    const Slice& slice(double t, double v) const;
    double g1_slice(const Slice& s, double y, double z, double eta, double zeta) const;
    double deterministic_increment(double a, double b) const;

    const KernelSet& k_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<long long, long long>, std::shared_ptr<Slice>> slices_;
};

} // namespace hwsmile
