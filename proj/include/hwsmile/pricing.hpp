#pragma once

#include "hwsmile/kernels.hpp"

namespace hwsmile {

struct PriceBreakdown {
    double v0 = 0.0;        // zeroth-order value
    double v1 = 0.0;        // first-order smile/skew correction
    double total = 0.0;     // v0 + v1
    double reference = 0.0; // matching forward / log-discount baseline
    double convexity = 0.0; // total - reference
};

// Closed-form futures prices and convexities in the extended model, plus the
// smile-free zeroth-order baselines. All prices are undiscounted futures
// fair values; y is the state of the driver at time t.
class Pricer {
  public:
    explicit Pricer(const KernelSet& kernels);

    // Compounded (3M) backward-looking futures on [T1, T2].
    PriceBreakdown price_sofr_3m(double y, double t, double T1, double T2) const;

    // Simple-averaged (1M) backward-looking futures on [T1, T2].
    PriceBreakdown price_sofr_1m(double y, double t, double T1, double T2) const;

    // Zero-coupon bond F^T(y,t) and its first-order correction integral.
    double bond_price(double y, double t, double T) const;
    double f_one(double y, double t, double T) const;

    // Fair forward premium F^{T1}/F^{T2} - 1, first-order expansion.
    double price_forward(double y, double t, double T1, double T2) const;

    // Forward-looking (term-rate) futures on [T1, T2].
    PriceBreakdown price_eurodollar(double y, double t, double T1, double T2) const;

    // Zeroth-order (smile-free) fair values; evaluate on a parameter set
    // whose gamma sits at the floor for a true Hull-White baseline.
    double price_hw(double y, double t, double T1, double T2, ContractKind kind) const;

    // Convexity at y = 0, t = 0 against the contract's natural reference.
    PriceBreakdown convexity(const ContractSpec& spec) const;

    // Direct integral form of the 1M convexity; agrees with
    // convexity(Sofr1M) up to second-order terms.
    double sofr_1m_convexity_integral(double T1, double T2) const;

    const KernelSet& kernels() const { return k_; }

  private:
    double phi_integral_3m(double y, double t, double T1, double T2) const;
    double check_exponent(double x) const;

    const KernelSet& k_;
};

} // namespace hwsmile
