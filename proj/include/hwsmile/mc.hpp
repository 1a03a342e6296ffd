#pragma once

#include <cstdint>
#include <vector>

#include "hwsmile/kernels.hpp"

namespace hwsmile {

struct SimConfig {
    long n_paths = 100000;
    double step = 1.0 / 365.0;
    std::uint64_t seed = 20240901;
    bool antithetic = true;

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n_paths = 0;
};

struct PathSnapshot {
    double y = 0.0;     // driver state
    double z = 0.0;     // int_0^t (r - rbar)
    double int_r = 0.0; // int_0^t r
};

struct NoArbRow {
    double t = 0.0;
    McEstimate estimate; // E[exp(-int_0^t r)]
    double discount = 0.0;
};

// Monte Carlo oracle. The driver advances by its exact transition (mean
// phi_r(t, t+dt) y, variance Sigma_rr(t, t+dt)); z and int r accumulate by
// trapezoid of the mapped short rate with R* truncated at first order, so
// the estimates carry an O(eps^2) residual alongside the statistical error.
// Paths draw from per-path counter-based substreams: parallel and serial
// runs produce identical results for a given seed.
class McEngine {
  public:
    explicit McEngine(const KernelSet& kernels);

    // Snapshot ensemble at the requested times (sorted, within horizon).
    std::vector<std::vector<PathSnapshot>> simulate_paths(double horizon,
                                                          const std::vector<double>& snap_times,
                                                          const SimConfig& cfg) const;

    McEstimate mc_price(const ContractSpec& spec, const SimConfig& cfg) const;

    std::vector<NoArbRow> mc_no_arbitrage(const std::vector<double>& t_grid,
                                          const SimConfig& cfg) const;

  private:
    struct Grid {
        std::vector<double> times;
        std::vector<double> phi_step;  // exact OU decay per step
        std::vector<double> sd_step;   // exact OU innovation s.d. per step
        std::vector<double> r1_node;   // R*_1 at grid nodes
        std::vector<double> gamma_node;
        std::vector<double> ystar_node;
        std::vector<double> rbar_cum;  // exact int_0^t rbar at grid nodes
        std::vector<std::size_t> snap_index;
    };

    Grid build_grid(double horizon, const std::vector<double>& snap_times,
                    const SimConfig& cfg) const;

    template <class Observer>
    void run_paths(const Grid& grid, const SimConfig& cfg, Observer&& observe) const;

    const KernelSet& k_;
};

// Compensated (Kahan) accumulator for the ensemble statistics.
class KahanSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace hwsmile
