#include "hwsmile/mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hwsmile/philox.hpp"

namespace hwsmile {

void SimConfig::validate() const {
    if (n_paths < 2)
        throw std::invalid_argument("mc: n_paths must be >= 2");
    if (!(step > 0.0) || step > 1.0 / 52.0)
        throw std::invalid_argument("mc: step must be positive and at most 1/52");
    if (antithetic && (n_paths % 2) != 0)
        throw std::invalid_argument("mc: antithetic pairing needs an even n_paths");
}

McEngine::McEngine(const KernelSet& kernels) : k_(kernels) {}

McEngine::Grid McEngine::build_grid(double horizon, const std::vector<double>& snap_times,
                                    const SimConfig& cfg) const {
    if (!(horizon > 0.0) || horizon > k_.params().horizon + 1e-12)
        throw std::invalid_argument("mc: horizon must be positive and within the model horizon");
    for (double s : snap_times)
        if (s < 0.0 || s > horizon + 1e-12)
            throw std::invalid_argument("mc: snapshot time outside [0, horizon]");

    Grid grid;
    std::vector<double>& times = grid.times;
    const long n_uniform = std::lround(std::ceil(horizon / cfg.step - 1e-9));
    times.reserve(static_cast<std::size_t>(n_uniform) + 8);
    for (long i = 0; i <= n_uniform; ++i)
        times.push_back(std::min(horizon, i * cfg.step));
    for (const PiecewiseCurve* c :
         {&k_.params().alpha, &k_.params().sigma, &k_.params().gamma, &k_.params().y_star,
          &k_.params().rbar}) {
        for (double b : c->breakpoints())
            if (b > 0.0 && b < horizon)
                times.push_back(b);
    }
    times.insert(times.end(), snap_times.begin(), snap_times.end());
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                times.end());
    if (times.front() > 1e-12)
        times.insert(times.begin(), 0.0);
    else
        times.front() = 0.0;

    const std::size_t n = times.size();
    grid.phi_step.resize(n - 1);
    grid.sd_step.resize(n - 1);
    grid.r1_node.resize(n);
    grid.gamma_node.resize(n);
    grid.ystar_node.resize(n);
    grid.rbar_cum.resize(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        grid.phi_step[i] = k_.phi_r(times[i], times[i + 1]);
        grid.sd_step[i] = std::sqrt(std::max(0.0, k_.sigma_rr(times[i], times[i + 1])));
    }
    for (std::size_t i = 0; i < n; ++i) {
        grid.r1_node[i] = k_.r_star_1(times[i]);
        grid.gamma_node[i] = k_.params().gamma(times[i]);
        grid.ystar_node[i] = k_.params().y_star(times[i]);
        grid.rbar_cum[i] = k_.params().rbar.integral(0.0, times[i]);
    }

    grid.snap_index.reserve(snap_times.size());
    for (double s : snap_times) {
        auto it = std::min_element(times.begin(), times.end(), [&](double a, double b) {
            return std::abs(a - s) < std::abs(b - s);
        });
        grid.snap_index.push_back(static_cast<std::size_t>(it - times.begin()));
    }
    return grid;
}

template <class Observer>
void McEngine::run_paths(const Grid& grid, const SimConfig& cfg, Observer&& observe) const {
    const std::size_t n = grid.times.size();
    std::vector<PathSnapshot> snaps(grid.snap_index.size());

    for (long p = 0; p < cfg.n_paths; ++p) {
        const std::uint64_t stream = cfg.antithetic ? static_cast<std::uint64_t>(p / 2)
                                                    : static_cast<std::uint64_t>(p);
        const bool negate = cfg.antithetic && (p % 2 == 1);
        NormalStream normals(cfg.seed, stream, negate);

        double y = 0.0;
        double z = 0.0;
        for (std::size_t si = 0; si < grid.snap_index.size(); ++si) {
            if (grid.snap_index[si] == 0)
                snaps[si] = PathSnapshot{0.0, 0.0, 0.0};
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double dt = grid.times[i + 1] - grid.times[i];
            // Parameters are constant on the interval (the grid contains
            // every breakpoint); gamma and y_star come from the left node.
            const double g = grid.gamma_node[i];
            const double ys = grid.ystar_node[i];
            const double s_left = grid.r1_node[i] + k_.sinh_over(g, y + ys);
            y = grid.phi_step[i] * y + grid.sd_step[i] * normals.next();
            const double s_right = grid.r1_node[i + 1] + k_.sinh_over(g, y + ys);
            z += 0.5 * (s_left + s_right) * dt;
            for (std::size_t si = 0; si < grid.snap_index.size(); ++si) {
                if (grid.snap_index[si] == i + 1)
                    snaps[si] = PathSnapshot{y, z, z + grid.rbar_cum[i + 1]};
            }
        }
        observe(p, snaps);
    }
}

std::vector<std::vector<PathSnapshot>> McEngine::simulate_paths(
    double horizon, const std::vector<double>& snap_times, const SimConfig& cfg) const {
    cfg.validate();
    const Grid grid = build_grid(horizon, snap_times, cfg);
    std::vector<std::vector<PathSnapshot>> out(static_cast<std::size_t>(cfg.n_paths));
    run_paths(grid, cfg, [&](long p, const std::vector<PathSnapshot>& snaps) {
        out[static_cast<std::size_t>(p)] = snaps;
    });
    return out;
}

namespace {

// Accumulates the ensemble mean and standard error; with antithetic pairing
// the statistics run over independent pair means.
class Statistics {
  public:
    explicit Statistics(bool antithetic) : antithetic_(antithetic) {}

    void add(long path_index, double x) {
        if (!antithetic_) {
            push(x);
            return;
        }
        if (path_index % 2 == 0) {
            pending_ = x;
        } else {
            push(0.5 * (pending_ + x));
        }
    }

    McEstimate estimate(long n_paths) const {
        McEstimate est;
        est.n_paths = n_paths;
        est.mean = sum_.value() / static_cast<double>(count_);
        const double var =
            std::max(0.0, sumsq_.value() / static_cast<double>(count_) - est.mean * est.mean);
        est.std_error = std::sqrt(var / std::max<long>(1, count_ - 1));
        return est;
    }

  private:
    void push(double x) {
        sum_.add(x);
        sumsq_.add(x * x);
        ++count_;
    }

    bool antithetic_;
    double pending_ = 0.0;
    KahanSum sum_, sumsq_;
    long count_ = 0;
};

// Tabulated zero-coupon bond evaluation for the forward-looking payoff;
// same expansion as Pricer::bond_price anchored at T1, precomputed once so
// the per-path cost is a short sinh loop.
struct BondEvaluator {
    double discount, bstar, mu_const, half_szz;
    struct Node {
        double w, gamma, psi, phi, shift, r1;
    };
    std::vector<Node> nodes;
    const KernelSet* kernels;

    static BondEvaluator build(const KernelSet& k, double T1, double T2) {
        BondEvaluator be;
        be.kernels = &k;
        be.discount = k.params().discount(T1, T2);
        be.bstar = k.b_star(T1, T2);
        be.mu_const = be.bstar * k.sigma_rz(0.0, T1) + 0.5 * be.bstar * be.bstar * k.sigma_rr(0.0, T1);
        be.half_szz = 0.5 * k.sigma_zz(T1, T2);
        const GaussLegendreRule& rule = gauss_legendre(k.gl_order());
        const std::vector<double> edges = k.panels(T1, T2);
        for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
            const double half = 0.5 * (edges[p + 1] - edges[p]);
            const double mid = 0.5 * (edges[p + 1] + edges[p]);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double t1 = mid + half * rule.nodes[i];
                Node n;
                n.w = half * rule.weights[i];
                n.gamma = k.params().gamma(t1);
                n.psi = k.psi_r(T1, t1);
                n.phi = k.phi_r(T1, t1);
                n.shift = k.params().y_star(t1) - k.b_plus(T1, t1, T2) * k.sigma_rr(T1, t1) -
                          k.sigma_rz(T1, t1);
                n.r1 = k.r_star_1(t1);
                be.nodes.push_back(n);
            }
        }
        return be;
    }

    double operator()(double y) const {
        double integral = 0.0;
        for (const Node& n : nodes)
            integral += n.w * (n.psi * kernels->sinh_over(n.gamma, n.phi * y + n.shift) + n.r1);
        const double mu = bstar * y + mu_const;
        const double f1 = integral - mu + half_szz;
        return discount * std::exp(-mu) * (1.0 - f1);
    }
};

} // namespace

McEstimate McEngine::mc_price(const ContractSpec& spec, const SimConfig& cfg) const {
    cfg.validate();
    spec.validate(k_.params().horizon);
    const double d = k_.params().discount(spec.t1, spec.t2);

    Statistics stats(cfg.antithetic);
    switch (spec.kind) {
    case ContractKind::Sofr1M: {
        const double rbar_int = k_.params().rbar.integral(spec.t1, spec.t2);
        const Grid grid = build_grid(spec.t2, {spec.t1, spec.t2}, cfg);
        run_paths(grid, cfg, [&](long p, const std::vector<PathSnapshot>& s) {
            stats.add(p, (s[1].z - s[0].z) + rbar_int);
        });
        break;
    }
    case ContractKind::Sofr3M: {
        const Grid grid = build_grid(spec.t2, {spec.t1, spec.t2}, cfg);
        run_paths(grid, cfg, [&](long p, const std::vector<PathSnapshot>& s) {
            stats.add(p, std::exp(s[1].z - s[0].z) / d - 1.0);
        });
        break;
    }
    case ContractKind::Eurodollar: {
        const BondEvaluator bond = BondEvaluator::build(k_, spec.t1, spec.t2);
        const Grid grid = build_grid(spec.t1, {spec.t1}, cfg);
        run_paths(grid, cfg, [&](long p, const std::vector<PathSnapshot>& s) {
            stats.add(p, 1.0 / bond(s[0].y) - 1.0);
        });
        break;
    }
    case ContractKind::Forward:
        throw std::invalid_argument("mc_price: forward contracts have no futures expectation");
    }
    return stats.estimate(cfg.n_paths);
}

std::vector<NoArbRow> McEngine::mc_no_arbitrage(const std::vector<double>& t_grid,
                                                const SimConfig& cfg) const {
    cfg.validate();
    if (t_grid.empty())
        throw std::invalid_argument("mc_no_arbitrage: empty time grid");
    std::vector<double> sorted(t_grid);
    std::sort(sorted.begin(), sorted.end());
    const double horizon = sorted.back();

    std::vector<Statistics> stats(sorted.size(), Statistics(cfg.antithetic));
    const Grid grid = build_grid(horizon, sorted, cfg);
    run_paths(grid, cfg, [&](long p, const std::vector<PathSnapshot>& snaps) {
        for (std::size_t i = 0; i < snaps.size(); ++i)
            stats[i].add(p, std::exp(-snaps[i].int_r));
    });

    std::vector<NoArbRow> rows(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        rows[i].t = sorted[i];
        rows[i].estimate = stats[i].estimate(cfg.n_paths);
        rows[i].discount = k_.params().discount(0.0, sorted[i]);
    }
    return rows;
}

} // namespace hwsmile
