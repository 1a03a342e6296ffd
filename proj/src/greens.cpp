#include "hwsmile/greens.hpp"

#include <cmath>

namespace hwsmile {

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

long long round_time(double t) { return std::llround(t * 1e12); }

} // namespace

Gaussian2D::Gaussian2D(double my, double mz, const Cov2& c) : mean_y(my), mean_z(mz), cov(c) {
    det = cov.rr * cov.zz - cov.rz * cov.rz;
    if (!(cov.rr > 0.0) || !(det > 0.0))
        throw DegenerateKernel();
    inv_rr = cov.zz / det;
    inv_rz = -cov.rz / det;
    inv_zz = cov.rr / det;
    norm = 1.0 / (2.0 * M_PI * std::sqrt(det));
}

double Gaussian2D::density(double y, double z) const {
    const double a = y - mean_y;
    const double b = z - mean_z;
    const double q = a * (inv_rr * a + inv_rz * b) + b * (inv_rz * a + inv_zz * b);
    return norm * std::exp(-0.5 * q);
}

double Greens::Slice::mu_star(double y) const {
    return bstar_tv * (y + srz_0t) + 0.5 * bstar_tv * bstar_tv * srr_0t;
}

Greens::Greens(const KernelSet& kernels) : k_(kernels) {}

const Greens::Slice& Greens::slice(double t, double v) const {
    const auto key = std::make_pair(round_time(t), round_time(v));
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = slices_.find(key);
        if (it != slices_.end())
            return *it->second;
    }
    auto s = std::make_shared<Slice>();
    s->t = t;
    s->v = v;
    s->phi_tv = k_.phi_r(t, v);
    s->bstar_tv = k_.b_star(t, v);
    s->cov = k_.covariance(t, v);
    s->srz_tv = s->cov.rz;
    s->szz_tv = s->cov.zz;
    s->srz_0t = k_.sigma_rz(0.0, t);
    s->srr_0t = k_.sigma_rr(0.0, t);
    s->det = s->cov.rr * s->cov.zz - s->cov.rz * s->cov.rz;
    if (!(s->cov.rr > 0.0) || !(s->det > 0.0))
        throw DegenerateKernel();
    s->inv_rr = s->cov.zz / s->det;
    s->inv_rz = -s->cov.rz / s->det;
    s->inv_zz = s->cov.rr / s->det;
    s->norm = 1.0 / (2.0 * M_PI * std::sqrt(s->det));
    s->r1_integral =
        gl_composite([&](double u) { return k_.r_star_1(u); }, k_.panels(t, v), k_.gl_order());

    const GaussLegendreRule& rule = gauss_legendre(k_.gl_order());
    const std::vector<double> edges = k_.panels(t, v);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double half = 0.5 * (edges[p + 1] - edges[p]);
        const double mid = 0.5 * (edges[p + 1] + edges[p]);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            TimeNode n;
            const double t1 = mid + half * rule.nodes[i];
            n.w = half * rule.weights[i];
            n.gamma = k_.params().gamma(t1);
            n.psifac = k_.psi_r(t, t1);
            n.phi = k_.phi_r(t, t1);
            n.ystar = k_.params().y_star(t1);
            auto [dy, dz] = k_.delta_shifts(t, t1);
            n.dy = dy;
            n.dz = dz;
            n.srr = k_.sigma_rr(t, t1);
            n.srz = k_.sigma_rz(t, t1);
            n.bstar = k_.b_star(t, t1);
            s->nodes.push_back(n);
        }
    }

    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = slices_.emplace(key, std::move(s));
    (void)inserted;
    return *it->second;
}

double Greens::g0(double y, double z, double t, double eta, double zeta, double v) const {
    if (!(t < v))
        throw std::invalid_argument("g0: requires t < v");
    const Slice& s = slice(t, v);
    const double a = eta - s.phi_tv * y;
    const double b = zeta - z - s.mu_star(y);
    const double q = a * (s.inv_rr * a + s.inv_rz * b) + b * (s.inv_rz * a + s.inv_zz * b);
    return s.norm * std::exp(-0.5 * q);
}

double Greens::g1_slice(const Slice& s, double y, double z, double eta, double zeta) const {
    const double floor = k_.params().quadrature.gamma_floor;
    const double phi = s.phi_tv;
    const double B = s.bstar_tv;

    auto dz_g0 = [&](double yy, double zz) {
        const double a = eta - phi * yy;
        const double b = zeta - zz - s.mu_star(yy);
        const double q1 = s.inv_rr * a + s.inv_rz * b;
        const double q2 = s.inv_rz * a + s.inv_zz * b;
        const double dens = s.norm * std::exp(-0.5 * (a * q1 + b * q2));
        return q2 * dens;
    };

    // Center density and its derivatives, all in closed form.
    const double a = eta - phi * y;
    const double b = zeta - z - s.mu_star(y);
    const double q1 = s.inv_rr * a + s.inv_rz * b;
    const double q2 = s.inv_rz * a + s.inv_zz * b;
    const double dens = s.norm * std::exp(-0.5 * (a * q1 + b * q2));
    const double dz_c = q2 * dens;
    const double dzz_c = (q2 * q2 - s.inv_zz) * dens;
    const double dyz_c = (-phi * s.inv_rz - B * s.inv_zz + (phi * q1 + B * q2) * q2) * dens;

    double sum = s.r1_integral * dz_c;
    for (const TimeNode& n : s.nodes) {
        const double arg = n.phi * y + n.ystar;
        if (n.gamma > floor) {
            const double rp = n.psifac * std::exp(n.gamma * arg) / (2.0 * n.gamma);
            const double rm = n.psifac * std::exp(-n.gamma * arg) / (2.0 * n.gamma);
            sum += n.w * (rp * dz_g0(y + n.dy, z + n.dz) - rm * dz_g0(y - n.dy, z - n.dz));
        } else {
            // Small-gamma branch: the 1/(2 gamma) difference of shifted
            // evaluations is replaced by its limit, a directional derivative.
            const double drift = (n.srr / n.phi) * dyz_c + (n.srz - n.bstar * n.srr / n.phi) * dzz_c;
            sum += n.w * n.psifac *
                   (std::cosh(n.gamma * arg) * drift + k_.sinh_over(n.gamma, arg) * dz_c);
        }
    }

    const double q_term = s.mu_star(y) * dz_c + (s.srz_tv / phi) * (dyz_c - B * dzz_c) +
                          s.szz_tv * dzz_c;
    return sum - q_term;
}

double Greens::g1(double y, double z, double t, double eta, double zeta, double v) const {
    if (!(t < v))
        throw std::invalid_argument("g1: requires t < v");
    return g1_slice(slice(t, v), y, z, eta, zeta);
}

PayoffGrid Greens::make_grid(double y, double z, double t, double v,
                             const std::function<double(double, double)>& payoff,
                             const ConvolveOptions& opts, bool exp_tilt_zeta) const {
    if (opts.box_sd < 8.0)
        throw std::invalid_argument("payoff box must cover at least 8 standard deviations");
    if (opts.grid_n < 8)
        throw std::invalid_argument("payoff grid needs at least 8 nodes per side");
    const Slice& s = slice(t, v);
    const double sd_eta = std::sqrt(s.cov.rr);
    const double sd_zeta = std::sqrt(s.cov.zz);
    const double c_eta = s.phi_tv * y;
    const double c_zeta = z + s.mu_star(y);

    PayoffGrid grid;
    grid.box_sd = opts.box_sd;
    grid.exp_tilt_zeta = exp_tilt_zeta;
    grid.eta_lo = c_eta - opts.box_sd * sd_eta;
    grid.eta_hi = c_eta + opts.box_sd * sd_eta;
    grid.zeta_lo = c_zeta - opts.box_sd * sd_zeta;
    grid.zeta_hi = c_zeta + opts.box_sd * sd_zeta;

    const GaussLegendreRule& rule = gauss_legendre(opts.grid_n);
    auto fill_axis = [&](double lo, double hi, std::vector<double>& nodes,
                         std::vector<double>& weights) {
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        nodes.resize(rule.nodes.size());
        weights.resize(rule.nodes.size());
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            nodes[i] = mid + half * rule.nodes[i];
            weights[i] = half * rule.weights[i];
        }
    };
    fill_axis(grid.eta_lo, grid.eta_hi, grid.eta_nodes, grid.eta_weights);
    fill_axis(grid.zeta_lo, grid.zeta_hi, grid.zeta_nodes, grid.zeta_weights);

    grid.values.resize(grid.eta_nodes.size() * grid.zeta_nodes.size());
    for (std::size_t i = 0; i < grid.eta_nodes.size(); ++i)
        for (std::size_t j = 0; j < grid.zeta_nodes.size(); ++j)
            grid.values[i * grid.zeta_nodes.size() + j] = payoff(grid.eta_nodes[i], grid.zeta_nodes[j]);
    return grid;
}

double Greens::convolve_price(const PayoffGrid& grid, double y, double z, double t,
                              double v) const {
    const Slice& s = slice(t, v);
    const double sd_eta = std::sqrt(s.cov.rr);
    const double sd_zeta = std::sqrt(s.cov.zz);
    const double c_eta = s.phi_tv * y;
    const double c_zeta = z + s.mu_star(y);

    const double mass_out = norm_cdf((grid.eta_lo - c_eta) / sd_eta) +
                            norm_cdf((c_eta - grid.eta_hi) / sd_eta) +
                            norm_cdf((grid.zeta_lo - c_zeta) / sd_zeta) +
                            norm_cdf((c_zeta - grid.zeta_hi) / sd_zeta);
    if (mass_out > 1e-10)
        throw BoxTooNarrow("payoff box leaves Gaussian mass outside the grid");
    if (grid.exp_tilt_zeta) {
        // Under the e^zeta-tilted measure the zeta mean shifts by Sigma_zz.
        const double tilted = c_zeta + s.cov.zz;
        const double tilted_out = norm_cdf((grid.zeta_lo - tilted) / sd_zeta) +
                                  norm_cdf((tilted - grid.zeta_hi) / sd_zeta);
        if (tilted_out > 1e-8)
            throw BoxTooNarrow("payoff box too narrow for an exponentially growing payoff");
    }

    double sum = 0.0;
    for (std::size_t i = 0; i < grid.eta_nodes.size(); ++i) {
        const double eta = grid.eta_nodes[i];
        const double wi = grid.eta_weights[i];
        double row = 0.0;
        for (std::size_t j = 0; j < grid.zeta_nodes.size(); ++j) {
            const double zeta = grid.zeta_nodes[j];
            const double a = eta - s.phi_tv * y;
            const double bb = zeta - z - s.mu_star(y);
            const double q1 = s.inv_rr * a + s.inv_rz * bb;
            const double q2 = s.inv_rz * a + s.inv_zz * bb;
            const double dens = s.norm * std::exp(-0.5 * (a * q1 + bb * q2));
            const double kernel = dens + g1_slice(s, y, z, eta, zeta);
            row += grid.zeta_weights[j] * kernel * grid.value(i, j);
        }
        sum += wi * row;
    }
    return sum;
}

double Greens::deterministic_increment(double a, double b) const {
    // z increment along the zero-volatility path from state y = 0.
    auto f = [&](double u) {
        return k_.r_star_1(u) + k_.sinh_over(k_.params().gamma(u), k_.params().y_star(u));
    };
    return gl_composite(f, k_.panels(a, b), k_.gl_order());
}

StagedResult Greens::staged_price(const std::function<double(double, double)>& payoff, double y,
                                  double z, double t, double T1, double T2,
                                  const ConvolveOptions& opts) const {
    if (!(t <= T1 && T1 < T2))
        throw std::invalid_argument("staged_price: requires t <= T1 < T2");

    const bool inner_degenerate = k_.sigma_rr(T1, T2) <= 0.0;
    const bool outer_degenerate = (t >= T1) || k_.sigma_rr(t, T1) <= 0.0;

    const int n_inner = std::max(48, k_.params().quadrature.inner_grid_points);
    ConvolveOptions inner_opts;
    inner_opts.grid_n = n_inner;
    inner_opts.box_sd = opts.box_sd;

    // Inner stage: value at T1 as a function of the state y_{T1}, with the
    // z reference set by z_abs (the z level at T1).
    auto inner_value = [&](double eta1, double z_abs) {
        if (inner_degenerate) {
            auto f = [&](double u) {
                const double y_u = k_.phi_r(T1, u) * eta1;
                return k_.r_star_1(u) +
                       k_.sinh_over(k_.params().gamma(u), y_u + k_.params().y_star(u));
            };
            const double inc = gl_composite(f, k_.panels(T1, T2), k_.gl_order());
            return payoff(z_abs, z_abs + inc);
        }
        auto inner_payoff = [&](double, double zeta2) { return payoff(z_abs, z_abs + zeta2); };
        const PayoffGrid grid = make_grid(eta1, 0.0, T1, T2, inner_payoff, inner_opts, true);
        return convolve_price(grid, eta1, 0.0, T1, T2);
    };

    // The single-grid staging relies on the inner value depending on z only
    // through increments; probe once rather than assume.
    {
        const double probe_eta = k_.phi_r(t, T1) * y;
        const double v_a = inner_value(probe_eta, z);
        const double v_b = inner_value(probe_eta, z + 0.1);
        if (std::abs(v_a - v_b) > 1e-9 * (1.0 + std::abs(v_a)))
            throw std::invalid_argument("staged_price requires a payoff of the z increment");
    }

    StagedResult result;
    if (outer_degenerate) {
        result.value = inner_value(k_.phi_r(t, T1) * y, z + (t < T1 ? deterministic_increment(t, T1) : 0.0));
        result.v10_cross = 0.0;
        return result;
    }

    const Slice& s = slice(t, T1);
    ConvolveOptions outer_opts = opts;
    const double sd_eta = std::sqrt(s.cov.rr);
    const double sd_zeta = std::sqrt(s.cov.zz);
    const double c_eta = s.phi_tv * y;
    const double c_zeta = z + s.mu_star(y);

    const GaussLegendreRule& rule = gauss_legendre(outer_opts.grid_n);
    std::vector<double> eta_nodes(rule.nodes.size()), eta_w(rule.nodes.size());
    std::vector<double> zeta_nodes(rule.nodes.size()), zeta_w(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        eta_nodes[i] = c_eta + outer_opts.box_sd * sd_eta * rule.nodes[i];
        eta_w[i] = outer_opts.box_sd * sd_eta * rule.weights[i];
        zeta_nodes[i] = c_zeta + outer_opts.box_sd * sd_zeta * rule.nodes[i];
        zeta_w[i] = outer_opts.box_sd * sd_zeta * rule.weights[i];
    }

    std::vector<double> v1(eta_nodes.size());
    for (std::size_t i = 0; i < eta_nodes.size(); ++i)
        v1[i] = inner_value(eta_nodes[i], z);

    double total = 0.0;
    double cross = 0.0;
    for (std::size_t i = 0; i < eta_nodes.size(); ++i) {
        double g0_row = 0.0;
        double g1_row = 0.0;
        for (std::size_t j = 0; j < zeta_nodes.size(); ++j) {
            const double a = eta_nodes[i] - s.phi_tv * y;
            const double bb = zeta_nodes[j] - z - s.mu_star(y);
            const double q1 = s.inv_rr * a + s.inv_rz * bb;
            const double q2 = s.inv_rz * a + s.inv_zz * bb;
            const double dens = s.norm * std::exp(-0.5 * (a * q1 + bb * q2));
            const double corr = g1_slice(s, y, z, eta_nodes[i], zeta_nodes[j]);
            g0_row += zeta_w[j] * dens;
            g1_row += zeta_w[j] * corr;
        }
        total += eta_w[i] * (g0_row + g1_row) * v1[i];
        cross += eta_w[i] * g1_row * v1[i];
    }
    result.value = total;
    result.v10_cross = cross;
    return result;
}

} // namespace hwsmile
