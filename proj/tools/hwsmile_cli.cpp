// Command-line front end: pricing runs, settlement-date convexity sweeps in
// CSV form, and oracle validation suites.
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hwsmile/config.hpp"
#include "hwsmile/greens.hpp"
#include "hwsmile/kernels.hpp"
#include "hwsmile/mc.hpp"
#include "hwsmile/pricing.hpp"
#include "hwsmile/validation.hpp"

namespace {

// 17 significant digits round-trips a double exactly.
std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct PriceRow {
    hwsmile::ContractSpec spec;
    hwsmile::PriceBreakdown breakdown;
    double epsilon;
};

std::vector<PriceRow> price_contracts(const hwsmile::Config& cfg, std::optional<int> contract_idx) {
    const hwsmile::KernelSet kernels(cfg.params);
    const hwsmile::Pricer pricer(kernels);
    const double epsilon = kernels.epsilon_report().epsilon;

    std::vector<hwsmile::ContractSpec> selected;
    if (contract_idx) {
        if (*contract_idx < 0 || *contract_idx >= static_cast<int>(cfg.contracts.size()))
            throw hwsmile::ConfigError("contract index out of range");
        selected.push_back(cfg.contracts[static_cast<std::size_t>(*contract_idx)]);
    } else {
        selected = cfg.contracts;
    }
    if (selected.empty())
        throw hwsmile::ConfigError("config has no contracts to price");

    std::vector<PriceRow> rows;
    for (const hwsmile::ContractSpec& spec : selected)
        rows.push_back(PriceRow{spec, pricer.convexity(spec), epsilon});
    return rows;
}

void write_price_csv(std::ostream& os, const std::vector<PriceRow>& rows) {
    os << "kind,t1,t2,v0,v1,total,reference,convexity,epsilon\n";
    for (const PriceRow& r : rows) {
        os << hwsmile::to_string(r.spec.kind) << ',' << fmt(r.spec.t1) << ',' << fmt(r.spec.t2)
           << ',' << fmt(r.breakdown.v0) << ',' << fmt(r.breakdown.v1) << ','
           << fmt(r.breakdown.total) << ',' << fmt(r.breakdown.reference) << ','
           << fmt(r.breakdown.convexity) << ',' << fmt(r.epsilon) << '\n';
    }
}

int cmd_price(const std::string& config_path, std::optional<int> contract_idx,
              const std::string& out_path) {
    const hwsmile::Config cfg = hwsmile::load_config(config_path);
    const std::vector<PriceRow> rows = price_contracts(cfg, contract_idx);

    std::printf("%-11s %8s %8s %14s %14s %14s %14s %14s %10s\n", "kind", "t1", "t2", "v0", "v1",
                "total", "reference", "convexity", "epsilon");
    for (const PriceRow& r : rows) {
        std::printf("%-11s %8.4f %8.4f %14.6e %14.6e %14.6e %14.6e %14.6e %10.4e\n",
                    hwsmile::to_string(r.spec.kind).c_str(), r.spec.t1, r.spec.t2, r.breakdown.v0,
                    r.breakdown.v1, r.breakdown.total, r.breakdown.reference,
                    r.breakdown.convexity, r.epsilon);
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out)
            throw hwsmile::ConfigError("cannot open output file: " + out_path);
        write_price_csv(out, rows);
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& kind_name, double t1_start,
              double t1_end, double t1_step, double tenor, const std::string& out_path) {
    const hwsmile::Config cfg = hwsmile::load_config(config_path);
    const hwsmile::ContractKind kind = hwsmile::contract_kind_from_string(kind_name);
    if (!(t1_step > 0.0))
        throw hwsmile::ConfigError("sweep t1-step must be positive");
    if (t1_end < t1_start)
        throw hwsmile::ConfigError("sweep t1-end must be >= t1-start");
    if (t1_end + tenor > cfg.params.horizon + 1e-12)
        throw hwsmile::ConfigError("sweep exceeds the model horizon");

    const hwsmile::KernelSet kernels(cfg.params);
    const hwsmile::Pricer pricer(kernels);
    const hwsmile::KernelSet kernels_hw(cfg.hw_or_default());
    const hwsmile::Pricer pricer_hw(kernels_hw);

    const bool with_eurodollar_column = (kind == hwsmile::ContractKind::Sofr3M);

    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw hwsmile::ConfigError("cannot open output file: " + out_path);
    out << "t1,convexity_full,convexity_hw,difference,ratio";
    if (with_eurodollar_column)
        out << ",eurodollar_minus_sofr";
    out << "\n";

    for (double t1 = t1_start; t1 <= t1_end + 1e-12; t1 += t1_step) {
        hwsmile::ContractSpec spec;
        spec.kind = kind;
        spec.t1 = t1;
        spec.t2 = t1 + tenor;
        spec.delta = tenor;
        spec.validate(cfg.params.horizon);

        const double conv_full = pricer.convexity(spec).convexity;

        // Baseline convexity in the smile-free parameter set: price minus
        // the same reference used by the full model.
        double conv_hw = 0.0;
        const double d_hw = cfg.hw_or_default().discount(spec.t1, spec.t2);
        switch (kind) {
        case hwsmile::ContractKind::Sofr3M:
        case hwsmile::ContractKind::Eurodollar:
            conv_hw = pricer_hw.price_hw(0.0, 0.0, spec.t1, spec.t2, kind) - (1.0 / d_hw - 1.0);
            break;
        case hwsmile::ContractKind::Sofr1M:
            conv_hw = pricer_hw.price_hw(0.0, 0.0, spec.t1, spec.t2, kind) + std::log(d_hw);
            break;
        case hwsmile::ContractKind::Forward:
            conv_hw = 0.0;
            break;
        }

        const double difference = conv_hw - conv_full;
        const double ratio = difference / conv_full;
        out << fmt(t1) << ',' << fmt(conv_full) << ',' << fmt(conv_hw) << ',' << fmt(difference)
            << ',' << fmt(ratio);
        if (with_eurodollar_column) {
            hwsmile::ContractSpec ed = spec;
            ed.kind = hwsmile::ContractKind::Eurodollar;
            const double conv_ed = pricer.convexity(ed).convexity;
            out << ',' << fmt(conv_ed - conv_full);
        }
        out << "\n";
    }
    return 0;
}

int report(const std::vector<hwsmile::CheckResult>& results) {
    hwsmile::print_report(std::cout, results);
    return hwsmile::all_pass(results) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Futures pricing under an extended short-rate model with smile and skew"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::optional<int> contract_idx;

    CLI::App* price = app.add_subcommand("price", "Price configured contracts at y=0, t=0");
    price->add_option("--config", config_path, "JSON configuration file")->required();
    int idx = -1;
    CLI::Option* idx_opt = price->add_option("--contract", idx, "Contract index (default: all)");
    price->add_option("--out", out_path, "Optional CSV output path");

    CLI::App* sweep = app.add_subcommand("sweep", "Convexity sweep over settlement dates");
    std::string kind_name = "sofr3m";
    double t1_start = 0.25, t1_end = 2.0, t1_step = 0.25, tenor = 0.25;
    std::string sweep_out;
    sweep->add_option("--config", config_path, "JSON configuration file")->required();
    sweep->add_option("--kind", kind_name, "Contract kind")->required();
    sweep->add_option("--t1-start", t1_start, "First settlement date")->required();
    sweep->add_option("--t1-end", t1_end, "Last settlement date")->required();
    sweep->add_option("--t1-step", t1_step, "Settlement date increment")->required();
    sweep->add_option("--tenor", tenor, "Accrual period length")->required();
    sweep->add_option("--out", sweep_out, "CSV output path")->required();

    CLI::App* mcv = app.add_subcommand("mc-validate", "Monte Carlo oracle suite");
    long paths = 100000;
    std::uint64_t seed = 20240901;
    double step = 1.0 / 365.0;
    double tol_scale = 1.0;
    mcv->add_option("--config", config_path, "JSON configuration file")->required();
    mcv->add_option("--paths", paths, "Number of paths");
    mcv->add_option("--seed", seed, "RNG seed");
    mcv->add_option("--step", step, "Time step in years");
    mcv->add_option("--tolerance-scale", tol_scale, "Multiplies every tolerance");

    CLI::App* gv = app.add_subcommand("greens-validate", "Convolution oracle suite");
    int grid_n = 200;
    double box_sd = 10.0;
    double tol_scale_g = 1.0;
    gv->add_option("--config", config_path, "JSON configuration file")->required();
    gv->add_option("--grid", grid_n, "Quadrature nodes per box side");
    gv->add_option("--box", box_sd, "Box half-width in standard deviations");
    gv->add_option("--tolerance-scale", tol_scale_g, "Multiplies every tolerance");

    CLI::App* cfv = app.add_subcommand("closedform-validate", "Kernel and pricing identity suite");
    double tol_scale_c = 1.0;
    cfv->add_option("--config", config_path, "JSON configuration file")->required();
    cfv->add_option("--tolerance-scale", tol_scale_c, "Multiplies every tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(price)) {
            if (idx_opt->count() > 0)
                contract_idx = idx;
            return cmd_price(config_path, contract_idx, out_path);
        }
        if (app.got_subcommand(sweep))
            return cmd_sweep(config_path, kind_name, t1_start, t1_end, t1_step, tenor, sweep_out);
        if (app.got_subcommand(mcv)) {
            const hwsmile::Config cfg = hwsmile::load_config(config_path);
            return report(hwsmile::run_mc_checks(cfg, paths, seed, step, tol_scale));
        }
        if (app.got_subcommand(gv)) {
            const hwsmile::Config cfg = hwsmile::load_config(config_path);
            return report(hwsmile::run_greens_checks(cfg, grid_n, box_sd, tol_scale_g));
        }
        if (app.got_subcommand(cfv)) {
            const hwsmile::Config cfg = hwsmile::load_config(config_path);
            return report(hwsmile::run_closedform_checks(cfg, tol_scale_c));
        }
    } catch (const hwsmile::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
