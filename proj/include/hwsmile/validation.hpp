#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hwsmile/config.hpp"

namespace hwsmile {

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Oracle suites behind the validate subcommands. tolerance_scale multiplies
// every tolerance (useful to force failures when testing the harness).
std::vector<CheckResult> run_closedform_checks(const Config& cfg, double tolerance_scale = 1.0);
std::vector<CheckResult> run_mc_checks(const Config& cfg, long n_paths, std::uint64_t seed,
                                       double step, double tolerance_scale = 1.0);
std::vector<CheckResult> run_greens_checks(const Config& cfg, int grid_n, double box_sd,
                                           double tolerance_scale = 1.0);

bool all_pass(const std::vector<CheckResult>& results);
void print_report(std::ostream& os, const std::vector<CheckResult>& results);

} // namespace hwsmile
