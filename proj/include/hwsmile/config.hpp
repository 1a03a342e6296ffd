#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hwsmile/model_params.hpp"

namespace hwsmile {

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Config {
    ModelParams params;
    std::vector<ContractSpec> contracts;
    // Optional comparison parameter set for the smile-free baseline, e.g. a
    // separately recalibrated sigma. Curves not given in the "hw_curves"
    // block default to the main set with gamma at the floor and y_star zero.
    std::optional<ModelParams> hw_params;

    const ModelParams& hw_or_default() const;

  private:
    mutable std::optional<ModelParams> hw_default_;
};

Config load_config(const std::string& path);
Config parse_config(const std::string& json_text);
std::string save_config(const Config& config);

} // namespace hwsmile
