#include "hwsmile/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hwsmile {

using nlohmann::json;

namespace {

PiecewiseCurve parse_curve(const json& j, const std::string& name) {
    if (!j.is_object() || !j.contains("breakpoints") || !j.contains("values"))
        throw ConfigError("curve \"" + name + "\" must have breakpoints and values arrays");
    std::vector<double> bp, vals;
    try {
        bp = j.at("breakpoints").get<std::vector<double>>();
        vals = j.at("values").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ConfigError("curve \"" + name + "\": " + e.what());
    }
    try {
        return PiecewiseCurve(std::move(bp), std::move(vals), name);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

json curve_to_json(const PiecewiseCurve& c) {
    return json{{"breakpoints", c.breakpoints()}, {"values", c.values()}};
}

} // namespace

const ModelParams& Config::hw_or_default() const {
    if (hw_params)
        return *hw_params;
    if (!hw_default_)
        hw_default_ = params.hull_white_proxy();
    return *hw_default_;
}

Config parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    Config cfg;
    if (!j.contains("horizon") || !j.at("horizon").is_number())
        throw ConfigError("config field \"horizon\" (number) is required");
    cfg.params.horizon = j.at("horizon").get<double>();

    if (!j.contains("curves") || !j.at("curves").is_object())
        throw ConfigError("config field \"curves\" (object) is required");
    const json& curves = j.at("curves");
    auto get_curve = [&](const char* name) {
        if (!curves.contains(name))
            throw ConfigError(std::string("curves.") + name + " is required");
        return parse_curve(curves.at(name), name);
    };
    cfg.params.alpha = get_curve("alpha");
    cfg.params.sigma = get_curve("sigma");
    cfg.params.gamma = get_curve("gamma");
    cfg.params.y_star = get_curve("y_star");
    cfg.params.rbar = get_curve("rbar");

    if (j.contains("quadrature")) {
        const json& q = j.at("quadrature");
        if (q.contains("nodes_per_segment"))
            cfg.params.quadrature.nodes_per_segment = q.at("nodes_per_segment").get<int>();
        if (q.contains("inner_grid_points"))
            cfg.params.quadrature.inner_grid_points = q.at("inner_grid_points").get<int>();
        if (q.contains("gamma_floor"))
            cfg.params.quadrature.gamma_floor = q.at("gamma_floor").get<double>();
    }

    try {
        cfg.params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    if (j.contains("contracts")) {
        if (!j.at("contracts").is_array())
            throw ConfigError("config field \"contracts\" must be an array");
        for (const json& c : j.at("contracts")) {
            ContractSpec spec;
            try {
                spec.kind = contract_kind_from_string(c.at("kind").get<std::string>());
                spec.t1 = c.at("t1").get<double>();
                spec.t2 = c.at("t2").get<double>();
                spec.delta = c.at("delta").get<double>();
            } catch (const json::exception& e) {
                throw ConfigError(std::string("contract entry: ") + e.what());
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
            try {
                spec.validate(cfg.params.horizon);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
            cfg.contracts.push_back(spec);
        }
    }

    if (j.contains("hw_curves")) {
        const json& hw = j.at("hw_curves");
        if (!hw.is_object())
            throw ConfigError("config field \"hw_curves\" must be an object");
        ModelParams hwp = cfg.params.hull_white_proxy();
        if (hw.contains("alpha"))
            hwp.alpha = parse_curve(hw.at("alpha"), "hw.alpha");
        if (hw.contains("sigma"))
            hwp.sigma = parse_curve(hw.at("sigma"), "hw.sigma");
        if (hw.contains("gamma"))
            hwp.gamma = parse_curve(hw.at("gamma"), "hw.gamma");
        if (hw.contains("y_star"))
            hwp.y_star = parse_curve(hw.at("y_star"), "hw.y_star");
        try {
            hwp.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("hw_curves: ") + e.what());
        }
        cfg.hw_params = std::move(hwp);
    }

    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string save_config(const Config& config) {
    json j;
    j["horizon"] = config.params.horizon;
    j["curves"] = {{"alpha", curve_to_json(config.params.alpha)},
                   {"sigma", curve_to_json(config.params.sigma)},
                   {"gamma", curve_to_json(config.params.gamma)},
                   {"y_star", curve_to_json(config.params.y_star)},
                   {"rbar", curve_to_json(config.params.rbar)}};
    j["quadrature"] = {{"nodes_per_segment", config.params.quadrature.nodes_per_segment},
                       {"inner_grid_points", config.params.quadrature.inner_grid_points},
                       {"gamma_floor", config.params.quadrature.gamma_floor}};
    json contracts = json::array();
    for (const ContractSpec& c : config.contracts) {
        contracts.push_back(json{
            {"kind", to_string(c.kind)}, {"t1", c.t1}, {"t2", c.t2}, {"delta", c.delta}});
    }
    j["contracts"] = contracts;
    if (config.hw_params) {
        j["hw_curves"] = {{"alpha", curve_to_json(config.hw_params->alpha)},
                          {"sigma", curve_to_json(config.hw_params->sigma)},
                          {"gamma", curve_to_json(config.hw_params->gamma)},
                          {"y_star", curve_to_json(config.hw_params->y_star)}};
    }
    return j.dump(2);
}

} // namespace hwsmile
