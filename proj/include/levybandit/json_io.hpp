#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "levybandit/bandit_sim.hpp"
#include "levybandit/gittins.hpp"

namespace levybandit {

/// Parses {"family":"bm"|"cl"|"bm_exp", "params":{...}, "orientation":"sn"|"sp"}.
/// Params by family: bm {m, sigma}; cl {c, eta, rho}; bm_exp {m, sigma, eta, rho}.
LevyModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const LevyModel& model);

/// Parses {"family":"affine","a":..,"b":..},
/// {"family":"bounded_logistic","lo":..,"hi":..,"center":..,"slope":..} or
/// {"family":"monotone_table","knots":[[x,v],...]}.
Reward reward_from_json(const nlohmann::json& j);
nlohmann::json reward_to_json(const Reward& reward);

/// Accepts inline JSON, the shorthand "affine:a,b", or a path to a JSON file.
Reward reward_from_string(const std::string& text);

/// Accepts inline JSON or a path to a JSON file.
LevyModel model_from_string(const std::string& text);

/// Parses {"arms":[{"model":..,"reward":..,"x0":..},...], "q":.., "lambda":..}.
struct ArmsFile {
    std::vector<ArmSpec> arms;
    double q = 0.0;
    double lambda = 0.0;
};
ArmsFile arms_from_json(const nlohmann::json& j);
ArmsFile arms_from_string(const std::string& text);

/// Serializes a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

std::string read_text_file(const std::string& path);

}  // namespace levybandit
