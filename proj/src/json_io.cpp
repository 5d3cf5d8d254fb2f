#include "levybandit/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace levybandit {

namespace {

using nlohmann::json;

double require_number(const json& j, const char* context, const char* field) {
    if (!j.contains(field))
        throw ConfigError(std::string(context) + ": missing field \"" + field + "\"");
    if (!j.at(field).is_number())
        throw ConfigError(std::string(context) + ": field \"" + field +
                          "\" must be a number");
    return j.at(field).get<double>();
}

const json& require_object(const json& j, const char* context, const char* field) {
    if (!j.contains(field))
        throw ConfigError(std::string(context) + ": missing field \"" + field + "\"");
    return j.at(field);
}

bool looks_like_json(const std::string& text) {
    for (char ch : text) {
        if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') continue;
        return ch == '{' || ch == '[';
    }
    return false;
}

json parse_json_text(const std::string& text, const char* context) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw ConfigError(std::string(context) + ": invalid JSON");
    return j;
}

}  // namespace

LevyModel model_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("model: expected a JSON object");
    if (!j.contains("family")) throw ConfigError("model: missing field \"family\"");
    const std::string family = j.at("family").get<std::string>();
    Orientation orientation = Orientation::SpectrallyNegative;
    if (j.contains("orientation")) {
        const std::string o = j.at("orientation").get<std::string>();
        if (o == "sn")
            orientation = Orientation::SpectrallyNegative;
        else if (o == "sp")
            orientation = Orientation::SpectrallyPositive;
        else
            throw ConfigError("model: orientation must be \"sn\" or \"sp\"");
    }
    const json& p = require_object(j, "model", "params");
    try {
        if (family == "bm") {
            return LevyModel::brownian(require_number(p, "model.params", "m"),
                                       require_number(p, "model.params", "sigma"),
                                       orientation);
        }
        if (family == "cl") {
            return LevyModel::cramer_lundberg(require_number(p, "model.params", "c"),
                                              require_number(p, "model.params", "eta"),
                                              require_number(p, "model.params", "rho"),
                                              orientation);
        }
        if (family == "bm_exp") {
            return LevyModel::brownian_exp_jumps(
                require_number(p, "model.params", "m"),
                require_number(p, "model.params", "sigma"),
                require_number(p, "model.params", "eta"),
                require_number(p, "model.params", "rho"), orientation);
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    throw ConfigError("model: family must be \"bm\", \"cl\" or \"bm_exp\"");
}

json model_to_json(const LevyModel& model) {
    json p;
    switch (model.family) {
        case Family::BrownianDrift:
            p = {{"m", model.m}, {"sigma", model.sigma}};
            break;
        case Family::CramerLundberg:
            p = {{"c", model.c}, {"eta", model.eta}, {"rho", model.rho}};
            break;
        case Family::BrownianExpJumps:
            p = {{"m", model.m}, {"sigma", model.sigma}, {"eta", model.eta},
                 {"rho", model.rho}};
            break;
    }
    const char* family = model.family == Family::BrownianDrift      ? "bm"
                         : model.family == Family::CramerLundberg   ? "cl"
                                                                    : "bm_exp";
    const char* orientation =
        model.orientation == Orientation::SpectrallyNegative ? "sn" : "sp";
    return json{{"family", family}, {"params", p}, {"orientation", orientation}};
}

Reward reward_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("reward: expected a JSON object");
    if (!j.contains("family")) throw ConfigError("reward: missing field \"family\"");
    const std::string family = j.at("family").get<std::string>();
    try {
        if (family == "affine")
            return Reward::affine(require_number(j, "reward", "a"),
                                  require_number(j, "reward", "b"));
        if (family == "bounded_logistic")
            return Reward::bounded_logistic(require_number(j, "reward", "lo"),
                                            require_number(j, "reward", "hi"),
                                            require_number(j, "reward", "center"),
                                            require_number(j, "reward", "slope"));
        if (family == "monotone_table") {
            if (!j.contains("knots"))
                throw ConfigError("reward: missing field \"knots\"");
            std::vector<std::pair<double, double>> knots;
            for (const auto& k : j.at("knots")) {
                if (!k.is_array() || k.size() != 2)
                    throw ConfigError("reward: knots must be [x, value] pairs");
                knots.emplace_back(k[0].get<double>(), k[1].get<double>());
            }
            return Reward::monotone_table(std::move(knots));
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("reward: ") + e.what());
    }
    throw ConfigError(
        "reward: family must be \"affine\", \"bounded_logistic\" or \"monotone_table\"");
}

json reward_to_json(const Reward& reward) {
    switch (reward.family()) {
        case RewardFamily::Affine:
            return json{{"family", "affine"},
                        {"a", reward.affine_intercept()},
                        {"b", reward.affine_slope()}};
        case RewardFamily::BoundedLogistic:
            return json{{"family", "bounded_logistic"},
                        {"lo", reward.logistic_lo()},
                        {"hi", reward.logistic_hi()},
                        {"center", reward.logistic_center()},
                        {"slope", reward.logistic_slope()}};
        case RewardFamily::MonotoneTable: {
            json knots = json::array();
            for (const auto& k : reward.knots()) knots.push_back({k.first, k.second});
            return json{{"family", "monotone_table"}, {"knots", knots}};
        }
    }
    throw ConfigError("reward: unknown family");
}

Reward reward_from_string(const std::string& text) {
    if (text.rfind("affine:", 0) == 0) {
        double a = 0.0, b = 0.0;
        if (std::sscanf(text.c_str() + 7, "%lf,%lf", &a, &b) != 2)
            throw ConfigError("reward shorthand must be affine:a,b");
        try {
            return Reward::affine(a, b);
        } catch (const DomainError& e) {
            throw ConfigError(std::string("reward: ") + e.what());
        }
    }
    if (looks_like_json(text)) return reward_from_json(parse_json_text(text, "reward"));
    return reward_from_json(parse_json_text(read_text_file(text), "reward"));
}

LevyModel model_from_string(const std::string& text) {
    if (looks_like_json(text)) return model_from_json(parse_json_text(text, "model"));
    return model_from_json(parse_json_text(read_text_file(text), "model"));
}

ArmsFile arms_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("arms: expected a JSON object");
    ArmsFile file;
    file.q = require_number(j, "arms", "q");
    file.lambda = require_number(j, "arms", "lambda");
    if (!j.contains("arms") || !j.at("arms").is_array() || j.at("arms").empty())
        throw ConfigError("arms: field \"arms\" must be a nonempty array");
    for (const auto& a : j.at("arms")) {
        ArmSpec spec{model_from_json(require_object(a, "arm", "model")),
                     reward_from_json(require_object(a, "arm", "reward")),
                     require_number(a, "arm", "x0")};
        file.arms.push_back(std::move(spec));
    }
    return file;
}

ArmsFile arms_from_string(const std::string& text) {
    if (looks_like_json(text)) return arms_from_json(parse_json_text(text, "arms"));
    return arms_from_json(parse_json_text(read_text_file(text), "arms"));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace levybandit
