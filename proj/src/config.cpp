#include "romrl/config.hpp"

#include <fstream>
#include <stdexcept>
#include <vector>

namespace romrl {

std::string to_string(ClosureMode mode) {
    switch (mode) {
        case ClosureMode::Lmrl: return "lmrl";
        case ClosureMode::Mmrl: return "mmrl";
        case ClosureMode::Vmrl: return "vmrl";
    }
    throw std::logic_error("unknown closure mode");
}

ClosureMode closure_mode_from_string(const std::string& s) {
    if (s == "lmrl") return ClosureMode::Lmrl;
    if (s == "mmrl") return ClosureMode::Mmrl;
    if (s == "vmrl") return ClosureMode::Vmrl;
    throw std::invalid_argument("unknown closure mode: " + s);
}

std::string to_string(RewardKind kind) {
    return kind == RewardKind::Supervised ? "supervised" : "vms";
}

RewardKind reward_kind_from_string(const std::string& s) {
    if (s == "supervised") return RewardKind::Supervised;
    if (s == "vms") return RewardKind::Vms;
    throw std::invalid_argument("unknown reward kind: " + s);
}

std::string to_string(VmsAnchor anchor) { return anchor == VmsAnchor::Base ? "base" : "test"; }

VmsAnchor vms_anchor_from_string(const std::string& s) {
    if (s == "base") return VmsAnchor::Base;
    if (s == "test") return VmsAnchor::Test;
    throw std::invalid_argument("unknown vms anchor: " + s);
}

void to_json(nlohmann::json& j, const DataConfig& c) {
    j = {{"nu", c.nu},         {"n_points", c.n_points}, {"n_snapshots", c.n_snapshots},
         {"x_min", c.x_min},   {"x_max", c.x_max},       {"t_min", c.t_min},
         {"t_max", c.t_max}};
}

void from_json(const nlohmann::json& j, DataConfig& c) {
    c = DataConfig{};
    if (j.contains("nu")) c.nu = j["nu"];
    if (j.contains("n_points")) c.n_points = j["n_points"];
    if (j.contains("n_snapshots")) c.n_snapshots = j["n_snapshots"];
    if (j.contains("x_min")) c.x_min = j["x_min"];
    if (j.contains("x_max")) c.x_max = j["x_max"];
    if (j.contains("t_min")) c.t_min = j["t_min"];
    if (j.contains("t_max")) c.t_max = j["t_max"];
}

void to_json(nlohmann::json& j, const EnvConfig& c) {
    j = {{"mode", to_string(c.mode)},
         {"r", c.r},
         {"r_total", c.r_total},
         {"nu", c.nu},
         {"dt", c.dt},
         {"horizon", c.horizon},
         {"eta_max", c.eta_max},
         {"sigma", c.sigma},
         {"reward_kind", to_string(c.reward_kind)},
         {"vms_anchor", to_string(c.vms_anchor)},
         {"normalize_obs", c.normalize_obs}};
    if (c.obs_scale.size() > 0)
        j["obs_scale"] = std::vector<double>(c.obs_scale.data(),
                                             c.obs_scale.data() + c.obs_scale.size());
}

void from_json(const nlohmann::json& j, EnvConfig& c) {
    c = EnvConfig{};
    if (j.contains("mode")) c.mode = closure_mode_from_string(j["mode"]);
    if (j.contains("r")) c.r = j["r"];
    if (j.contains("r_total")) c.r_total = j["r_total"];
    if (j.contains("nu")) c.nu = j["nu"];
    if (j.contains("dt")) c.dt = j["dt"];
    if (j.contains("horizon")) c.horizon = j["horizon"];
    if (j.contains("eta_max")) c.eta_max = j["eta_max"];
    if (j.contains("sigma")) c.sigma = j["sigma"];
    if (j.contains("reward_kind")) c.reward_kind = reward_kind_from_string(j["reward_kind"]);
    if (j.contains("vms_anchor")) c.vms_anchor = vms_anchor_from_string(j["vms_anchor"]);
    if (j.contains("normalize_obs")) c.normalize_obs = j["normalize_obs"];
    if (j.contains("obs_scale")) {
        const auto values = j["obs_scale"].get<std::vector<double>>();
        c.obs_scale = Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
    }
}

void to_json(nlohmann::json& j, const PpoConfig& c) {
    j = {{"gamma", c.gamma},
         {"gae_lambda", c.gae_lambda},
         {"clip_epsilon", c.clip_epsilon},
         {"learning_rate", c.learning_rate},
         {"epochs_per_update", c.epochs_per_update},
         {"minibatch_size", c.minibatch_size},
         {"episodes_per_update", c.episodes_per_update},
         {"total_updates", c.total_updates},
         {"entropy_coef", c.entropy_coef},
         {"value_coef", c.value_coef},
         {"seed", c.seed},
         {"hidden_sizes", c.hidden_sizes},
         {"log_std_init", c.log_std_init},
         {"output_weight_scale", c.output_weight_scale},
         {"output_bias_init", c.output_bias_init}};
}

void from_json(const nlohmann::json& j, PpoConfig& c) {
    c = PpoConfig{};
    if (j.contains("gamma")) c.gamma = j["gamma"];
    if (j.contains("gae_lambda")) c.gae_lambda = j["gae_lambda"];
    if (j.contains("clip_epsilon")) c.clip_epsilon = j["clip_epsilon"];
    if (j.contains("learning_rate")) c.learning_rate = j["learning_rate"];
    if (j.contains("epochs_per_update")) c.epochs_per_update = j["epochs_per_update"];
    if (j.contains("minibatch_size")) c.minibatch_size = j["minibatch_size"];
    if (j.contains("episodes_per_update")) c.episodes_per_update = j["episodes_per_update"];
    if (j.contains("total_updates")) c.total_updates = j["total_updates"];
    if (j.contains("entropy_coef")) c.entropy_coef = j["entropy_coef"];
    if (j.contains("value_coef")) c.value_coef = j["value_coef"];
    if (j.contains("seed")) c.seed = j["seed"];
    if (j.contains("hidden_sizes")) c.hidden_sizes = j["hidden_sizes"].get<std::vector<int>>();
    if (j.contains("log_std_init")) c.log_std_init = j["log_std_init"];
    if (j.contains("output_weight_scale")) c.output_weight_scale = j["output_weight_scale"];
    if (j.contains("output_bias_init")) c.output_bias_init = j["output_bias_init"];
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

}  // namespace romrl
