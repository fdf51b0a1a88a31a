/// @file config.hpp
/// JSON (de)serialization for environment/trainer configuration, plus the
/// snapshot-generation block used by the CLI and checkpoint echoes.

#pragma once

#include <json.hpp>
#include <string>

#include "romrl/closure_env.hpp"
#include "romrl/ppo.hpp"

namespace romrl {

/// Parameters of the training database.
struct DataConfig {
    double nu = 0.001;
    int n_points = 1024;
    int n_snapshots = 500;
    double x_min = 0.0, x_max = 1.0;
    double t_min = 0.0, t_max = 1.0;

    Grid grid() const { return Grid(n_points, x_min, x_max); }
    TimeMesh time_mesh() const { return TimeMesh(n_snapshots, t_min, t_max); }
};

std::string to_string(ClosureMode mode);
ClosureMode closure_mode_from_string(const std::string& s);
std::string to_string(RewardKind kind);
RewardKind reward_kind_from_string(const std::string& s);
std::string to_string(VmsAnchor anchor);
VmsAnchor vms_anchor_from_string(const std::string& s);

void to_json(nlohmann::json& j, const DataConfig& c);
void from_json(const nlohmann::json& j, DataConfig& c);
void to_json(nlohmann::json& j, const EnvConfig& c);
void from_json(const nlohmann::json& j, EnvConfig& c);
void to_json(nlohmann::json& j, const PpoConfig& c);
void from_json(const nlohmann::json& j, PpoConfig& c);

nlohmann::json load_json_file(const std::string& path);

}  // namespace romrl
