#include "romrl/checkpoint.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>
#include <vector>

namespace romrl {

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
    nlohmann::json j;
    j["magic"] = kCheckpointMagic;
    j["seed"] = checkpoint.seed;
    j["update_index"] = checkpoint.update_index;
    j["actor_sizes"] = checkpoint.policy.mean_net.sizes();
    j["critic_sizes"] = checkpoint.critic.sizes();
    j["actor_params"] = vector_to_json(checkpoint.policy.mean_net.params());
    j["log_std"] = vector_to_json(checkpoint.policy.log_std);
    j["critic_params"] = vector_to_json(checkpoint.critic.params());
    if (!checkpoint.meta.empty())
        j["meta"] = nlohmann::json::parse(checkpoint.meta);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("checkpoint: cannot open for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("checkpoint: write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("checkpoint: cannot open: " + path);
    nlohmann::json j;
    in >> j;

    if (!j.contains("magic") || j["magic"].get<std::string>() != kCheckpointMagic)
        throw std::runtime_error("checkpoint: bad or missing magic in " + path);

    Mlp actor(j["actor_sizes"].get<std::vector<int>>());
    actor.params() = vector_from_json(j["actor_params"]);
    GaussianPolicy policy(std::move(actor), 0.0);
    policy.log_std = vector_from_json(j["log_std"]);

    Mlp critic(j["critic_sizes"].get<std::vector<int>>());
    critic.params() = vector_from_json(j["critic_params"]);

    Checkpoint checkpoint{std::move(policy), std::move(critic), j["seed"].get<std::uint64_t>(),
                          j["update_index"].get<int>(),
                          j.contains("meta") ? j["meta"].dump() : std::string()};
    if (checkpoint.policy.log_std.size() != checkpoint.policy.mean_net.output_dim())
        throw std::runtime_error("checkpoint: log_std size mismatch in " + path);
    return checkpoint;
}

}  // namespace romrl
