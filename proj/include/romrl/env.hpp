/// @file env.hpp
/// Minimal episodic environment interface consumed by the PPO trainer.

#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>

namespace romrl {

struct StepResult {
    Eigen::VectorXd observation;
    double reward = 0.0;
    bool done = false;
    std::map<std::string, double> info;
};

class Env {
public:
    virtual ~Env() = default;
    virtual int observation_dim() const = 0;
    virtual int action_dim() const = 0;
    virtual Eigen::VectorXd reset() = 0;
    virtual StepResult step(const Eigen::VectorXd& raw_action) = 0;
};

/// Discounted return sum_t gamma^t r_t.
double episode_return(const Eigen::Ref<const Eigen::VectorXd>& rewards, double gamma);

}  // namespace romrl
