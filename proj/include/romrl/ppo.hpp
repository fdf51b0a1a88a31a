/// @file ppo.hpp
/// Proximal policy optimization for a tanh-squashed Gaussian policy:
/// clipped surrogate objective, GAE, Adam updates with exact gradients.

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "romrl/env.hpp"
#include "romrl/mlp.hpp"
#include "romrl/rng.hpp"

namespace romrl {

/// Action distribution: z ~ Normal(mean_net(obs), exp(log_std)), a = tanh(z).
/// log_std is state-independent and clamped to [-5, 1].
struct GaussianPolicy {
    Mlp mean_net;
    Eigen::VectorXd log_std;

    GaussianPolicy(Mlp net, double log_std_init)
        : mean_net(std::move(net)),
          log_std(Eigen::VectorXd::Constant(mean_net.output_dim(), log_std_init)) {}
};

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 1.0;

struct PolicySample {
    Eigen::VectorXd action;     // tanh-squashed, in (-1,1)
    Eigen::VectorXd presquash;  // the Gaussian draw z
    double log_prob = 0.0;      // includes the tanh Jacobian correction
};

PolicySample policy_sample(const GaussianPolicy& policy,
                           const Eigen::Ref<const Eigen::VectorXd>& obs, RandomStream& rng);

/// Log density of the squashed action identified by its presquash draw.
double policy_log_prob(const GaussianPolicy& policy,
                       const Eigen::Ref<const Eigen::VectorXd>& obs,
                       const Eigen::Ref<const Eigen::VectorXd>& presquash);

/// Deterministic action tanh(mean_net(obs)) used for evaluation rollouts.
Eigen::VectorXd policy_mean_action(const GaussianPolicy& policy,
                                   const Eigen::Ref<const Eigen::VectorXd>& obs);

double value_estimate(const Mlp& critic, const Eigen::Ref<const Eigen::VectorXd>& obs);

/// One transition per row; bootstrap_value closes the final GAE recursion
/// when the last stored transition is not terminal.
struct RolloutBuffer {
    std::vector<Eigen::VectorXd> observations;
    std::vector<Eigen::VectorXd> presquash;
    std::vector<double> log_probs;
    std::vector<double> rewards;
    std::vector<double> values;
    std::vector<std::uint8_t> dones;
    double bootstrap_value = 0.0;

    int size() const { return static_cast<int>(rewards.size()); }
    void clear();
    void add(Eigen::VectorXd obs, Eigen::VectorXd z, double log_prob, double reward, double value,
             bool done);
};

struct AdvantageResult {
    Eigen::VectorXd advantages;  // raw GAE, not normalized
    Eigen::VectorXd returns;     // advantages + values
};

AdvantageResult compute_advantages(const RolloutBuffer& buffer, double gamma, double gae_lambda);

/// In-place shift/scale to zero mean, unit variance (no-op on length <= 1 or
/// zero spread).
void normalize_advantages(Eigen::VectorXd& advantages);

/// Per-sample clipped surrogate min(ratio * adv, clip(ratio, 1-eps, 1+eps) * adv).
double clipped_surrogate_term(double ratio, double advantage, double clip_epsilon);

struct PpoConfig {
    double gamma = 0.99;
    double gae_lambda = 0.95;
    double clip_epsilon = 0.2;
    double learning_rate = 3e-4;
    int epochs_per_update = 10;
    int minibatch_size = 64;
    int episodes_per_update = 4;
    int total_updates = 300;
    double entropy_coef = 0.0;
    double value_coef = 0.5;
    std::uint64_t seed = 0;
    std::vector<int> hidden_sizes = {64, 64};
    double log_std_init = -1.0;
    // Small policy-head initialization: the actor's output layer starts with
    // down-scaled weights and a fixed bias (pre-tanh), so the initial policy
    // is near-uniform across states at the lower end of the action range,
    // i.e. close to the closure-free baseline model.
    double output_weight_scale = 0.01;
    double output_bias_init = -1.5;
};

struct UpdateStats {
    double actor_loss = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;
    double clip_fraction = 0.0;
    bool aborted = false;  // non-finite loss encountered; no further params applied
};

struct BatchLosses {
    double actor_loss = 0.0;   // -mean(min(r A, clip(r) A)) - entropy_coef * entropy
    double value_loss = 0.0;   // mean((V - return)^2)
    double entropy = 0.0;
    double clip_fraction = 0.0;
    double mean_ratio = 0.0;
};

/// Losses and (optionally) exact gradients for the index subset of a buffer.
/// Gradient outputs are accumulated into zero-initialized vectors by the
/// caller; pass nullptr to skip gradient work (used by finite-difference
/// oracles in tests).
BatchLosses ppo_batch_losses(const GaussianPolicy& policy, const Mlp& critic,
                             const RolloutBuffer& buffer,
                             const Eigen::VectorXd& advantages, const Eigen::VectorXd& returns,
                             const std::vector<int>& indices, const PpoConfig& config,
                             Eigen::VectorXd* grad_mean, Eigen::VectorXd* grad_log_std,
                             Eigen::VectorXd* grad_critic);

/// Epochs x minibatches of clipped-surrogate ascent over the buffer.
UpdateStats ppo_update(GaussianPolicy& policy, Mlp& critic, const RolloutBuffer& buffer,
                       const PpoConfig& config, Adam& policy_opt, Adam& log_std_opt,
                       Adam& critic_opt, RandomStream& rng);

using EnvFactory = std::function<std::unique_ptr<Env>()>;

struct TrainOptions {
    std::string out_dir;           // when set: reward_history.csv + checkpoints
    int checkpoint_interval = 100;
    int moving_avg_window = 50;
    // Opaque environment/config echo stored in checkpoints (JSON text).
    std::string checkpoint_meta;
};

struct TrainResult {
    GaussianPolicy policy;
    Mlp critic;
    std::vector<int> episode_update;      // update index per episode
    std::vector<double> episode_rewards;  // undiscounted sum per episode
    std::vector<double> moving_avg;
    std::vector<UpdateStats> update_stats;
    bool aborted = false;
};

/// Collect episodes_per_update rollouts, estimate advantages, run ppo_update;
/// repeat total_updates times. Fully deterministic for a given seed.
TrainResult train(const EnvFactory& make_env, const PpoConfig& config,
                  const TrainOptions& options = {});

}  // namespace romrl
