#include "romrl/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "romrl/checkpoint.hpp"
#include "romrl/csv.hpp"

namespace romrl {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// log(1 - tanh(z)^2), stable for large |z|
double log_one_minus_tanh_sq(double z) {
    const double az = std::abs(z);
    return 2.0 * (std::log(2.0) - az - std::log1p(std::exp(-2.0 * az)));
}

double gaussian_log_density(double z, double mean, double log_std) {
    const double inv_sigma = std::exp(-log_std);
    const double u = (z - mean) * inv_sigma;
    return -0.5 * u * u - log_std - 0.5 * kLog2Pi;
}

}  // namespace

PolicySample policy_sample(const GaussianPolicy& policy,
                           const Eigen::Ref<const Eigen::VectorXd>& obs, RandomStream& rng) {
    const Eigen::VectorXd mean = policy.mean_net.forward(obs);
    const int dim = static_cast<int>(mean.size());
    PolicySample sample;
    sample.presquash.resize(dim);
    sample.action.resize(dim);
    double log_prob = 0.0;
    for (int d = 0; d < dim; ++d) {
        const double sigma = std::exp(policy.log_std[d]);
        const double z = mean[d] + sigma * rng.gaussian();
        sample.presquash[d] = z;
        sample.action[d] = std::tanh(z);
        log_prob += gaussian_log_density(z, mean[d], policy.log_std[d]) -
                    log_one_minus_tanh_sq(z);
    }
    sample.log_prob = log_prob;
    return sample;
}

double policy_log_prob(const GaussianPolicy& policy,
                       const Eigen::Ref<const Eigen::VectorXd>& obs,
                       const Eigen::Ref<const Eigen::VectorXd>& presquash) {
    const Eigen::VectorXd mean = policy.mean_net.forward(obs);
    double log_prob = 0.0;
    for (int d = 0; d < mean.size(); ++d)
        log_prob += gaussian_log_density(presquash[d], mean[d], policy.log_std[d]) -
                    log_one_minus_tanh_sq(presquash[d]);
    return log_prob;
}

Eigen::VectorXd policy_mean_action(const GaussianPolicy& policy,
                                   const Eigen::Ref<const Eigen::VectorXd>& obs) {
    return policy.mean_net.forward(obs).array().tanh();
}

double value_estimate(const Mlp& critic, const Eigen::Ref<const Eigen::VectorXd>& obs) {
    return critic.forward(obs)[0];
}

void RolloutBuffer::clear() {
    observations.clear();
    presquash.clear();
    log_probs.clear();
    rewards.clear();
    values.clear();
    dones.clear();
    bootstrap_value = 0.0;
}

void RolloutBuffer::add(Eigen::VectorXd obs, Eigen::VectorXd z, double log_prob, double reward,
                        double value, bool done) {
    observations.push_back(std::move(obs));
    presquash.push_back(std::move(z));
    log_probs.push_back(log_prob);
    rewards.push_back(reward);
    values.push_back(value);
    dones.push_back(done ? 1 : 0);
}

AdvantageResult compute_advantages(const RolloutBuffer& buffer, double gamma, double gae_lambda) {
    const int n = buffer.size();
    if (n == 0) throw std::logic_error("compute_advantages: empty buffer");

    AdvantageResult result;
    result.advantages.resize(n);
    double running = 0.0;
    for (int t = n - 1; t >= 0; --t) {
        const double not_done = buffer.dones[t] ? 0.0 : 1.0;
        const double v_next = (t == n - 1) ? buffer.bootstrap_value : buffer.values[t + 1];
        const double delta =
            buffer.rewards[t] + gamma * v_next * not_done - buffer.values[t];
        running = delta + gamma * gae_lambda * not_done * running;
        result.advantages[t] = running;
    }
    result.returns =
        result.advantages + Eigen::Map<const Eigen::VectorXd>(buffer.values.data(), n);
    return result;
}

void normalize_advantages(Eigen::VectorXd& advantages) {
    const int n = static_cast<int>(advantages.size());
    if (n <= 1) return;
    const double mean = advantages.mean();
    const double std_dev = std::sqrt((advantages.array() - mean).square().sum() / n);
    advantages.array() -= mean;
    if (std_dev > 1e-12) advantages /= std_dev;
}

double clipped_surrogate_term(double ratio, double advantage, double clip_epsilon) {
    const double clipped = std::clamp(ratio, 1.0 - clip_epsilon, 1.0 + clip_epsilon);
    return std::min(ratio * advantage, clipped * advantage);
}

BatchLosses ppo_batch_losses(const GaussianPolicy& policy, const Mlp& critic,
                             const RolloutBuffer& buffer, const Eigen::VectorXd& advantages,
                             const Eigen::VectorXd& returns, const std::vector<int>& indices,
                             const PpoConfig& config, Eigen::VectorXd* grad_mean,
                             Eigen::VectorXd* grad_log_std, Eigen::VectorXd* grad_critic) {
    if (indices.empty()) throw std::logic_error("ppo_batch_losses: empty batch");
    const double inv_batch = 1.0 / static_cast<double>(indices.size());
    const int act_dim = policy.mean_net.output_dim();

    BatchLosses losses;
    double surrogate_sum = 0.0;
    double ratio_sum = 0.0;
    int clipped_count = 0;

    Mlp::Workspace ws;
    for (const int idx : indices) {
        const Eigen::VectorXd& obs = buffer.observations[idx];
        const Eigen::VectorXd& z = buffer.presquash[idx];
        const double advantage = advantages[idx];

        const Eigen::VectorXd mean = policy.mean_net.forward(obs, ws);
        double log_prob = 0.0;
        for (int d = 0; d < act_dim; ++d)
            log_prob += gaussian_log_density(z[d], mean[d], policy.log_std[d]) -
                        log_one_minus_tanh_sq(z[d]);

        const double ratio = std::exp(log_prob - buffer.log_probs[idx]);
        const double unclipped = ratio * advantage;
        const double clipped =
            std::clamp(ratio, 1.0 - config.clip_epsilon, 1.0 + config.clip_epsilon) * advantage;
        surrogate_sum += std::min(unclipped, clipped);
        ratio_sum += ratio;
        if (std::abs(ratio - 1.0) > config.clip_epsilon) ++clipped_count;

        if (grad_mean != nullptr && unclipped <= clipped) {
            // d(-surrogate)/d(log_prob) through the active unclipped branch
            const double dl_dlogp = -advantage * ratio * inv_batch;
            Eigen::VectorXd dl_dmean(act_dim);
            for (int d = 0; d < act_dim; ++d) {
                const double inv_var = std::exp(-2.0 * policy.log_std[d]);
                const double centered = z[d] - mean[d];
                dl_dmean[d] = dl_dlogp * centered * inv_var;
                (*grad_log_std)[d] += dl_dlogp * (centered * centered * inv_var - 1.0);
            }
            policy.mean_net.backward(ws, dl_dmean, *grad_mean);
        }

        const double value = critic.forward(obs, ws)[0];
        const double residual = value - returns[idx];
        losses.value_loss += residual * residual * inv_batch;
        if (grad_critic != nullptr) {
            Eigen::VectorXd dl_dv(1);
            dl_dv[0] = config.value_coef * 2.0 * residual * inv_batch;
            critic.backward(ws, dl_dv, *grad_critic);
        }
    }

    // Entropy of the pre-squash Gaussian; state-independent, so the batch
    // mean equals the per-sample value.
    losses.entropy = policy.log_std.sum() + 0.5 * act_dim * (1.0 + kLog2Pi);
    if (grad_log_std != nullptr)
        grad_log_std->array() -= config.entropy_coef;

    losses.actor_loss = -surrogate_sum * inv_batch - config.entropy_coef * losses.entropy;
    losses.clip_fraction = clipped_count * inv_batch;
    losses.mean_ratio = ratio_sum * inv_batch;
    return losses;
}

UpdateStats ppo_update(GaussianPolicy& policy, Mlp& critic, const RolloutBuffer& buffer,
                       const PpoConfig& config, Adam& policy_opt, Adam& log_std_opt,
                       Adam& critic_opt, RandomStream& rng) {
    if (buffer.size() == 0) throw std::logic_error("ppo_update: empty buffer");

    AdvantageResult gae = compute_advantages(buffer, config.gamma, config.gae_lambda);
    normalize_advantages(gae.advantages);

    std::vector<int> order(buffer.size());
    std::iota(order.begin(), order.end(), 0);

    Eigen::VectorXd grad_mean(policy.mean_net.n_params());
    Eigen::VectorXd grad_log_std(policy.log_std.size());
    Eigen::VectorXd grad_critic(critic.n_params());

    UpdateStats stats;
    int batches = 0;
    for (int epoch = 0; epoch < config.epochs_per_update; ++epoch) {
        rng.shuffle(order.begin(), order.end());
        for (size_t start = 0; start < order.size();
             start += static_cast<size_t>(config.minibatch_size)) {
            const size_t stop =
                std::min(order.size(), start + static_cast<size_t>(config.minibatch_size));
            const std::vector<int> batch(order.begin() + start, order.begin() + stop);

            grad_mean.setZero();
            grad_log_std.setZero();
            grad_critic.setZero();
            const BatchLosses losses =
                ppo_batch_losses(policy, critic, buffer, gae.advantages, gae.returns, batch,
                                 config, &grad_mean, &grad_log_std, &grad_critic);

            if (!std::isfinite(losses.actor_loss) || !std::isfinite(losses.value_loss) ||
                !grad_mean.allFinite() || !grad_log_std.allFinite() ||
                !grad_critic.allFinite()) {
                stats.aborted = true;
                return stats;
            }

            policy_opt.step(policy.mean_net.params(), grad_mean, config.learning_rate);
            log_std_opt.step(policy.log_std, grad_log_std, config.learning_rate);
            policy.log_std = policy.log_std.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
            critic_opt.step(critic.params(), grad_critic, config.learning_rate);

            stats.actor_loss += losses.actor_loss;
            stats.value_loss += losses.value_loss;
            stats.entropy += losses.entropy;
            stats.clip_fraction += losses.clip_fraction;
            ++batches;
        }
    }
    if (batches > 0) {
        stats.actor_loss /= batches;
        stats.value_loss /= batches;
        stats.entropy /= batches;
        stats.clip_fraction /= batches;
    }
    return stats;
}

namespace {

void write_reward_history(const std::string& path, const TrainResult& result) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("train: cannot write " + path);
    out << "update,episode_reward,moving_avg\n";
    for (size_t i = 0; i < result.episode_rewards.size(); ++i)
        out << result.episode_update[i] << "," << csv::format_double(result.episode_rewards[i])
            << "," << csv::format_double(result.moving_avg[i]) << "\n";
}

}  // namespace

TrainResult train(const EnvFactory& make_env, const PpoConfig& config,
                  const TrainOptions& options) {
    if (config.total_updates < 1) throw std::invalid_argument("train: total_updates must be >= 1");
    if (!(config.clip_epsilon > 0.0 && config.clip_epsilon < 1.0))
        throw std::invalid_argument("train: clip_epsilon in (0,1)");
    if (config.gamma < 0.0 || config.gamma > 1.0)
        throw std::invalid_argument("train: gamma in [0,1]");
    if (!(config.learning_rate > 0.0))
        throw std::invalid_argument("train: learning_rate must be positive");

    std::unique_ptr<Env> env = make_env();

    std::vector<int> actor_sizes{env->observation_dim()};
    actor_sizes.insert(actor_sizes.end(), config.hidden_sizes.begin(), config.hidden_sizes.end());
    actor_sizes.push_back(env->action_dim());
    std::vector<int> critic_sizes{env->observation_dim()};
    critic_sizes.insert(critic_sizes.end(), config.hidden_sizes.begin(),
                        config.hidden_sizes.end());
    critic_sizes.push_back(1);

    RandomStream actor_rng(config.seed);
    RandomStream critic_rng(config.seed + 1);
    RandomStream rng(config.seed + 2);

    GaussianPolicy policy(Mlp::glorot(actor_sizes, actor_rng), config.log_std_init);
    policy.mean_net.set_output_layer(config.output_weight_scale, config.output_bias_init);
    Mlp critic = Mlp::glorot(critic_sizes, critic_rng);

    Adam policy_opt(policy.mean_net.n_params());
    Adam log_std_opt(static_cast<int>(policy.log_std.size()));
    Adam critic_opt(critic.n_params());

    const bool writing = !options.out_dir.empty();
    if (writing) std::filesystem::create_directories(options.out_dir);
    const auto save = [&](const GaussianPolicy& p, const Mlp& c, int update_index,
                          const std::string& name) {
        Checkpoint checkpoint{p, c, config.seed, update_index, options.checkpoint_meta};
        save_checkpoint(options.out_dir + "/" + name, checkpoint);
    };

    TrainResult result{std::move(policy), std::move(critic), {}, {}, {}, {}, false};
    RolloutBuffer buffer;

    for (int update = 0; update < config.total_updates; ++update) {
        buffer.clear();
        for (int episode = 0; episode < config.episodes_per_update; ++episode) {
            Eigen::VectorXd obs = env->reset();
            double total_reward = 0.0;
            bool done = false;
            while (!done) {
                const PolicySample sample = policy_sample(result.policy, obs, rng);
                const double value = value_estimate(result.critic, obs);
                const StepResult outcome = env->step(sample.action);
                buffer.add(obs, sample.presquash, sample.log_prob, outcome.reward, value,
                           outcome.done);
                total_reward += outcome.reward;
                obs = outcome.observation;
                done = outcome.done;
            }
            result.episode_update.push_back(update);
            result.episode_rewards.push_back(total_reward);
            const int window = std::min<int>(options.moving_avg_window,
                                             static_cast<int>(result.episode_rewards.size()));
            const double avg = std::accumulate(result.episode_rewards.end() - window,
                                               result.episode_rewards.end(), 0.0) /
                               window;
            result.moving_avg.push_back(avg);
        }

        const UpdateStats stats = ppo_update(result.policy, result.critic, buffer, config,
                                             policy_opt, log_std_opt, critic_opt, rng);
        result.update_stats.push_back(stats);
        if (stats.aborted) {
            result.aborted = true;
            break;
        }

        if (writing && options.checkpoint_interval > 0 &&
            (update + 1) % options.checkpoint_interval == 0 &&
            update + 1 < config.total_updates) {
            save(result.policy, result.critic, update + 1,
                 "checkpoint_update" + std::to_string(update + 1) + ".json");
        }
    }

    if (writing) {
        save(result.policy, result.critic, config.total_updates, "checkpoint_final.json");
        write_reward_history(options.out_dir + "/reward_history.csv", result);
    }
    return result;
}

}  // namespace romrl
