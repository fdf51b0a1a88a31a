#include "romrl/closure_env.hpp"

#include <cmath>
#include <stdexcept>

namespace romrl {

double episode_return(const Eigen::Ref<const Eigen::VectorXd>& rewards, double gamma) {
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("episode_return: gamma in [0,1]");
    double total = 0.0;
    double weight = 1.0;
    for (Eigen::Index t = 0; t < rewards.size(); ++t) {
        total += weight * rewards[t];
        weight *= gamma;
    }
    return total;
}

Eigen::VectorXd map_action(const Eigen::Ref<const Eigen::VectorXd>& raw_action,
                           const EnvConfig& config) {
    if (raw_action.size() != config.action_dim())
        throw std::invalid_argument("map_action: wrong action dimension");
    const Eigen::VectorXd clipped = raw_action.cwiseMax(-1.0).cwiseMin(1.0);
    const Eigen::VectorXd mapped = config.eta_max * (clipped.array() + 1.0) * 0.5;

    if (config.mode == ClosureMode::Lmrl) {
        Eigen::VectorXd eta(config.r);
        for (int k = 0; k < config.r; ++k)
            eta[k] = mapped[0] * static_cast<double>(k + 1) / config.r;
        return eta;
    }
    return mapped;
}

double vms_binary_reward(double dist_rom, double dist_ref, double sigma) {
    return sigma * dist_rom < dist_ref ? 10.0 : -10.0;
}

namespace {

Eigen::VectorXd scale_from_coeff_matrix(const Eigen::MatrixXd& coeffs_by_time, int r) {
    // coeffs_by_time: one row per time instant, one column per mode
    Eigen::VectorXd scale(r);
    const double n = static_cast<double>(coeffs_by_time.rows());
    for (int k = 0; k < r; ++k) {
        const double mean = coeffs_by_time.col(k).mean();
        const double var = (coeffs_by_time.col(k).array() - mean).square().sum() / n;
        scale[k] = std::max(std::sqrt(var), 1e-8);
    }
    return scale;
}

}  // namespace

ClosureEnv::ClosureEnv(EnvConfig config, std::shared_ptr<const PodBasis> basis,
                       std::shared_ptr<const SnapshotSet> snapshots)
    : config_(std::move(config)),
      basis_(std::move(basis)),
      snapshots_(std::move(snapshots)),
      nu_episode_(config_.nu) {
    if (!basis_) throw std::invalid_argument("ClosureEnv: basis required");
    if (config_.r < 1 || config_.r >= config_.r_total || config_.r_total > basis_->r_total)
        throw std::invalid_argument("ClosureEnv: need 1 <= r < r_total <= basis modes");
    if (!(config_.sigma > 1.0)) throw std::invalid_argument("ClosureEnv: sigma must exceed 1");
    if (!(config_.eta_max > 0.0)) throw std::invalid_argument("ClosureEnv: eta_max must be positive");
    if (config_.horizon < 1) throw std::invalid_argument("ClosureEnv: horizon must be >= 1");
    if (!(config_.dt > 0.0)) throw std::invalid_argument("ClosureEnv: dt must be positive");

    if (config_.reward_kind == RewardKind::Supervised) {
        if (!snapshots_)
            throw std::invalid_argument(
                "ClosureEnv: supervised reward requires snapshot data");
        if (std::abs(snapshots_->nu - config_.nu) > 1e-14)
            throw std::invalid_argument(
                "ClosureEnv: snapshot viscosity does not match the configured nu");
        if (config_.horizon > snapshots_->times.n_snapshots - 1)
            throw std::invalid_argument(
                "ClosureEnv: horizon exceeds available snapshots");
        if (std::abs(snapshots_->times.dt - config_.dt) > 1e-12)
            throw std::invalid_argument(
                "ClosureEnv: dt does not match the snapshot spacing");
    }

    tensors_ = build_tensors(*basis_, nu_episode_, config_.r);
    tensors_test_ = build_tensors(*basis_, nu_episode_, config_.r_total);

    if (config_.normalize_obs && config_.obs_scale.size() == 0) {
        if (snapshots_) {
            Eigen::MatrixXd coeffs(snapshots_->times.n_snapshots, config_.r);
            for (int j = 0; j < snapshots_->times.n_snapshots; ++j)
                coeffs.row(j) = project(snapshots_->values.col(j), *basis_, config_.r);
            config_.obs_scale = scale_from_coeff_matrix(coeffs, config_.r);
        } else {
            // Data-free path: statistics of the base GP trajectory stand in
            // for the training-set modal statistics.
            const Eigen::VectorXd u0 =
                generate_snapshots(basis_->grid, TimeMesh(2, 0.0, 1.0), config_.nu).values.col(0);
            const Eigen::VectorXd alpha0 = project(u0, *basis_, config_.r);
            try {
                const Trajectory base = integrate(
                    [this](const Eigen::VectorXd& a) { return rhs_gp(a, tensors_); }, alpha0,
                    config_.dt, config_.horizon);
                config_.obs_scale = scale_from_coeff_matrix(base.coeffs, config_.r);
            } catch (const DivergenceError&) {
                config_.obs_scale = Eigen::VectorXd::Ones(config_.r);
            }
        }
    }
    if (config_.normalize_obs && config_.obs_scale.size() != config_.r)
        throw std::invalid_argument("ClosureEnv: obs_scale length must equal r");

    reset();
}

Eigen::VectorXd ClosureEnv::reset() { return reset(nu_episode_); }

Eigen::VectorXd ClosureEnv::reset(double nu_episode) {
    if (!(nu_episode > 0.0)) throw std::invalid_argument("reset: nu must be positive");
    if (config_.reward_kind == RewardKind::Supervised &&
        std::abs(nu_episode - snapshots_->nu) > 1e-14)
        throw std::invalid_argument(
            "reset: supervised reward is only defined at the snapshot viscosity");

    if (nu_episode != nu_episode_) {
        nu_episode_ = nu_episode;
        tensors_ = build_tensors(*basis_, nu_episode_, config_.r);
        tensors_test_ = build_tensors(*basis_, nu_episode_, config_.r_total);
    }

    Eigen::VectorXd u0(basis_->grid.n_points);
    for (int i = 0; i < basis_->grid.n_points; ++i)
        u0[i] = exact_solution(basis_->grid.point(i), 0.0, nu_episode_);

    state_.t_index = 0;
    state_.alpha_test = project(u0, *basis_, config_.r_total);
    state_.alpha_rom = state_.alpha_test.head(config_.r);
    state_.alpha_base = state_.alpha_rom;
    state_.done = false;
    state_.diverged = false;
    return observation();
}

Eigen::VectorXd ClosureEnv::true_projection(int t_index) const {
    return project(snapshots_->values.col(t_index), *basis_, config_.r);
}

Eigen::VectorXd ClosureEnv::observation() const {
    if (!config_.normalize_obs) return state_.alpha_rom;
    return state_.alpha_rom.cwiseQuotient(config_.obs_scale);
}

StepResult ClosureEnv::step(const Eigen::VectorXd& raw_action) {
    if (state_.done) throw std::logic_error("ClosureEnv::step called on a finished episode");

    const Eigen::VectorXd eta = map_action(raw_action, config_);
    const double dt = config_.dt;

    state_.alpha_rom = rk4_step(
        [&](const Eigen::VectorXd& a) { return rhs_closure(a, tensors_, eta); },
        state_.alpha_rom, dt);
    state_.alpha_base = rk4_step(
        [&](const Eigen::VectorXd& a) { return rhs_gp(a, tensors_); }, state_.alpha_base, dt);
    state_.alpha_test = rk4_step(
        [&](const Eigen::VectorXd& a) { return rhs_test(a, tensors_test_); }, state_.alpha_test,
        dt);
    state_.t_index += 1;

    state_.diverged =
        diverged(state_.alpha_rom) || diverged(state_.alpha_base) || diverged(state_.alpha_test);

    StepResult result;
    result.info["t_index"] = state_.t_index;

    if (state_.diverged) {
        state_.done = true;
        result.done = true;
        result.reward = config_.reward_kind == RewardKind::Supervised ? -1e3 : -10.0;
        result.observation = Eigen::VectorXd::Zero(config_.r);
        result.info["diverged"] = 1.0;
        return result;
    }

    const Eigen::VectorXd test_head = state_.alpha_test.head(config_.r);
    const double dist_base_rom = (state_.alpha_base - state_.alpha_rom).norm();
    const double dist_base_test = (state_.alpha_base - test_head).norm();
    const double dist_test_rom = (test_head - state_.alpha_rom).norm();
    result.info["dist_base_rom"] = dist_base_rom;
    result.info["dist_base_test"] = dist_base_test;
    result.info["dist_test_rom"] = dist_test_rom;
    result.info["diverged"] = 0.0;

    if (config_.reward_kind == RewardKind::Supervised) {
        const double deviation = (state_.alpha_rom - true_projection(state_.t_index)).norm();
        result.reward = -deviation;
        result.info["dist_true_rom"] = deviation;
    } else {
        const double anchored =
            config_.vms_anchor == VmsAnchor::Base ? dist_base_rom : dist_test_rom;
        result.reward = vms_binary_reward(anchored, dist_base_test, config_.sigma);
    }

    state_.done = state_.t_index >= config_.horizon;
    result.done = state_.done;
    result.observation = observation();
    return result;
}

}  // namespace romrl
