/// @file closure_env.hpp
/// Episodic environment around the closure ROM. One episode integrates the
/// closure-augmented system over t in [0,1] while companion base-GP and
/// test-scale systems evolve action-free alongside it.

#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>

#include "romrl/env.hpp"
#include "romrl/galerkin.hpp"
#include "romrl/pod.hpp"

namespace romrl {

enum class ClosureMode { Lmrl, Mmrl, Vmrl };
enum class RewardKind { Supervised, Vms };

/// Which state anchors the binary VMS comparison.
///   Base: +10 iff sigma * |base - rom| < |base - test|   (the printed form)
///   Test: +10 iff sigma * |test - rom| < |test - base|   (rewards tracking the
///         test model, the stated closure hypothesis)
enum class VmsAnchor { Base, Test };

struct EnvConfig {
    ClosureMode mode = ClosureMode::Mmrl;
    int r = 8;        // resolved modes R
    int r_total = 16; // test scales R~
    double nu = 0.001;
    double dt = 1.0 / 499.0;
    int horizon = 499;
    double eta_max = 0.01;
    double sigma = 1.6;
    RewardKind reward_kind = RewardKind::Supervised;
    VmsAnchor vms_anchor = VmsAnchor::Base;
    bool normalize_obs = true;
    // Per-mode observation scale; empty means derive at construction (from
    // snapshot projections when available, else from the base GP trajectory).
    Eigen::VectorXd obs_scale;

    int action_dim() const { return mode == ClosureMode::Lmrl ? 1 : r; }
    static RewardKind default_reward(ClosureMode mode) {
        return mode == ClosureMode::Vmrl ? RewardKind::Vms : RewardKind::Supervised;
    }
};

struct EnvState {
    int t_index = 0;
    Eigen::VectorXd alpha_rom;   // closure ROM, length R
    Eigen::VectorXd alpha_base;  // base GP, length R
    Eigen::VectorXd alpha_test;  // test model, length R~
    bool done = false;
    bool diverged = false;
};

/// Map raw policy output in [-1,1] to modal viscosities in [0, eta_max].
/// LMRL expands the scalar amplitude through the linear kernel
/// eta_k = eta_e * k / R.
Eigen::VectorXd map_action(const Eigen::Ref<const Eigen::VectorXd>& raw_action,
                           const EnvConfig& config);

/// Binary VMS reward: +10 iff sigma * dist_rom < dist_ref, else -10.
double vms_binary_reward(double dist_rom, double dist_ref, double sigma);

class ClosureEnv : public Env {
public:
    /// Snapshots are required for the supervised reward (their nu must match
    /// config.nu); the VMS reward is data-free.
    ClosureEnv(EnvConfig config, std::shared_ptr<const PodBasis> basis,
               std::shared_ptr<const SnapshotSet> snapshots = nullptr);

    int observation_dim() const override { return config_.r; }
    int action_dim() const override { return config_.action_dim(); }

    Eigen::VectorXd reset() override;
    /// Reset with a different viscosity; Galerkin tensors are rebuilt for it
    /// while the basis stays fixed at its training data.
    Eigen::VectorXd reset(double nu_episode);

    StepResult step(const Eigen::VectorXd& raw_action) override;

    const EnvState& state() const { return state_; }
    const EnvConfig& config() const { return config_; }
    const RomTensors& tensors() const { return tensors_; }

private:
    Eigen::VectorXd observation() const;
    Eigen::VectorXd true_projection(int t_index) const;

    EnvConfig config_;
    std::shared_ptr<const PodBasis> basis_;
    std::shared_ptr<const SnapshotSet> snapshots_;
    double nu_episode_;
    RomTensors tensors_;       // r modes, at nu_episode
    RomTensors tensors_test_;  // r_total modes, at nu_episode
    EnvState state_;
};

}  // namespace romrl
