/// @file eval.hpp
/// Policy and baseline evaluation across Reynolds numbers: deterministic
/// rollouts, field RMSE against the true projection, and table assembly.

#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "romrl/closure_env.hpp"
#include "romrl/galerkin.hpp"
#include "romrl/pod.hpp"
#include "romrl/ppo.hpp"

namespace romrl {

/// True reduced order representation: alpha_k(t_j) = <u(.,t_j; nu), psi_k>.
/// The basis stays fixed at its training data regardless of nu.
Trajectory true_projection_trajectory(double nu, const PodBasis& basis, const TimeMesh& times,
                                      int k_modes);

/// Closure-free GP trajectory from the projected initial condition.
/// Throws DivergenceError on blow-up.
Trajectory gp_trajectory(double nu, const PodBasis& basis, const TimeMesh& times, int r);

struct RolloutOutcome {
    Trajectory trajectory;  // closure-ROM coefficients, truncated on divergence
    bool diverged = false;
};

/// Deterministic rollout (policy mean action, no sampling) at viscosity nu.
/// dt and horizon are taken from `times` so the result aligns with the ROR.
RolloutOutcome rollout_policy(const GaussianPolicy& policy, EnvConfig config,
                              std::shared_ptr<const PodBasis> basis, const TimeMesh& times,
                              double nu);

/// Root mean square of the pointwise field deviation over all (x_i, t_j):
/// both coefficient histories are reconstructed through the basis first.
double rmse_field(const Trajectory& traj, const Trajectory& ror, const PodBasis& basis);

struct EvalCell {
    std::string model;
    double re = 0.0;
    std::vector<double> per_seed_rmse;  // infinity marks a diverged rollout
    int n_diverged = 0;
    Trajectory representative;  // first seed's trajectory (the GP's own for GP)

    double mean() const;
    double two_std() const;  // 2 * sample standard deviation, 0 for one seed
    double median() const;
};

struct EvalReport {
    std::vector<EvalCell> cells;
};

struct PolicyWithConfig {
    GaussianPolicy policy;
    EnvConfig env_config;
};

EvalCell evaluate_gp_cell(const PodBasis& basis, const TimeMesh& times, double re, int r);

EvalCell evaluate_policy_cell(const std::string& model,
                              const std::vector<PolicyWithConfig>& seeds, double re,
                              std::shared_ptr<const PodBasis> basis, const TimeMesh& times);

std::string format_table(const EvalReport& report);
void write_table_csv(const std::string& path, const EvalReport& report);

/// Columns: t, alpha_k of the model, alpha_k of the ROR.
void write_modal_trajectories_csv(const std::string& path, const Trajectory& model_traj,
                                  const Trajectory& ror);

/// Long format (x, t, u) of the reconstructed field.
void write_field_csv(const std::string& path, const Trajectory& traj, const PodBasis& basis);

double median_of(std::vector<double> values);

}  // namespace romrl
