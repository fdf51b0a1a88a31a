#include <doctest.h>

#include <cmath>

#include "romrl/closure_env.hpp"
#include "romrl/config.hpp"
#include "test_helpers.hpp"

using namespace romrl;

namespace {

EnvConfig small_config(const romrl::testing::SmallProblem& problem, ClosureMode mode,
                       RewardKind reward) {
    EnvConfig config;
    config.mode = mode;
    config.r = problem.basis->r_resolved;
    config.r_total = problem.basis->r_total;
    config.nu = problem.snapshots->nu;
    config.dt = problem.snapshots->times.dt;
    config.horizon = problem.snapshots->times.n_snapshots - 1;
    config.reward_kind = reward;
    config.normalize_obs = false;
    return config;
}

}  // namespace

TEST_CASE("map_action: bounds, midpoint, linear kernel") {
    EnvConfig config;
    config.mode = ClosureMode::Lmrl;
    config.r = 8;
    config.eta_max = 0.01;

    Eigen::VectorXd raw(1);
    raw << 1.0;
    const Eigen::VectorXd eta = map_action(raw, config);
    REQUIRE(eta.size() == 8);
    for (int k = 0; k < 8; ++k)
        CHECK(eta[k] == doctest::Approx(0.01 * (k + 1) / 8.0).epsilon(1e-14));
    CHECK(eta[0] == doctest::Approx(0.00125));
    CHECK(eta[7] == doctest::Approx(0.01));

    raw << -1.0;
    CHECK(map_action(raw, config).norm() == 0.0);

    config.mode = ClosureMode::Mmrl;
    const Eigen::VectorXd mid = map_action(Eigen::VectorXd::Zero(8), config);
    for (int k = 0; k < 8; ++k) CHECK(mid[k] == doctest::Approx(0.005));

    CHECK_THROWS_AS(map_action(Eigen::VectorXd::Zero(3), config), std::invalid_argument);
}

TEST_CASE("binary VMS reward arithmetic") {
    CHECK(vms_binary_reward(0.001, 0.01, 1.6) == 10.0);   // 0.0016 < 0.01
    CHECK(vms_binary_reward(0.01, 0.01, 1.6) == -10.0);   // 0.016 not < 0.01
    CHECK(vms_binary_reward(0.0, 1e-300, 1.6) == 10.0);   // strict inequality
    CHECK(vms_binary_reward(0.0, 0.0, 1.6) == -10.0);
}

TEST_CASE("episode_return discounting") {
    Eigen::VectorXd ones3 = Eigen::VectorXd::Ones(3);
    CHECK(episode_return(ones3, 0.0) == 1.0);
    CHECK(episode_return(ones3, 1.0) == 3.0);
    Eigen::VectorXd two(2);
    two << 1.0, 2.0;
    CHECK(episode_return(two, 0.5) == doctest::Approx(2.0));
    CHECK_THROWS_AS(episode_return(two, 1.5), std::invalid_argument);
}

TEST_CASE("reset state identities") {
    const auto problem = romrl::testing::make_small_problem();
    const EnvConfig config =
        small_config(problem, ClosureMode::Mmrl, RewardKind::Supervised);
    ClosureEnv env(config, problem.basis, problem.snapshots);

    const Eigen::VectorXd obs = env.reset();
    const Eigen::VectorXd expected =
        project(problem.snapshots->values.col(0), *problem.basis, config.r);
    CHECK((obs - expected).cwiseAbs().maxCoeff() < 1e-12);

    const EnvState& state = env.state();
    CHECK((state.alpha_base - state.alpha_rom).norm() == 0.0);
    CHECK((state.alpha_test.head(config.r) - state.alpha_rom).norm() == 0.0);
    CHECK(state.t_index == 0);
    CHECK_FALSE(state.done);
}

TEST_CASE("observation normalization divides by the configured scale") {
    const auto problem = romrl::testing::make_small_problem();
    EnvConfig config = small_config(problem, ClosureMode::Mmrl, RewardKind::Supervised);
    config.normalize_obs = true;
    config.obs_scale = Eigen::VectorXd::Constant(config.r, 2.0);
    ClosureEnv env(config, problem.basis, problem.snapshots);

    const Eigen::VectorXd obs = env.reset();
    CHECK((2.0 * obs - env.state().alpha_rom).cwiseAbs().maxCoeff() < 1e-15);

    // derived scale: leaving obs_scale empty computes one per mode
    EnvConfig derived = config;
    derived.obs_scale = Eigen::VectorXd();
    ClosureEnv env2(derived, problem.basis, problem.snapshots);
    CHECK(env2.config().obs_scale.size() == config.r);
    CHECK(env2.config().obs_scale.minCoeff() > 0.0);
}

TEST_CASE("supervised reward equals the negative modal deviation") {
    const auto problem = romrl::testing::make_small_problem();
    const EnvConfig config =
        small_config(problem, ClosureMode::Mmrl, RewardKind::Supervised);
    ClosureEnv env(config, problem.basis, problem.snapshots);
    env.reset();

    RandomStream rng(2);
    for (int s = 0; s < 20; ++s) {
        const StepResult result =
            env.step(romrl::testing::random_vector(config.r, rng));
        const Eigen::VectorXd truth =
            project(problem.snapshots->values.col(env.state().t_index), *problem.basis,
                    config.r);
        const double deviation = (env.state().alpha_rom - truth).norm();
        CHECK(result.reward == doctest::Approx(-deviation).epsilon(1e-14));
        CHECK(result.reward <= 0.0);
        CHECK(result.info.at("dist_true_rom") == doctest::Approx(deviation));
    }
}

TEST_CASE("supervised mode requires matching snapshots") {
    const auto problem = romrl::testing::make_small_problem();
    const EnvConfig config =
        small_config(problem, ClosureMode::Mmrl, RewardKind::Supervised);
    CHECK_THROWS_AS(ClosureEnv(config, problem.basis, nullptr), std::invalid_argument);

    ClosureEnv env(config, problem.basis, problem.snapshots);
    CHECK_THROWS_AS(env.reset(0.0005), std::invalid_argument);
}

TEST_CASE("zero closure reproduces the base GP trajectory") {
    const auto problem = romrl::testing::make_small_problem();
    EnvConfig config = small_config(problem, ClosureMode::Mmrl, RewardKind::Vms);
    ClosureEnv env(config, problem.basis);
    env.reset();

    const RomTensors tensors = build_tensors(*problem.basis, config.nu, config.r);
    const Eigen::VectorXd alpha0 = env.state().alpha_rom;
    const Trajectory reference = integrate(
        [&](const Eigen::VectorXd& a) { return rhs_gp(a, tensors); }, alpha0, config.dt,
        config.horizon);

    const Eigen::VectorXd off = Eigen::VectorXd::Constant(config.r, -1.0);
    for (int s = 1; s <= config.horizon; ++s) {
        env.step(off);
        CHECK((env.state().alpha_rom - env.state().alpha_base).norm() == 0.0);
        CHECK((env.state().alpha_rom - reference.coeffs.row(s).transpose())
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }
    CHECK(env.state().done);
}

TEST_CASE("VMS rewards are exactly +10 or -10") {
    const auto problem = romrl::testing::make_small_problem();
    EnvConfig config = small_config(problem, ClosureMode::Vmrl, RewardKind::Vms);
    ClosureEnv env(config, problem.basis);
    env.reset();

    RandomStream rng(4);
    bool done = false;
    while (!done) {
        const StepResult result =
            env.step(romrl::testing::random_vector(config.r, rng));
        CHECK((result.reward == 10.0 || result.reward == -10.0));
        done = result.done;
    }
}

TEST_CASE("step is deterministic and companion states ignore the action") {
    const auto problem = romrl::testing::make_small_problem();
    EnvConfig config = small_config(problem, ClosureMode::Mmrl, RewardKind::Vms);

    ClosureEnv env_a(config, problem.basis);
    ClosureEnv env_b(config, problem.basis);
    env_a.reset();
    env_b.reset();

    RandomStream rng(6);
    const Eigen::VectorXd action = romrl::testing::random_vector(config.r, rng);
    const StepResult ra = env_a.step(action);
    const StepResult rb = env_b.step(action);
    CHECK(ra.reward == rb.reward);
    CHECK((ra.observation - rb.observation).norm() == 0.0);
    CHECK((env_a.state().alpha_rom - env_b.state().alpha_rom).norm() == 0.0);

    // a different action moves only alpha_rom
    ClosureEnv env_c(config, problem.basis);
    env_c.reset();
    env_c.step(romrl::testing::random_vector(config.r, rng));
    CHECK((env_a.state().alpha_base - env_c.state().alpha_base).norm() == 0.0);
    CHECK((env_a.state().alpha_test - env_c.state().alpha_test).norm() == 0.0);
    CHECK((env_a.state().alpha_rom - env_c.state().alpha_rom).norm() != 0.0);
}

TEST_CASE("stepping a finished episode is a usage error") {
    const auto problem = romrl::testing::make_small_problem();
    EnvConfig config = small_config(problem, ClosureMode::Mmrl, RewardKind::Vms);
    config.horizon = 2;
    ClosureEnv env(config, problem.basis);
    env.reset();
    const Eigen::VectorXd action = Eigen::VectorXd::Zero(config.r);
    env.step(action);
    const StepResult last = env.step(action);
    CHECK(last.done);
    CHECK_THROWS_AS(env.step(action), std::logic_error);
}

TEST_CASE("stiff closure triggers the divergence penalty") {
    const auto problem = romrl::testing::make_small_problem();
    EnvConfig config = small_config(problem, ClosureMode::Mmrl, RewardKind::Vms);
    config.eta_max = 1e9;  // far beyond the RK4 stability limit
    ClosureEnv env(config, problem.basis);
    env.reset();

    const Eigen::VectorXd full_on = Eigen::VectorXd::Ones(config.r);
    StepResult result;
    int steps = 0;
    do {
        result = env.step(full_on);
        ++steps;
    } while (!result.done && steps < config.horizon);

    CHECK(env.state().diverged);
    CHECK(result.done);
    CHECK(result.reward == -10.0);
    CHECK(result.info.at("diverged") == 1.0);

    // supervised flavor assigns the large penalty
    EnvConfig sup = small_config(problem, ClosureMode::Mmrl, RewardKind::Supervised);
    sup.eta_max = 1e9;
    ClosureEnv env2(sup, problem.basis, problem.snapshots);
    env2.reset();
    StepResult r2;
    steps = 0;
    do {
        r2 = env2.step(full_on);
        ++steps;
    } while (!r2.done && steps < sup.horizon);
    CHECK(env2.state().diverged);
    CHECK(r2.reward == -1e3);
}

TEST_CASE("reset at a different viscosity rebuilds tensors") {
    const auto problem = romrl::testing::make_small_problem();
    EnvConfig config = small_config(problem, ClosureMode::Mmrl, RewardKind::Vms);
    ClosureEnv env(config, problem.basis);

    env.reset(1.0 / 1500.0);
    CHECK(env.tensors().nu == doctest::Approx(1.0 / 1500.0));
    const Eigen::VectorXd action = Eigen::VectorXd::Zero(config.r);
    env.step(action);
    const Eigen::VectorXd at_1500 = env.state().alpha_rom;

    env.reset(config.nu);
    env.step(action);
    CHECK((env.state().alpha_rom - at_1500).norm() > 0.0);
}

TEST_CASE("config round-trips through JSON") {
    EnvConfig config;
    config.mode = ClosureMode::Vmrl;
    config.reward_kind = RewardKind::Vms;
    config.vms_anchor = VmsAnchor::Test;
    config.eta_max = 0.02;
    config.obs_scale = Eigen::Vector3d(0.5, 0.25, 0.125);
    nlohmann::json j = config;
    const EnvConfig back = j.get<EnvConfig>();
    CHECK(back.mode == ClosureMode::Vmrl);
    CHECK(back.reward_kind == RewardKind::Vms);
    CHECK(back.vms_anchor == VmsAnchor::Test);
    CHECK(back.eta_max == config.eta_max);
    CHECK((back.obs_scale - config.obs_scale).norm() == 0.0);
}
