#include "romrl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "romrl/csv.hpp"

namespace romrl {

Trajectory true_projection_trajectory(double nu, const PodBasis& basis, const TimeMesh& times,
                                      int k_modes) {
    Trajectory traj;
    traj.times.resize(times.n_snapshots);
    traj.coeffs.resize(times.n_snapshots, k_modes);
    Eigen::VectorXd field(basis.grid.n_points);
    for (int j = 0; j < times.n_snapshots; ++j) {
        const double t = times.time(j);
        for (int i = 0; i < basis.grid.n_points; ++i)
            field[i] = exact_solution(basis.grid.point(i), t, nu);
        traj.times[j] = t;
        traj.coeffs.row(j) = project(field, basis, k_modes);
    }
    return traj;
}

Trajectory gp_trajectory(double nu, const PodBasis& basis, const TimeMesh& times, int r) {
    const RomTensors tensors = build_tensors(basis, nu, r);
    Eigen::VectorXd u0(basis.grid.n_points);
    for (int i = 0; i < basis.grid.n_points; ++i)
        u0[i] = exact_solution(basis.grid.point(i), times.t_min, nu);
    const Eigen::VectorXd alpha0 = project(u0, basis, r);
    return integrate([&](const Eigen::VectorXd& a) { return rhs_gp(a, tensors); }, alpha0,
                     times.dt, times.n_snapshots - 1, times.t_min);
}

RolloutOutcome rollout_policy(const GaussianPolicy& policy, EnvConfig config,
                              std::shared_ptr<const PodBasis> basis, const TimeMesh& times,
                              double nu) {
    // Rewards are irrelevant here; the VMS kind needs no snapshot data.
    config.reward_kind = RewardKind::Vms;
    config.dt = times.dt;
    config.horizon = times.n_snapshots - 1;

    ClosureEnv env(config, std::move(basis));
    Eigen::VectorXd obs = env.reset(nu);

    RolloutOutcome outcome;
    Eigen::MatrixXd coeffs(times.n_snapshots, config.r);
    std::vector<double> recorded_times;
    recorded_times.reserve(times.n_snapshots);
    coeffs.row(0) = env.state().alpha_rom;
    recorded_times.push_back(times.t_min);

    for (int s = 1; s < times.n_snapshots; ++s) {
        const StepResult result = env.step(policy_mean_action(policy, obs));
        if (env.state().diverged) {
            outcome.diverged = true;
            break;
        }
        coeffs.row(s) = env.state().alpha_rom;
        recorded_times.push_back(times.time(s));
        obs = result.observation;
    }
    outcome.trajectory.times = std::move(recorded_times);
    outcome.trajectory.coeffs = coeffs.topRows(outcome.trajectory.times.size());
    return outcome;
}

double rmse_field(const Trajectory& traj, const Trajectory& ror, const PodBasis& basis) {
    const auto n_times = traj.times.size();
    if (n_times != ror.times.size())
        throw std::domain_error("rmse_field: trajectories have different lengths");
    for (size_t j = 0; j < n_times; ++j)
        if (std::abs(traj.times[j] - ror.times[j]) > 1e-9)
            throw std::domain_error("rmse_field: time meshes do not align");

    const int n_points = basis.grid.n_points;
    double sum_sq = 0.0;
    for (size_t j = 0; j < n_times; ++j) {
        const Eigen::VectorXd diff = reconstruct(traj.coeffs.row(j), basis) -
                                     reconstruct(ror.coeffs.row(j), basis);
        sum_sq += diff.squaredNorm();
    }
    return std::sqrt(sum_sq / (static_cast<double>(n_points) * n_times));
}

double EvalCell::mean() const {
    if (per_seed_rmse.empty()) return std::numeric_limits<double>::quiet_NaN();
    double sum = 0.0;
    for (double v : per_seed_rmse) sum += v;
    return sum / per_seed_rmse.size();
}

double EvalCell::two_std() const {
    const size_t n = per_seed_rmse.size();
    if (n <= 1) return 0.0;
    const double m = mean();
    double sum_sq = 0.0;
    for (double v : per_seed_rmse) sum_sq += (v - m) * (v - m);
    return 2.0 * std::sqrt(sum_sq / (n - 1));
}

double EvalCell::median() const { return median_of(per_seed_rmse); }

double median_of(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

EvalCell evaluate_gp_cell(const PodBasis& basis, const TimeMesh& times, double re, int r) {
    EvalCell cell;
    cell.model = "GP";
    cell.re = re;
    const double nu = 1.0 / re;
    const Trajectory ror = true_projection_trajectory(nu, basis, times, r);
    try {
        cell.representative = gp_trajectory(nu, basis, times, r);
        cell.per_seed_rmse.push_back(rmse_field(cell.representative, ror, basis));
    } catch (const DivergenceError&) {
        cell.per_seed_rmse.push_back(std::numeric_limits<double>::infinity());
        cell.n_diverged = 1;
    }
    return cell;
}

EvalCell evaluate_policy_cell(const std::string& model,
                              const std::vector<PolicyWithConfig>& seeds, double re,
                              std::shared_ptr<const PodBasis> basis, const TimeMesh& times) {
    if (seeds.empty()) throw std::invalid_argument("evaluate_policy_cell: no seeds");
    EvalCell cell;
    cell.model = model;
    cell.re = re;
    const double nu = 1.0 / re;
    const int r = seeds.front().env_config.r;
    const Trajectory ror = true_projection_trajectory(nu, *basis, times, r);

    for (size_t s = 0; s < seeds.size(); ++s) {
        const RolloutOutcome outcome =
            rollout_policy(seeds[s].policy, seeds[s].env_config, basis, times, nu);
        if (outcome.diverged) {
            cell.per_seed_rmse.push_back(std::numeric_limits<double>::infinity());
            ++cell.n_diverged;
        } else {
            cell.per_seed_rmse.push_back(rmse_field(outcome.trajectory, ror, *basis));
        }
        if (s == 0) cell.representative = outcome.trajectory;
    }
    return cell;
}

namespace {

std::string cell_text(const EvalCell& cell) {
    std::ostringstream out;
    out << std::scientific << std::setprecision(3) << cell.mean();
    if (cell.per_seed_rmse.size() > 1) out << " +/- " << cell.two_std();
    if (cell.n_diverged > 0) out << " [" << cell.n_diverged << " diverged]";
    return out.str();
}

}  // namespace

std::string format_table(const EvalReport& report) {
    std::vector<double> res;
    std::vector<std::string> models;
    for (const EvalCell& cell : report.cells) {
        if (std::find(res.begin(), res.end(), cell.re) == res.end()) res.push_back(cell.re);
        if (std::find(models.begin(), models.end(), cell.model) == models.end())
            models.push_back(cell.model);
    }
    std::sort(res.begin(), res.end());

    const int width = 28;
    std::ostringstream out;
    out << std::left << std::setw(8) << "model";
    for (double re : res) {
        std::ostringstream head;
        head << "RMSE (Re=" << static_cast<long long>(re) << ")";
        out << std::setw(width) << head.str();
    }
    out << "\n";
    for (const std::string& model : models) {
        out << std::left << std::setw(8) << model;
        for (double re : res) {
            std::string text = "-";
            for (const EvalCell& cell : report.cells)
                if (cell.model == model && cell.re == re) text = cell_text(cell);
            out << std::setw(width) << text;
        }
        out << "\n";
    }
    return out.str();
}

void write_table_csv(const std::string& path, const EvalReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_table_csv: cannot open " + path);
    out << "model,re,n_seeds,rmse_mean,rmse_two_std,rmse_median,n_diverged,per_seed\n";
    for (const EvalCell& cell : report.cells) {
        out << cell.model << "," << csv::format_double(cell.re) << ","
            << cell.per_seed_rmse.size() << "," << csv::format_double(cell.mean()) << ","
            << csv::format_double(cell.two_std()) << "," << csv::format_double(cell.median())
            << "," << cell.n_diverged << ",";
        for (size_t i = 0; i < cell.per_seed_rmse.size(); ++i)
            out << (i ? ";" : "") << csv::format_double(cell.per_seed_rmse[i]);
        out << "\n";
    }
}

void write_modal_trajectories_csv(const std::string& path, const Trajectory& model_traj,
                                  const Trajectory& ror) {
    const auto n = model_traj.times.size();
    const int r = static_cast<int>(model_traj.coeffs.cols());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_modal_trajectories_csv: cannot open " + path);
    out << "t";
    for (int k = 1; k <= r; ++k) out << ",alpha" << k << "_model";
    for (int k = 1; k <= static_cast<int>(ror.coeffs.cols()); ++k) out << ",alpha" << k << "_ror";
    out << "\n";
    for (size_t j = 0; j < n; ++j) {
        out << csv::format_double(model_traj.times[j]);
        for (int k = 0; k < r; ++k) out << "," << csv::format_double(model_traj.coeffs(j, k));
        if (j < ror.times.size())
            for (int k = 0; k < ror.coeffs.cols(); ++k)
                out << "," << csv::format_double(ror.coeffs(j, k));
        out << "\n";
    }
}

void write_field_csv(const std::string& path, const Trajectory& traj, const PodBasis& basis) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_field_csv: cannot open " + path);
    out << "x,t,u\n";
    for (size_t j = 0; j < traj.times.size(); ++j) {
        const Eigen::VectorXd field = reconstruct(traj.coeffs.row(j), basis);
        for (int i = 0; i < basis.grid.n_points; ++i)
            out << csv::format_double(basis.grid.point(i)) << ","
                << csv::format_double(traj.times[j]) << "," << csv::format_double(field[i])
                << "\n";
    }
}

}  // namespace romrl
