/// @file burgers.hpp
/// Analytical viscous Burgers solution on [0,1]x[0,1], snapshot generation,
/// and the discrete L2 inner product shared by all modules.

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace romrl {

/// Uniform vertex-centered spatial grid including both endpoints.
struct Grid {
    int n_points = 0;
    double x_min = 0.0;
    double x_max = 1.0;
    double dx = 0.0;

    Grid() = default;
    Grid(int n_points, double x_min = 0.0, double x_max = 1.0);

    double point(int i) const { return x_min + i * dx; }
    Eigen::VectorXd points() const;
};

/// Uniform snapshot times including both endpoints.
struct TimeMesh {
    int n_snapshots = 0;
    double t_min = 0.0;
    double t_max = 1.0;
    double dt = 0.0;

    TimeMesh() = default;
    TimeMesh(int n_snapshots, double t_min = 0.0, double t_max = 1.0);

    double time(int j) const { return t_min + j * dt; }
};

/// Velocity snapshots: column j holds u(x, t_j) on the grid.
struct SnapshotSet {
    Grid grid;
    TimeMesh times;
    Eigen::MatrixXd values;  // n_points x n_snapshots
    double nu = 0.0;
};

/// Closed-form Burgers solution u(x,t) at viscosity nu.
///
/// Evaluated in log space: u = (x/(t+1)) / (1 + exp(E)) with
/// E = x^2/(4 nu (t+1)) + log(t+1)/2 - 1/(16 nu), which avoids forming
/// t0 = exp(1/(8 nu)) (overflows double precision for nu <= ~0.0002).
double exact_solution(double x, double t, double nu);

/// Evaluate exact_solution at every (grid point, snapshot time).
SnapshotSet generate_snapshots(const Grid& grid, const TimeMesh& times, double nu);

/// Discrete L2 inner product sum_i f_i g_i dx.
double inner_product(const Eigen::Ref<const Eigen::VectorXd>& f,
                     const Eigen::Ref<const Eigen::VectorXd>& g,
                     const Grid& grid);

}  // namespace romrl
