#include "romrl/burgers.hpp"

#include <cmath>
#include <stdexcept>

namespace romrl {

Grid::Grid(int n_points_, double x_min_, double x_max_)
    : n_points(n_points_), x_min(x_min_), x_max(x_max_) {
    if (n_points < 3) throw std::invalid_argument("Grid: need at least 3 points");
    if (!(x_max > x_min)) throw std::invalid_argument("Grid: x_max must exceed x_min");
    dx = (x_max - x_min) / (n_points - 1);
}

Eigen::VectorXd Grid::points() const {
    Eigen::VectorXd x(n_points);
    for (int i = 0; i < n_points; ++i) x[i] = point(i);
    return x;
}

TimeMesh::TimeMesh(int n_snapshots_, double t_min_, double t_max_)
    : n_snapshots(n_snapshots_), t_min(t_min_), t_max(t_max_) {
    if (n_snapshots < 2) throw std::invalid_argument("TimeMesh: need at least 2 snapshots");
    if (!(t_max > t_min)) throw std::invalid_argument("TimeMesh: t_max must exceed t_min");
    dt = (t_max - t_min) / (n_snapshots - 1);
}

double exact_solution(double x, double t, double nu) {
    if (!std::isfinite(x) || !std::isfinite(t) || !std::isfinite(nu))
        throw std::domain_error("exact_solution: non-finite input");
    if (!(nu > 0.0)) throw std::domain_error("exact_solution: nu must be positive");
    if (t < 0.0) throw std::domain_error("exact_solution: t must be non-negative");

    const double tp1 = t + 1.0;
    const double e = x * x / (4.0 * nu * tp1) + 0.5 * std::log(tp1) - 1.0 / (16.0 * nu);
    // 1/(1+exp(e)) via the branch that never overflows
    double sigmoid;
    if (e > 0.0) {
        const double w = std::exp(-e);
        sigmoid = w / (1.0 + w);
    } else {
        sigmoid = 1.0 / (1.0 + std::exp(e));
    }
    return (x / tp1) * sigmoid;
}

SnapshotSet generate_snapshots(const Grid& grid, const TimeMesh& times, double nu) {
    SnapshotSet set;
    set.grid = grid;
    set.times = times;
    set.nu = nu;
    set.values.resize(grid.n_points, times.n_snapshots);
    for (int j = 0; j < times.n_snapshots; ++j) {
        const double t = times.time(j);
        for (int i = 0; i < grid.n_points; ++i)
            set.values(i, j) = exact_solution(grid.point(i), t, nu);
    }
    return set;
}

double inner_product(const Eigen::Ref<const Eigen::VectorXd>& f,
                     const Eigen::Ref<const Eigen::VectorXd>& g,
                     const Grid& grid) {
    if (f.size() != grid.n_points || g.size() != grid.n_points)
        throw std::invalid_argument("inner_product: vector length does not match grid");
    return f.dot(g) * grid.dx;
}

}  // namespace romrl
