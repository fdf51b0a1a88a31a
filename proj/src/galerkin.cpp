#include "romrl/galerkin.hpp"

#include <cmath>
#include <sstream>

namespace romrl {

Eigen::VectorXd second_derivative(const Eigen::Ref<const Eigen::VectorXd>& f, const Grid& grid) {
    const int n = grid.n_points;
    if (f.size() != n) throw std::invalid_argument("second_derivative: length mismatch");
    if (n < 5) throw std::invalid_argument("second_derivative: need at least 5 points");
    const double inv = 1.0 / (grid.dx * grid.dx);
    Eigen::VectorXd d(n);
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv;
    for (int i = 1; i < n - 1; ++i) d[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * inv;
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv;
    return d;
}

Eigen::VectorXd first_derivative(const Eigen::Ref<const Eigen::VectorXd>& f, const Grid& grid) {
    const int n = grid.n_points;
    if (f.size() != n) throw std::invalid_argument("first_derivative: length mismatch");
    if (n < 5) throw std::invalid_argument("first_derivative: need at least 5 points");
    const double inv = 1.0 / (2.0 * grid.dx);
    Eigen::VectorXd d(n);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv;
    for (int i = 1; i < n - 1; ++i) d[i] = (f[i + 1] - f[i - 1]) * inv;
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv;
    return d;
}

RomTensors build_tensors(const PodBasis& basis, double nu, int r) {
    if (r < 1 || r > basis.r_total)
        throw std::invalid_argument("build_tensors: r exceeds basis modes");
    const Grid& grid = basis.grid;

    Eigen::MatrixXd d1(grid.n_points, r), d2(grid.n_points, r);
    for (int i = 0; i < r; ++i) {
        d1.col(i) = first_derivative(basis.modes.col(i), grid);
        d2.col(i) = second_derivative(basis.modes.col(i), grid);
    }

    RomTensors tensors;
    tensors.r = r;
    tensors.nu = nu;
    // closure_kernel(k,i) = <psi_i'', psi_k>; lin = nu * closure_kernel entrywise
    tensors.closure_kernel = (basis.modes.leftCols(r).transpose() * d2) * grid.dx;
    tensors.lin = nu * tensors.closure_kernel;

    tensors.nonlin.resize(r);
    for (int k = 0; k < r; ++k) {
        Eigen::MatrixXd nk(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                nk(i, j) = -(basis.modes.col(i).cwiseProduct(d1.col(j)))
                                .dot(basis.modes.col(k)) *
                           grid.dx;
        tensors.nonlin[k] = nk;
    }
    return tensors;
}

Eigen::VectorXd rhs_gp(const Eigen::Ref<const Eigen::VectorXd>& alpha, const RomTensors& tensors) {
    if (alpha.size() != tensors.r) throw std::invalid_argument("rhs_gp: alpha length mismatch");
    Eigen::VectorXd out = tensors.lin * alpha;
    for (int k = 0; k < tensors.r; ++k) out[k] += alpha.dot(tensors.nonlin[k] * alpha);
    return out;
}

Eigen::VectorXd rhs_closure(const Eigen::Ref<const Eigen::VectorXd>& alpha,
                            const RomTensors& tensors,
                            const Eigen::Ref<const Eigen::VectorXd>& eta) {
    if (eta.size() != tensors.r) throw std::invalid_argument("rhs_closure: eta length mismatch");
    Eigen::VectorXd out = rhs_gp(alpha, tensors);
    for (int k = 0; k < tensors.r; ++k)
        out[k] += eta[k] * tensors.closure_kernel.row(k).dot(alpha);
    return out;
}

Eigen::VectorXd rhs_test(const Eigen::Ref<const Eigen::VectorXd>& alpha_tilde,
                         const RomTensors& tensors_tilde) {
    return rhs_gp(alpha_tilde, tensors_tilde);
}

Eigen::VectorXd rk4_step(const RhsFn& rhs, const Eigen::VectorXd& alpha, double dt) {
    const Eigen::VectorXd k1 = rhs(alpha);
    const Eigen::VectorXd k2 = rhs(alpha + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = rhs(alpha + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = rhs(alpha + dt * k3);
    return alpha + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

bool diverged(const Eigen::Ref<const Eigen::VectorXd>& alpha) {
    return !alpha.allFinite() || alpha.cwiseAbs().maxCoeff() > kDivergenceLimit;
}

Trajectory integrate(const RhsFn& rhs, const Eigen::VectorXd& alpha0, double dt, int n_steps,
                     double t0) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    if (n_steps < 1) throw std::invalid_argument("integrate: need at least one step");

    Trajectory traj;
    traj.times.resize(n_steps + 1);
    traj.coeffs.resize(n_steps + 1, alpha0.size());
    traj.times[0] = t0;
    traj.coeffs.row(0) = alpha0;

    Eigen::VectorXd alpha = alpha0;
    for (int s = 1; s <= n_steps; ++s) {
        alpha = rk4_step(rhs, alpha, dt);
        if (diverged(alpha)) {
            std::ostringstream msg;
            msg << "integrate: trajectory diverged at step " << s;
            throw DivergenceError(s, msg.str());
        }
        traj.times[s] = t0 + s * dt;
        traj.coeffs.row(s) = alpha;
    }
    return traj;
}

}  // namespace romrl
