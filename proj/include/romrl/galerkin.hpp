/// @file galerkin.hpp
/// Galerkin tensors for the Burgers ROM, modal eddy-viscosity closure term,
/// and RK4 time integration with a divergence guard.

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

#include "romrl/burgers.hpp"
#include "romrl/pod.hpp"

namespace romrl {

/// Precomputed projection tensors for an r-mode system.
/// lin(k,i)            = <nu psi_i'', psi_k>
/// nonlin[k](i,j)      = <-psi_i psi_j', psi_k>
/// closure_kernel(k,i) = <psi_i'', psi_k>   (viscosity-free; lin = nu * closure_kernel)
struct RomTensors {
    int r = 0;
    double nu = 0.0;
    Eigen::MatrixXd lin;
    Eigen::MatrixXd closure_kernel;
    std::vector<Eigen::MatrixXd> nonlin;
};

/// Modal coefficient time history; row j holds alpha(t_j).
struct Trajectory {
    std::vector<double> times;
    Eigen::MatrixXd coeffs;  // (n_steps + 1) x r
};

/// Thrown when integration produces non-finite values or |alpha|_inf
/// exceeds kDivergenceLimit. Training converts this into episode
/// termination rather than a crash.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(int step, const std::string& what) : std::runtime_error(what), step_(step) {}
    int step() const { return step_; }

private:
    int step_;
};

inline constexpr double kDivergenceLimit = 1e3;

using RhsFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Second derivative on the grid: second-order central differences in the
/// interior, second-order one-sided stencils at the boundaries.
Eigen::VectorXd second_derivative(const Eigen::Ref<const Eigen::VectorXd>& f, const Grid& grid);

/// First derivative, same discretization order as second_derivative.
Eigen::VectorXd first_derivative(const Eigen::Ref<const Eigen::VectorXd>& f, const Grid& grid);

/// Assemble the r-mode Galerkin tensors from the leading r basis modes.
RomTensors build_tensors(const PodBasis& basis, double nu, int r);

/// d alpha_k/dt = sum_i lin(k,i) alpha_i + sum_ij nonlin[k](i,j) alpha_i alpha_j
Eigen::VectorXd rhs_gp(const Eigen::Ref<const Eigen::VectorXd>& alpha, const RomTensors& tensors);

/// rhs_gp plus the modal closure term eta_k sum_i closure_kernel(k,i) alpha_i.
Eigen::VectorXd rhs_closure(const Eigen::Ref<const Eigen::VectorXd>& alpha,
                            const RomTensors& tensors,
                            const Eigen::Ref<const Eigen::VectorXd>& eta);

/// Test-scale model: the full GP right-hand side built with r = r_total
/// tensors. The test state is the first R components of the integrated
/// trajectory.
Eigen::VectorXd rhs_test(const Eigen::Ref<const Eigen::VectorXd>& alpha_tilde,
                         const RomTensors& tensors_tilde);

/// One classical RK4 step of an autonomous system.
Eigen::VectorXd rk4_step(const RhsFn& rhs, const Eigen::VectorXd& alpha, double dt);

/// True if the state is unusable for further stepping.
bool diverged(const Eigen::Ref<const Eigen::VectorXd>& alpha);

/// Integrate with RK4 for n_steps; the trajectory includes the initial state.
/// Throws DivergenceError (with the offending step index) on blow-up.
Trajectory integrate(const RhsFn& rhs, const Eigen::VectorXd& alpha0, double dt, int n_steps,
                     double t0 = 0.0);

}  // namespace romrl
