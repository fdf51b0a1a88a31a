#include "romrl/pod.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace romrl {

PodBasis compute_pod(const SnapshotSet& snapshots, int r_resolved, int r_total) {
    const int n = snapshots.grid.n_points;
    const int m = snapshots.times.n_snapshots;
    if (r_resolved < 1 || r_resolved >= r_total || r_total > m)
        throw std::invalid_argument("compute_pod: need 1 <= r_resolved < r_total <= n_snapshots");

    Eigen::BDCSVD<Eigen::MatrixXd> svd(snapshots.values, Eigen::ComputeThinU);
    const Eigen::VectorXd& sigma = svd.singularValues();

    // Numerical rank relative to the leading singular value
    const double tol = sigma.size() > 0 ? sigma[0] * 1e-12 * std::max(n, m) : 0.0;
    int rank = 0;
    for (int i = 0; i < sigma.size(); ++i)
        if (sigma[i] > tol) ++rank;
    if (rank < r_total) {
        std::ostringstream msg;
        msg << "compute_pod: requested " << r_total
            << " modes but snapshot data has rank " << rank;
        throw std::runtime_error(msg.str());
    }

    PodBasis basis;
    basis.grid = snapshots.grid;
    basis.singular_values = sigma;
    basis.r_resolved = r_resolved;
    basis.r_total = r_total;

    // Unit Euclidean norm -> unit dx-weighted norm
    const double scale = 1.0 / std::sqrt(snapshots.grid.dx);
    basis.modes = svd.matrixU().leftCols(r_total) * scale;

    for (int k = 0; k < r_total; ++k) {
        int imax = 0;
        basis.modes.col(k).cwiseAbs().maxCoeff(&imax);
        if (basis.modes(imax, k) < 0.0) basis.modes.col(k) = -basis.modes.col(k);
    }
    return basis;
}

double ric(const PodBasis& basis, int k) {
    const int n = static_cast<int>(basis.singular_values.size());
    if (k < 1 || k > n) throw std::domain_error("ric: index out of range");
    const Eigen::VectorXd energy = basis.singular_values.array().square();
    return 100.0 * energy.head(k).sum() / energy.sum();
}

Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& field,
                        const PodBasis& basis, int k_max) {
    if (k_max < 0 || k_max > basis.r_total)
        throw std::invalid_argument("project: k_max exceeds available modes");
    if (field.size() != basis.grid.n_points)
        throw std::invalid_argument("project: field length does not match grid");
    return basis.modes.leftCols(k_max).transpose() * field * basis.grid.dx;
}

Eigen::VectorXd reconstruct(const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                            const PodBasis& basis) {
    if (coeffs.size() > basis.r_total)
        throw std::invalid_argument("reconstruct: more coefficients than modes");
    return basis.modes.leftCols(coeffs.size()) * coeffs;
}

}  // namespace romrl
