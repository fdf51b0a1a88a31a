/// @file pod.hpp
/// Proper orthogonal decomposition of snapshot data: basis computation,
/// relative information content, projection and reconstruction.

#pragma once

#include <Eigen/Dense>

#include "romrl/burgers.hpp"

namespace romrl {

/// Orthonormal spatial modes under the dx-weighted inner product.
/// Columns of `modes` are psi_1..psi_{r_total}; the full singular value
/// spectrum is kept for RIC diagnostics.
struct PodBasis {
    Grid grid;
    Eigen::MatrixXd modes;            // n_points x r_total
    Eigen::VectorXd singular_values;  // length min(n_points, n_snapshots), non-increasing
    int r_resolved = 0;               // R
    int r_total = 0;                  // R~
};

/// Leading left singular vectors of the snapshot matrix, rescaled so that
/// <psi_k, psi_k> = 1 under inner_product. Sign convention: the entry of
/// largest magnitude in each mode is positive.
/// Throws if the data rank cannot support r_total modes (message names the
/// achievable rank).
PodBasis compute_pod(const SnapshotSet& snapshots, int r_resolved, int r_total);

/// Relative information content 100 * sum_{i<=k} s_i^2 / sum_i s_i^2, k is 1-based.
double ric(const PodBasis& basis, int k);

/// Modal coefficients alpha_k = <field, psi_k> for k = 1..k_max.
Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& field,
                        const PodBasis& basis, int k_max);

/// Field sum_k coeffs_k psi_k (uses the first coeffs.size() modes).
Eigen::VectorXd reconstruct(const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                            const PodBasis& basis);

}  // namespace romrl
