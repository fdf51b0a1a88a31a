#include <doctest.h>

#include <cmath>

#include "romrl/burgers.hpp"
#include "romrl/pod.hpp"
#include "romrl/rng.hpp"
#include "test_helpers.hpp"

using namespace romrl;
using romrl::testing::random_vector;

namespace {

/// Brute-force cyclic Jacobi eigendecomposition, kept deliberately naive and
/// independent of the SVD used by compute_pod.
void jacobi_eigen(Eigen::MatrixXd a, Eigen::MatrixXd& vectors, Eigen::VectorXd& values) {
    const int n = static_cast<int>(a.rows());
    vectors = Eigen::MatrixXd::Identity(n, n);
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-28) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(n, n);
                rot(p, p) = c;
                rot(q, q) = c;
                rot(p, q) = s;
                rot(q, p) = -s;
                a = rot.transpose() * a * rot;
                vectors = vectors * rot;
            }
        }
    }
    values = a.diagonal();
}

SnapshotSet random_snapshots(int n_points, int n_snapshots, unsigned seed) {
    SnapshotSet set;
    set.grid = Grid(n_points, 0.0, 1.0);
    set.times = TimeMesh(n_snapshots, 0.0, 1.0);
    set.nu = 0.01;
    RandomStream rng(seed);
    set.values.resize(n_points, n_snapshots);
    for (int j = 0; j < n_snapshots; ++j)
        set.values.col(j) = random_vector(n_points, rng);
    return set;
}

}  // namespace

TEST_CASE("compute_pod matches a brute-force correlation eigendecomposition") {
    const SnapshotSet set = random_snapshots(10, 5, 42);
    const PodBasis basis = compute_pod(set, 2, 5);

    // Oracle: eigendecomposition of the 5x5 weighted correlation matrix
    const Eigen::MatrixXd corr = set.values.transpose() * set.values * set.grid.dx;
    Eigen::MatrixXd vecs;
    Eigen::VectorXd vals;
    jacobi_eigen(corr, vecs, vals);
    std::vector<int> order{0, 1, 2, 3, 4};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] > vals[b]; });

    for (int k = 0; k < 5; ++k) {
        const double lambda = vals[order[k]];
        CHECK(basis.singular_values[k] ==
              doctest::Approx(std::sqrt(lambda / set.grid.dx)).epsilon(1e-8));
        const Eigen::VectorXd oracle_mode =
            set.values * vecs.col(order[k]) / std::sqrt(lambda);
        const double overlap =
            std::abs(inner_product(basis.modes.col(k), oracle_mode, set.grid));
        CHECK(overlap == doctest::Approx(1.0).epsilon(1e-8));
    }

    // orthonormality under the weighted inner product
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const double ip = inner_product(basis.modes.col(i), basis.modes.col(j), set.grid);
            CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-10);
        }

    // sign convention: entry of largest magnitude is positive
    for (int k = 0; k < 5; ++k) {
        int imax = 0;
        basis.modes.col(k).cwiseAbs().maxCoeff(&imax);
        CHECK(basis.modes(imax, k) > 0.0);
    }
}

TEST_CASE("rank-deficient data is rejected with the achievable rank") {
    SnapshotSet set;
    set.grid = Grid(8, 0.0, 1.0);
    set.times = TimeMesh(2, 0.0, 1.0);
    set.nu = 0.01;
    RandomStream rng(1);
    const Eigen::VectorXd profile = random_vector(8, rng);
    set.values.resize(8, 2);
    set.values.col(0) = profile;
    set.values.col(1) = profile;  // rank 1

    CHECK_THROWS_WITH_AS(compute_pod(set, 1, 2), doctest::Contains("rank 1"),
                         std::runtime_error);
}

TEST_CASE("ric formula and bounds") {
    PodBasis basis;
    basis.singular_values = Eigen::Vector2d(2.0, 0.0);
    CHECK(ric(basis, 1) == doctest::Approx(100.0));
    CHECK(ric(basis, 2) == doctest::Approx(100.0));

    basis.singular_values = Eigen::Vector2d(3.0, 4.0);
    CHECK(ric(basis, 1) == doctest::Approx(36.0));  // 9/25 by hand

    CHECK_THROWS_AS(ric(basis, 0), std::domain_error);
    CHECK_THROWS_AS(ric(basis, 3), std::domain_error);
}

TEST_CASE("ric is monotone and ends at 100 on real data") {
    const auto problem = romrl::testing::make_small_problem(128, 40, 0.001, 4, 8);
    double previous = 0.0;
    const int n = static_cast<int>(problem.basis->singular_values.size());
    for (int k = 1; k <= n; ++k) {
        const double value = ric(*problem.basis, k);
        CHECK(value >= previous - 1e-12);
        previous = value;
    }
    CHECK(ric(*problem.basis, n) == doctest::Approx(100.0).epsilon(1e-10));
}

TEST_CASE("project and reconstruct identities") {
    const auto problem = romrl::testing::make_small_problem(128, 40, 0.001, 4, 8);
    const PodBasis& basis = *problem.basis;

    // projecting a basis mode picks out its coefficient
    const Eigen::VectorXd alpha = project(basis.modes.col(1), basis, 3);
    CHECK(alpha[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(alpha[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(alpha[2] == doctest::Approx(0.0).epsilon(1e-10));

    const Eigen::VectorXd zeros = project(Eigen::VectorXd::Zero(basis.grid.n_points), basis, 8);
    CHECK(zeros.norm() == 0.0);

    // linear combination
    const Eigen::VectorXd combo = 2.0 * basis.modes.col(0) + 0.5 * basis.modes.col(2);
    const Eigen::VectorXd c = project(combo, basis, 4);
    CHECK(c[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(c[1] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(c[2] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(c[3] == doctest::Approx(0.0).epsilon(1e-8));

    // reconstruct of a unit coefficient vector returns the mode
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(2);
    e1[0] = 1.0;
    CHECK((reconstruct(e1, basis) - basis.modes.col(0)).norm() == doctest::Approx(0.0));
    CHECK(reconstruct(Eigen::VectorXd::Zero(3), basis).norm() == 0.0);

    // projection is idempotent: project(reconstruct(alpha)) == alpha
    RandomStream rng(5);
    const Eigen::VectorXd a0 = random_vector(8, rng);
    const Eigen::VectorXd round_trip = project(reconstruct(a0, basis), basis, 8);
    CHECK((round_trip - a0).cwiseAbs().maxCoeff() < 1e-10);

    CHECK_THROWS_AS(project(combo, basis, 9), std::invalid_argument);
    CHECK_THROWS_AS(project(Eigen::VectorXd::Zero(5), basis, 2), std::invalid_argument);
}

TEST_CASE("reconstruction error follows the singular-value energy identity") {
    const SnapshotSet set = random_snapshots(12, 6, 9);
    const PodBasis basis = compute_pod(set, 2, 6);

    const double total_energy = basis.singular_values.array().square().sum();
    for (int k = 1; k <= 5; ++k) {
        double error_sq = 0.0;
        double norm_sq = 0.0;
        for (int j = 0; j < set.values.cols(); ++j) {
            const Eigen::VectorXd rec = reconstruct(project(set.values.col(j), basis, k), basis);
            error_sq += (set.values.col(j) - rec).squaredNorm();
            norm_sq += set.values.col(j).squaredNorm();
        }
        const double tail = basis.singular_values.tail(6 - k).array().square().sum();
        CHECK(std::sqrt(error_sq / norm_sq) ==
              doctest::Approx(std::sqrt(tail / total_energy)).epsilon(1e-8));
    }
}
