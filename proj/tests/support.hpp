#pragma once

#include "msir/msir.hpp"

#include <doctest.h>

#include <random>

namespace msir::test {

inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = normal(rng);
    return M;
}

inline Vector gaussian_vector(Eigen::Index n, std::uint64_t seed) { return gaussian_matrix(n, 1, seed).col(0); }

inline Matrix random_spd(Eigen::Index p, std::uint64_t seed) {
    const Matrix A = gaussian_matrix(p, p, seed);
    return A * A.transpose() + 0.5 * Matrix::Identity(p, p);
}

/// Structural checks every fitted estimator must pass.
inline void check_fit_invariants(const MsirFit& fit) {
    const Eigen::Index p = fit.sigma.rows();
    CHECK(fit.eigenvalues.size() == fit.d_max);
    CHECK(fit.basis.cols() == fit.d_max);
    for (Eigen::Index j = 0; j < fit.basis.cols(); ++j) CHECK(fit.basis.col(j).norm() == doctest::Approx(1.0).epsilon(1e-12));
    const Vector order_key = fit.method == "phd" ? Vector(fit.eigenvalues.cwiseAbs()) : fit.eigenvalues;
    for (Eigen::Index j = 1; j < order_key.size(); ++j) CHECK(order_key[j] <= order_key[j - 1]);
    if (fit.method == "msir" || fit.method == "sir") {
        CHECK(fit.omega.sum() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(fit.omega.minCoeff() >= 0.0);
        CHECK(fit.eigenvalues.minCoeff() >= -1e-10);
        const Matrix G = fit.raw_dirs.transpose() * fit.sigma * fit.raw_dirs;
        CHECK((G - Matrix::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(eigenvalue_identity_error(fit) < 1e-8);
        CHECK(fit.d_max == std::min<long>(p, fit.total_components() - 1));
    }
}

}  // namespace msir::test
