#pragma once

// Dense symmetric kernels shared by every estimator: ML covariance, SPD
// inverse square root, the symmetric-definite generalized eigenproblem and
// the projection-distance between subspaces.

#include "msir/common.hpp"

#include <algorithm>
#include <cmath>

namespace msir {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Eigenvalues in descending order with matching eigenvector columns.
template <typename Scalar>
struct EigenPairs {
    DenseVector<Scalar> values;
    DenseMatrix<Scalar> vectors;
};

/// Spectral distance between two subspaces: sine of the largest principal angle.
struct SubspaceDistance {
    double delta = 0.0;
    double angle_deg = 0.0;
};

/// Column means of X.
template <typename Derived>
DenseVector<typename Derived::Scalar> column_means(const Eigen::MatrixBase<Derived>& X) {
    return X.colwise().mean().transpose();
}

/// Covariance with divisor n (maximum-likelihood convention).
template <typename Derived>
DenseMatrix<typename Derived::Scalar> sample_covariance(const Eigen::MatrixBase<Derived>& X) {
    using Scalar = typename Derived::Scalar;
    if (X.rows() < 2) throw DataError("sample_covariance: need at least 2 rows");
    if (!X.allFinite()) throw DataError("sample_covariance: non-finite input");
    const DenseVector<Scalar> mean = column_means(X);
    const DenseMatrix<Scalar> centered = X.rowwise() - mean.transpose();
    DenseMatrix<Scalar> S = (centered.adjoint() * centered) / Scalar(X.rows());
    return (S + S.transpose()) / Scalar(2);
}

/// Symmetric S^{-1/2}. Eigenvalues below floor * trace(S) / p are raised to that
/// level first, so near-singular covariances still yield a usable whitening.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> inv_sqrt(const Eigen::MatrixBase<Derived>& S,
                                               typename Derived::Scalar floor = 1e-8) {
    using Scalar = typename Derived::Scalar;
    if (S.rows() != S.cols()) throw std::invalid_argument("inv_sqrt: matrix not square");
    const DenseMatrix<Scalar> sym = (S + S.transpose()) / Scalar(2);
    const Scalar mean_eig = sym.trace() / Scalar(sym.rows());
    if (!(mean_eig > Scalar(0)) || sym.cwiseAbs().maxCoeff() == Scalar(0))
        throw NumericalError("inv_sqrt: matrix is zero or has non-positive trace");
    Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(sym);
    if (es.info() != Eigen::Success) throw NumericalError("inv_sqrt: eigendecomposition failed");
    const Scalar lo = floor * mean_eig;
    const DenseVector<Scalar> scale =
        es.eigenvalues().unaryExpr([lo](Scalar v) { return Scalar(1) / std::sqrt(std::max(v, lo)); });
    DenseMatrix<Scalar> out = es.eigenvectors() * scale.asDiagonal() * es.eigenvectors().transpose();
    return (out + out.transpose()) / Scalar(2);
}

/// Flip each column so its largest-magnitude entry is positive (first one on ties).
template <typename Scalar>
void fix_signs(DenseMatrix<Scalar>& V) {
    for (Eigen::Index j = 0; j < V.cols(); ++j) {
        Eigen::Index arg = 0;
        Scalar best = Scalar(-1);
        for (Eigen::Index i = 0; i < V.rows(); ++i) {
            if (std::abs(V(i, j)) > best) {
                best = std::abs(V(i, j));
                arg = i;
            }
        }
        if (V(arg, j) < Scalar(0)) V.col(j) = -V.col(j);
    }
}

/// Solves M v = lambda S v through W = S^{-1/2} M S^{-1/2}. Columns of the result
/// are S-orthonormal, eigenvalues descend, and signs follow fix_signs.
template <typename DerivedM, typename DerivedS>
EigenPairs<typename DerivedM::Scalar> generalized_eigen(const Eigen::MatrixBase<DerivedM>& M,
                                                        const Eigen::MatrixBase<DerivedS>& S,
                                                        typename DerivedM::Scalar floor = 1e-8) {
    using Scalar = typename DerivedM::Scalar;
    if (M.rows() != M.cols() || M.rows() != S.rows() || S.rows() != S.cols())
        throw std::invalid_argument("generalized_eigen: dimension mismatch");
    const DenseMatrix<Scalar> root = inv_sqrt(S, floor);
    DenseMatrix<Scalar> W = root * M * root;
    W = (W + W.transpose()) / Scalar(2);
    Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(W);
    if (es.info() != Eigen::Success) throw NumericalError("generalized_eigen: eigendecomposition failed");
    EigenPairs<Scalar> out;
    out.values = es.eigenvalues().reverse();
    out.vectors = root * es.eigenvectors().rowwise().reverse();
    fix_signs(out.vectors);
    return out;
}

/// Orthonormal basis of span(B) via column-pivoted QR; throws when B is rank deficient.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> orthonormal_basis(const Eigen::MatrixBase<Derived>& B) {
    using Scalar = typename Derived::Scalar;
    if (B.cols() == 0) throw std::invalid_argument("orthonormal_basis: empty basis");
    Eigen::ColPivHouseholderQR<DenseMatrix<Scalar>> qr(B);
    qr.setThreshold(Scalar(1e-10));
    if (qr.rank() < B.cols()) throw NumericalError("orthonormal_basis: rank-deficient basis");
    DenseMatrix<Scalar> Q = qr.householderQ() * DenseMatrix<Scalar>::Identity(B.rows(), B.cols());
    return Q;
}

/// ||P1 - P2||_2 for the orthogonal projections onto span(B1), span(B2).
template <typename Derived1, typename Derived2>
SubspaceDistance subspace_distance(const Eigen::MatrixBase<Derived1>& B1,
                                   const Eigen::MatrixBase<Derived2>& B2) {
    using Scalar = typename Derived1::Scalar;
    if (B1.rows() != B2.rows()) throw std::invalid_argument("subspace_distance: ambient dimension mismatch");
    const DenseMatrix<Scalar> Q1 = orthonormal_basis(B1);
    const DenseMatrix<Scalar> Q2 = orthonormal_basis(B2);
    const DenseMatrix<Scalar> diff = Q1 * Q1.transpose() - Q2 * Q2.transpose();
    Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(diff, Eigen::EigenvaluesOnly);
    double delta = static_cast<double>(es.eigenvalues().cwiseAbs().maxCoeff());
    delta = std::clamp(delta, 0.0, 1.0);
    return {delta, std::asin(delta) * 180.0 / M_PI};
}

}  // namespace msir
