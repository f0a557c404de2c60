#include "msir/baselines.hpp"

#include "msir/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace msir {

namespace {

void check_inputs(const Matrix& X, const Vector& y, const char* who) {
    if (y.size() != X.rows()) throw DataError(std::string(who) + ": response length does not match the predictor rows");
    if (X.rows() <= X.cols()) throw DataError(std::string(who) + ": need more observations than predictors");
    if (!X.allFinite() || !y.allFinite()) throw DataError(std::string(who) + ": non-finite input");
}

// Eigenvectors u of a standardized-scale kernel mapped back by S^{-1/2}, in the given order.
void finish_standardized(MsirFit& fit, const Matrix& root, const Vector& values, const Matrix& vectors,
                         const std::vector<Eigen::Index>& order) {
    const Eigen::Index p = values.size();
    fit.all_eigenvalues.resize(p);
    Matrix U(p, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        fit.all_eigenvalues[j] = values[order[j]];
        U.col(j) = vectors.col(order[j]);
    }
    fit.all_dirs = root * U;
    fix_signs(fit.all_dirs);
    fit.d_max = static_cast<int>(p);
    fit.eigenvalues = fit.all_eigenvalues;
    fit.raw_dirs = fit.all_dirs;
    fit.basis = fit.raw_dirs;
    fit.basis.colwise().normalize();
}

std::vector<Eigen::Index> descending(const Vector& key) {
    std::vector<Eigen::Index> order(key.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return key[a] > key[b]; });
    return order;
}

}  // namespace

MsirFit fit_sir(const Matrix& X, const Vector& y, const MsirOptions& opts) {
    check_inputs(X, y, "fit_sir");
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    MsirFit fit;
    fit.method = "sir";
    fit.n = static_cast<long>(n);
    fit.sliced = slice_for_fit(y, static_cast<long>(p), opts.slices, opts.discrete);
    fit.warnings = fit.sliced.warnings;
    fit.sigma = sample_covariance(X);

    const int H = fit.sliced.H;
    Matrix means = Matrix::Zero(H, p);
    for (Eigen::Index i = 0; i < n; ++i) means.row(fit.sliced.labels[i] - 1) += X.row(i);
    for (int h = 0; h < H; ++h) means.row(h) /= double(fit.sliced.counts[h]);

    fit.omega = fit.sliced.proportions;
    fit.component_means = means;
    fit.component_slice.resize(H);
    for (int h = 0; h < H; ++h) fit.component_slice[h] = h;
    fit.component_labels = (fit.sliced.labels.array() - 1).matrix();
    fit.grand_mean = column_means(X);
    const Matrix centered = means.rowwise() - fit.grand_mean.transpose();
    fit.kernel = centered.transpose() * fit.omega.asDiagonal() * centered;
    fit.kernel = (fit.kernel + fit.kernel.transpose()) / 2.0;
    fit.d_max = static_cast<int>(std::min<Eigen::Index>(p, H - 1));
    decompose_kernel(fit, opts.eig_floor);
    return fit;
}

MsirFit fit_save(const Matrix& X, const Vector& y, const MsirOptions& opts) {
    check_inputs(X, y, "fit_save");
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    MsirFit fit;
    fit.method = "save";
    fit.n = static_cast<long>(n);
    fit.sliced = slice_for_fit(y, static_cast<long>(p), opts.slices, opts.discrete);
    fit.warnings = fit.sliced.warnings;
    fit.sigma = sample_covariance(X);
    fit.grand_mean = column_means(X);
    const Matrix root = inv_sqrt(fit.sigma, opts.eig_floor);
    const Matrix Z = (X.rowwise() - fit.grand_mean.transpose()) * root;

    const int H = fit.sliced.H;
    std::vector<std::vector<Eigen::Index>> members(H);
    for (Eigen::Index i = 0; i < n; ++i) members[fit.sliced.labels[i] - 1].push_back(i);
    std::vector<Matrix> within(H);
    for (int h = 0; h < H; ++h) {
        if (members[h].size() < 2) throw DataError("fit_save: slice " + std::to_string(h + 1) + " has fewer than 2 observations");
        Matrix Zh(static_cast<Eigen::Index>(members[h].size()), p);
        for (std::size_t r = 0; r < members[h].size(); ++r) Zh.row(static_cast<Eigen::Index>(r)) = Z.row(members[h][r]);
        within[h] = sample_covariance(Zh);
    }
    fit.kernel = save_kernel(within, fit.sliced.proportions);

    Eigen::SelfAdjointEigenSolver<Matrix> es(fit.kernel);
    if (es.info() != Eigen::Success) throw NumericalError("fit_save: eigendecomposition failed");
    finish_standardized(fit, root, es.eigenvalues(), es.eigenvectors(), descending(es.eigenvalues()));
    return fit;
}

Matrix save_kernel(std::span<const Matrix> within_cov, const Vector& proportions) {
    if (within_cov.empty() || static_cast<Eigen::Index>(within_cov.size()) != proportions.size())
        throw std::invalid_argument("save_kernel: one covariance per slice required");
    const Eigen::Index p = within_cov.front().rows();
    Matrix kernel = Matrix::Zero(p, p);
    for (std::size_t h = 0; h < within_cov.size(); ++h) {
        const Matrix D = Matrix::Identity(p, p) - within_cov[h];
        kernel += proportions[static_cast<Eigen::Index>(h)] * (D * D);
    }
    return (kernel + kernel.transpose()) / 2.0;
}

MsirFit fit_phd(const Matrix& X, const Vector& y, PhdVariant variant, double eig_floor) {
    if (y.size() != X.rows()) throw DataError("fit_phd: response length does not match the predictor rows");
    if (X.rows() < X.cols() + 2) throw DataError("fit_phd: need n >= p + 2");
    if (!X.allFinite() || !y.allFinite()) throw DataError("fit_phd: non-finite input");
    const Eigen::Index n = X.rows();

    MsirFit fit;
    fit.method = "phd";
    fit.n = static_cast<long>(n);
    fit.sigma = sample_covariance(X);
    fit.grand_mean = column_means(X);
    const Matrix root = inv_sqrt(fit.sigma, eig_floor);
    const Matrix Z = (X.rowwise() - fit.grand_mean.transpose()) * root;

    Vector r = Vector::Zero(n);
    if (y.maxCoeff() != y.minCoeff()) {
        r = y.array() - y.mean();
        if (variant == PhdVariant::Residual) {
            const Vector coef = Z.colPivHouseholderQr().solve(r);
            r -= Z * coef;
        }
    }
    Matrix kernel = (Z.transpose() * r.asDiagonal() * Z) / double(n);
    fit.kernel = (kernel + kernel.transpose()) / 2.0;

    Eigen::SelfAdjointEigenSolver<Matrix> es(fit.kernel);
    if (es.info() != Eigen::Success) throw NumericalError("fit_phd: eigendecomposition failed");
    finish_standardized(fit, root, es.eigenvalues(), es.eigenvectors(), descending(es.eigenvalues().cwiseAbs()));
    return fit;
}

}  // namespace msir
