#include "msir/msir.hpp"

#include "msir/linalg.hpp"
#include "msir/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace msir {

Matrix MsirFit::leading_basis(int d) const {
    if (d < 1 || d > all_dirs.cols()) throw std::invalid_argument("leading_basis: d out of range");
    Matrix B = all_dirs.leftCols(d);
    B.colwise().normalize();
    return B;
}

KernelMatrix kernel_matrix(std::span<const SliceMixture> mixtures, const Vector& proportions) {
    if (mixtures.empty()) throw std::invalid_argument("kernel_matrix: no mixtures");
    if (static_cast<Eigen::Index>(mixtures.size()) != proportions.size())
        throw std::invalid_argument("kernel_matrix: one proportion per slice required");
    const Eigen::Index p = mixtures.front().components.front().mean.size();
    Eigen::Index K = 0;
    for (const auto& m : mixtures) K += m.K();

    KernelMatrix out;
    out.omega.resize(K);
    out.component_means.resize(K, p);
    out.component_slice.resize(K);
    Eigen::Index k = 0;
    for (std::size_t h = 0; h < mixtures.size(); ++h) {
        for (const auto& c : mixtures[h].components) {
            if (c.mean.size() != p) throw std::invalid_argument("kernel_matrix: dimension mismatch");
            out.omega[k] = proportions[static_cast<Eigen::Index>(h)] * c.weight;
            out.component_means.row(k) = c.mean.transpose();
            out.component_slice[k] = static_cast<int>(h);
            ++k;
        }
    }
    out.mean = out.component_means.transpose() * out.omega;
    const Matrix centered = out.component_means.rowwise() - out.mean.transpose();
    out.M = centered.transpose() * out.omega.asDiagonal() * centered;
    out.M = (out.M + out.M.transpose()) / 2.0;
    return out;
}

void decompose_kernel(MsirFit& fit, double floor) {
    const auto eig = generalized_eigen(fit.kernel, fit.sigma, floor);
    fit.all_eigenvalues = eig.values;
    fit.all_dirs = eig.vectors;
    const int d = std::clamp(fit.d_max, 0, static_cast<int>(eig.values.size()));
    fit.d_max = d;
    fit.eigenvalues = eig.values.head(d);
    const double most_negative = fit.eigenvalues.size() ? fit.eigenvalues.minCoeff() : 0.0;
    if (most_negative < -1e-8)
        fit.warnings.push_back("msir: negative kernel eigenvalue " + std::to_string(most_negative) + " clamped at 0");
    fit.eigenvalues = fit.eigenvalues.cwiseMax(0.0);
    fit.raw_dirs = eig.vectors.leftCols(d);
    fit.basis = fit.raw_dirs;
    fit.basis.colwise().normalize();
}

MsirFit fit_msir(const Matrix& X, const Vector& y, const MsirOptions& opts) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (y.size() != n) throw DataError("fit_msir: response length does not match the predictor rows");
    if (n <= p) throw DataError("fit_msir: need more observations than predictors");
    if (!X.allFinite()) throw DataError("fit_msir: non-finite predictor value");

    MsirFit fit;
    fit.n = static_cast<long>(n);
    fit.sliced = slice_for_fit(y, static_cast<long>(p), opts.slices, opts.discrete);
    fit.warnings = fit.sliced.warnings;
    fit.sigma = sample_covariance(X);

    const int H = fit.sliced.H;
    std::vector<std::vector<Eigen::Index>> members(H);
    for (Eigen::Index i = 0; i < n; ++i) members[fit.sliced.labels[i] - 1].push_back(i);

    fit.slice_mixtures.resize(H);
    parallel_for(static_cast<std::size_t>(H), [&](std::size_t h) {
        const auto& rows = members[h];
        Matrix Xh(static_cast<Eigen::Index>(rows.size()), p);
        for (std::size_t r = 0; r < rows.size(); ++r) Xh.row(static_cast<Eigen::Index>(r)) = X.row(rows[r]);
        fit.slice_mixtures[h] = select_model(Xh, opts.gmm, mix_seed(opts.seed, h));
    });

    const auto km = kernel_matrix(fit.slice_mixtures, fit.sliced.proportions);
    fit.kernel = km.M;
    fit.omega = km.omega;
    fit.grand_mean = km.mean;
    fit.component_means = km.component_means;
    fit.component_slice = km.component_slice;

    std::vector<int> offset(H, 0);
    for (int h = 1; h < H; ++h) offset[h] = offset[h - 1] + fit.slice_mixtures[h - 1].K();
    fit.component_labels.resize(n);
    for (int h = 0; h < H; ++h) {
        const IndexVector local = fit.slice_mixtures[h].map_labels();
        for (std::size_t r = 0; r < members[h].size(); ++r)
            fit.component_labels[members[h][r]] = offset[h] + local[static_cast<Eigen::Index>(r)];
        for (const auto& w : fit.slice_mixtures[h].warnings)
            fit.warnings.push_back("slice " + std::to_string(h + 1) + ": " + w);
    }

    fit.d_max = static_cast<int>(std::min<Eigen::Index>(p, fit.total_components() - 1));
    decompose_kernel(fit, opts.eig_floor);
    return fit;
}

MsirFit fit_msir(const Dataset& data, const MsirOptions& opts) { return fit_msir(data.X, data.y, opts); }

Matrix project(const MsirFit& fit, const Matrix& X, int d) {
    if (d < 1 || d > fit.d_max) throw std::invalid_argument("project: d must lie in 1.." + std::to_string(fit.d_max));
    if (X.cols() != fit.basis.rows()) throw DataError("project: column count does not match the fit");
    return (X.rowwise() - fit.grand_mean.transpose()) * fit.basis.leftCols(d);
}

double between_mean_variance(const MsirFit& fit, const Vector& v) {
    const Vector proj = (fit.component_means.rowwise() - fit.grand_mean.transpose()) * v;
    return fit.omega.dot(proj.cwiseAbs2());
}

double eigenvalue_identity_error(const MsirFit& fit) {
    double worst = 0.0;
    for (int j = 0; j < fit.d_max; ++j)
        worst = std::max(worst, std::abs(fit.eigenvalues[j] - between_mean_variance(fit, fit.raw_dirs.col(j))));
    return worst;
}

}  // namespace msir
