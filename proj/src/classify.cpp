#include "msir/classify.hpp"

#include <cmath>

namespace msir {

namespace {

Eigen::Index first_argmax(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < row.size(); ++k)
        if (row[k] > row[best]) best = k;
    return best;
}

void project_mixtures(ReducedClassifier& clf) {
    clf.projected.clear();
    for (const auto& mix : clf.class_mixtures) {
        std::vector<GaussianComponent> comps;
        for (const auto& c : mix.components) {
            GaussianComponent g;
            g.weight = c.weight;
            g.mean = clf.basis.transpose() * (c.mean - clf.grand_mean);
            g.covariance = clf.basis.transpose() * c.covariance * clf.basis;
            g.covariance = (g.covariance + g.covariance.transpose()) / 2.0;
            comps.push_back(std::move(g));
        }
        clf.projected.push_back(std::move(comps));
    }
}

Matrix class_log_joint(const ReducedClassifier& clf, const Matrix& X) {
    if (X.cols() != clf.basis.rows()) throw DataError("classifier: column count does not match the training data");
    if (!X.allFinite()) throw DataError("classifier: non-finite input");
    const Matrix Z = (X.rowwise() - clf.grand_mean.transpose()) * clf.basis;
    Matrix out(X.rows(), static_cast<Eigen::Index>(clf.projected.size()));
    for (std::size_t h = 0; h < clf.projected.size(); ++h) {
        const Vector lf = log_sum_exp_rows(component_log_densities(Z, clf.projected[h]));
        out.col(static_cast<Eigen::Index>(h)) = lf.array() + std::log(clf.priors[static_cast<Eigen::Index>(h)]);
    }
    return out;
}

}  // namespace

ReducedClassifier classifier_from_fit(const MsirFit& fit, int d) {
    if (fit.sliced.kind != ResponseKind::Discrete) throw DataError("classifier: fit was not sliced by class label");
    if (fit.sliced.H < 2) throw DataError("classifier: need at least two classes");
    if (d < 1 || d > fit.d_max)
        throw std::invalid_argument("classifier: d must lie in 1.." + std::to_string(fit.d_max));
    ReducedClassifier clf;
    clf.classes = fit.sliced.values;
    clf.priors = fit.sliced.proportions;
    clf.class_mixtures = fit.slice_mixtures;
    clf.basis = fit.basis.leftCols(d);
    clf.d = d;
    clf.grand_mean = fit.grand_mean;
    project_mixtures(clf);
    return clf;
}

ReducedClassifier train_classifier(const Matrix& X, const Vector& labels, int d, const MsirOptions& opts) {
    MsirOptions o = opts;
    o.discrete = DiscreteMode::Discrete;
    if (distinct_count(labels) < 2) throw DataError("classifier: need at least two classes");
    return classifier_from_fit(fit_msir(X, labels, o), d);
}

ReducedClassifier with_basis(const ReducedClassifier& clf, const Matrix& basis) {
    if (basis.rows() != clf.basis.rows()) throw std::invalid_argument("with_basis: dimension mismatch");
    ReducedClassifier out = clf;
    out.basis = basis;
    out.d = static_cast<int>(basis.cols());
    project_mixtures(out);
    return out;
}

Matrix posteriors(const ReducedClassifier& clf, const Matrix& X) {
    const Matrix lj = class_log_joint(clf, X);
    const Vector lse = log_sum_exp_rows(lj);
    return (lj.colwise() - lse).array().exp();
}

Vector posterior(const ReducedClassifier& clf, const Vector& x) {
    const Matrix row = x.transpose();
    return posteriors(clf, row).row(0).transpose();
}

IndexVector predict(const ReducedClassifier& clf, const Matrix& X) {
    const Matrix post = posteriors(clf, X);
    IndexVector out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) out[i] = static_cast<int>(first_argmax(post.row(i)));
    return out;
}

Vector predict_labels(const ReducedClassifier& clf, const Matrix& X) {
    const IndexVector idx = predict(clf, X);
    Vector out(idx.size());
    for (Eigen::Index i = 0; i < idx.size(); ++i) out[i] = clf.classes[idx[i]];
    return out;
}

double error_rate(const Vector& predicted, const Vector& truth) {
    if (predicted.size() != truth.size() || truth.size() == 0)
        throw std::invalid_argument("error_rate: size mismatch");
    return double((predicted.array() != truth.array()).count()) / double(truth.size());
}

LdaClassifier train_lda(const Matrix& X, const Vector& labels) {
    if (labels.size() != X.rows()) throw DataError("lda: label count does not match the rows");
    const SlicedResponse s = slice_response(labels, 1, ResponseKind::Discrete);
    if (s.H < 2) throw DataError("lda: need at least two classes");
    const Eigen::Index p = X.cols();
    LdaClassifier lda;
    lda.classes = s.values;
    lda.priors = s.proportions;
    lda.means = Matrix::Zero(s.H, p);
    for (Eigen::Index i = 0; i < X.rows(); ++i) lda.means.row(s.labels[i] - 1) += X.row(i);
    for (int h = 0; h < s.H; ++h) lda.means.row(h) /= double(s.counts[h]);
    Matrix W = Matrix::Zero(p, p);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const Vector dvec = X.row(i) - lda.means.row(s.labels[i] - 1);
        W += dvec * dvec.transpose();
    }
    const Eigen::Index dof = std::max<Eigen::Index>(1, X.rows() - s.H);
    lda.pooled_cov = W / double(dof);
    return lda;
}

Vector predict_labels(const LdaClassifier& lda, const Matrix& X) {
    if (X.cols() != lda.means.cols()) throw DataError("lda: column count does not match the training data");
    Eigen::LDLT<Matrix> ldlt(lda.pooled_cov);
    const Matrix A = ldlt.solve(lda.means.transpose());  // p x H
    Matrix score = X * A;
    for (Eigen::Index h = 0; h < A.cols(); ++h)
        score.col(h).array() += std::log(lda.priors[h]) - 0.5 * lda.means.row(h).dot(A.col(h));
    Vector out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) out[i] = lda.classes[first_argmax(score.row(i))];
    return out;
}

}  // namespace msir
