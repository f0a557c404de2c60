#pragma once

// MAP classification in the reduced subspace: class-conditional mixtures from
// the MSIR fit, projected analytically onto the leading d directions.

#include "msir/msir.hpp"

#include <string>
#include <vector>

namespace msir {

struct ReducedClassifier {
    Vector classes;  // response value of each class, ascending
    Vector priors;
    std::vector<SliceMixture> class_mixtures;  // in predictor space
    Matrix basis;                              // p x d
    int d = 0;
    Vector grand_mean;
    std::vector<std::vector<GaussianComponent>> projected;  // per class, d-dimensional
};

/// Fits MSIR with one slice per class and keeps the first d directions.
ReducedClassifier train_classifier(const Matrix& X, const Vector& labels, int d, const MsirOptions& opts = {});

/// Builds the classifier from an existing fit whose slices are the classes.
ReducedClassifier classifier_from_fit(const MsirFit& fit, int d);

/// Same class mixtures with the basis replaced (e.g. rotated within its span).
ReducedClassifier with_basis(const ReducedClassifier& clf, const Matrix& basis);

/// Posterior class probabilities at one point.
Vector posterior(const ReducedClassifier& clf, const Vector& x);

/// Row i holds the posterior of X.row(i).
Matrix posteriors(const ReducedClassifier& clf, const Matrix& X);

/// Index of the MAP class for each row; ties go to the smallest label.
IndexVector predict(const ReducedClassifier& clf, const Matrix& X);

/// Predicted response values (class labels).
Vector predict_labels(const ReducedClassifier& clf, const Matrix& X);

double error_rate(const Vector& predicted, const Vector& truth);

/// Linear discriminant analysis with pooled covariance; comparison baseline.
struct LdaClassifier {
    Vector classes;
    Vector priors;
    Matrix means;  // one row per class
    Matrix pooled_cov;
};

LdaClassifier train_lda(const Matrix& X, const Vector& labels);
Vector predict_labels(const LdaClassifier& lda, const Matrix& X);

}  // namespace msir
