#pragma once

// Model-based sliced inverse regression: per-slice Gaussian mixtures, the
// between-component kernel, and its generalized eigendecomposition against
// the marginal predictor covariance.

#include "msir/common.hpp"
#include "msir/gmm.hpp"
#include "msir/slicing.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace msir {

struct MsirOptions {
    std::optional<int> slices;  // nullopt: default_num_slices(n, p)
    DiscreteMode discrete = DiscreteMode::Auto;
    GmmOptions gmm;
    std::uint64_t seed = 0;
    double eig_floor = 1e-8;
};

struct MsirFit {
    std::string method = "msir";
    Matrix kernel;
    Matrix sigma;
    Vector grand_mean;
    Vector omega;              // one weight per (slice, component), slice-major
    Matrix component_means;    // one row per (slice, component)
    IndexVector component_slice;
    Vector eigenvalues;        // first d_max, descending
    Matrix raw_dirs;           // p x d_max, sigma-orthonormal
    Matrix basis;              // p x d_max, unit-norm columns
    Vector all_eigenvalues;    // full generalized spectrum (length p)
    Matrix all_dirs;           // p x p, sigma-orthonormal
    std::vector<SliceMixture> slice_mixtures;
    SlicedResponse sliced;
    IndexVector component_labels;  // global MAP component of each observation (0-based)
    int d_max = 0;
    long n = 0;
    std::vector<std::string> warnings;

    long p() const { return static_cast<long>(sigma.rows()); }
    int total_components() const { return static_cast<int>(omega.size()); }

    /// First d generalized eigenvectors scaled to unit norm; d may exceed
    /// d_max (null-space directions are then included).
    Matrix leading_basis(int d) const;
};

struct KernelMatrix {
    Matrix M;
    Vector omega;
    Vector mean;
    Matrix component_means;
    IndexVector component_slice;
};

/// M = sum_hk omega_hk (mu_hk - mu)(mu_hk - mu)^T with omega_hk = tau_h pi_hk and
/// mu = sum_hk omega_hk mu_hk.
KernelMatrix kernel_matrix(std::span<const SliceMixture> mixtures, const Vector& proportions);

/// Fills eigenvalues / directions of `fit` from its kernel and sigma, truncated
/// to fit.d_max. Negative eigenvalues from rounding are clamped at zero.
void decompose_kernel(MsirFit& fit, double floor = 1e-8);

MsirFit fit_msir(const Matrix& X, const Vector& y, const MsirOptions& opts = {});
MsirFit fit_msir(const Dataset& data, const MsirOptions& opts = {});

/// Z = (X - grand_mean) [beta_1 .. beta_d].
Matrix project(const MsirFit& fit, const Matrix& X, int d);

/// sum_hk omega_hk (v^T (mu_hk - mu))^2: the variance of the component means along v.
double between_mean_variance(const MsirFit& fit, const Vector& v);

/// max_j |lambda_j - between_mean_variance(v_j)| over the retained directions.
double eigenvalue_identity_error(const MsirFit& fit);

}  // namespace msir
