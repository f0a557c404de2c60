#pragma once

// Gaussian finite mixtures fitted by EM under parsimonious covariance
// structures, with (K, structure) chosen by BIC.

#include "msir/common.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace msir {

/// Covariance structure codes (volume / shape / orientation). FULL1 is the
/// unconstrained single Gaussian and only exists for K = 1.
enum class CovParam { EII, VII, EEI, VEI, VVI, EEE, VVV, FULL1 };

std::string to_string(CovParam param);
CovParam parse_cov_param(const std::string& code);
std::vector<CovParam> all_cov_params();

/// True for structures with diagonal (or spherical) covariances.
bool is_diagonal(CovParam param);

/// The code a structure collapses to when K = 1 (e.g. VVV -> FULL1, VII -> EII).
CovParam canonical_single(CovParam param);

/// Free covariance parameters for K components in p dimensions.
long covariance_param_count(CovParam param, long p, long K);

/// Weights + means + covariance parameters.
long mixture_param_count(CovParam param, long p, long K);

struct GaussianComponent {
    double weight = 1.0;
    Vector mean;
    Matrix covariance;
};

struct SliceMixture {
    std::vector<GaussianComponent> components;
    CovParam param = CovParam::EII;
    double loglik = 0.0;
    double bic = 0.0;
    long n = 0;
    long n_params = 0;
    int iterations = 0;
    bool converged = true;
    Matrix responsibilities;  // n x K, rows in input order
    std::vector<double> loglik_trace;
    std::vector<std::string> warnings;

    int K() const { return static_cast<int>(components.size()); }
    /// MAP component of every observation (0-based).
    IndexVector map_labels() const;
};

struct GmmOptions {
    std::vector<int> components = {1, 2, 3, 4, 5};
    std::vector<CovParam> params = all_cov_params();
    double tol = 1e-5;
    int max_iter = 500;
    int restarts = 5;
    int kmeans_iter = 20;
    /// Covariance eigenvalue floor, relative to the mean diagonal of the slice covariance.
    double var_floor = 1e-6;
};

/// 2 loglik - n_params log(n); larger is better.
double bic_score(double loglik, long n_params, long n);

/// EM for a fixed (K, structure), best of `opts.restarts` k-means++ starts.
/// Observation order does not affect the result.
SliceMixture em_fit(const Matrix& Xh, int K, CovParam param, const GmmOptions& opts, std::uint64_t seed);

/// Convenience overload with explicit convergence settings.
SliceMixture em_fit(const Matrix& Xh, int K, CovParam param, double tol, int max_iter, std::uint64_t seed);

/// Fits every feasible (K, structure) pair and keeps the highest BIC. Ties go
/// to the smaller K, then the simpler structure.
SliceMixture select_model(const Matrix& Xh, const GmmOptions& opts, std::uint64_t seed);

/// Whether (K, structure) has fewer free parameters than observations.
bool is_feasible(CovParam param, long p, long K, long n);

/// n x K matrix of log(pi_k phi(x_i; mu_k, Sigma_k)).
Matrix component_log_densities(const Matrix& X, std::span<const GaussianComponent> components);

/// log sum_k pi_k phi(x; mu_k, Sigma_k), evaluated stably.
double log_mixture_density(const Vector& x, std::span<const GaussianComponent> components);
double mixture_density(const Vector& x, std::span<const GaussianComponent> components);
double mixture_density(const Vector& x, const SliceMixture& mixture);

/// Row-wise log-sum-exp.
Vector log_sum_exp_rows(const Matrix& A);

}  // namespace msir
