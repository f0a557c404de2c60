#pragma once

// Structural-dimension inference: sequential permutation test on the tail
// eigenvalue statistic, and the BIC-type spectral criterion.

#include "msir/msir.hpp"

#include <functional>
#include <optional>
#include <string>

namespace msir {

enum class BicPenalty { ZhuMiaoPeng, ZhuZhu };

std::string to_string(BicPenalty penalty);
BicPenalty parse_penalty(const std::string& name);

struct DimensionOptions {
    int permutations = 199;
    double alpha = 0.05;
    BicPenalty penalty = BicPenalty::ZhuZhu;
    std::uint64_t seed = 0;
    /// Stop the sequential test after this d (nullopt: up to p - 1).
    std::optional<int> max_d;
};

struct DimensionReport {
    long n = 0;
    int p = 0;
    int H = 0;
    Vector eigenvalues;   // length p, zero beyond d_max
    Vector lambda_stats;  // d = 0..p-1
    Vector p_values;      // d = 0..p-1, NaN where not tested
    Vector G;             // d = 0..p-1
    Vector theta;         // eigenvalues + 1
    int tau_count = 0;
    BicPenalty penalty = BicPenalty::ZhuZhu;
    double alpha = 0.05;
    int n_perms = 0;
    std::optional<int> d_hat_perm;
    std::optional<int> d_hat_bic;
    std::vector<std::string> warnings;
};

using Estimator = std::function<MsirFit(const Matrix&, const Vector&)>;

/// Eigenvalues padded with zeros to length p.
Vector padded_eigenvalues(const MsirFit& fit);

/// n * sum_{j > d} lambda_j.
double lambda_stat(const MsirFit& fit, int d);

/// G(d) for d = 0..p-1 from a full eigenvalue vector.
Vector bic_criterion(const Vector& eigenvalues, long n, int H, BicPenalty penalty);

/// BIC-type choice of d (fills G, theta, tau_count, d_hat_bic, lambda_stats).
DimensionReport bic_dimension(const MsirFit& fit, BicPenalty penalty = BicPenalty::ZhuZhu);

/// Sequential permutation test. For each d the trailing projected predictors
/// are permuted against (y, leading projections) and `estimator` is re-run;
/// p-value = (1 + #{stat* >= stat}) / (R + 1).
DimensionReport permutation_test(const Matrix& X, const Vector& y, const Estimator& estimator,
                                 const DimensionOptions& opts);

/// Permutation test with the MSIR estimator.
DimensionReport permutation_test(const Matrix& X, const Vector& y, const MsirOptions& fit_opts,
                                 const DimensionOptions& opts);

/// Asymptotic chi-square p-values ((p-d)(H-d-1) df) for a SIR fit.
Vector sir_chi_square_pvalues(const MsirFit& sir_fit);

/// Plain-text summary table (eigenvalues, d, G(d), statistic, p-value).
std::string format_report(const DimensionReport& report);

}  // namespace msir
