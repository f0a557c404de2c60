#pragma once

// Moment-based comparison estimators. All return an MsirFit with no slice
// mixtures so they share the projection and benchmarking code paths.

#include "msir/msir.hpp"

#include <span>

namespace msir {

/// Sliced inverse regression: slice-mean kernel against the marginal covariance.
MsirFit fit_sir(const Matrix& X, const Vector& y, const MsirOptions& opts = {});

/// Sliced average variance estimation on standardized predictors:
/// kernel sum_h tau_h (I - Var(Z | slice h))^2.
MsirFit fit_save(const Matrix& X, const Vector& y, const MsirOptions& opts = {});

/// sum_h tau_h (I - V_h)^2 for standardized within-slice covariances V_h.
Matrix save_kernel(std::span<const Matrix> within_cov, const Vector& proportions);

enum class PhdVariant { Response, Residual };

/// Principal Hessian directions: n^-1 sum (r_i)(z_i z_i^T) on standardized
/// predictors with r = y - mean(y) (or OLS residuals), ordered by |eigenvalue|.
MsirFit fit_phd(const Matrix& X, const Vector& y, PhdVariant variant = PhdVariant::Response,
                double eig_floor = 1e-8);

}  // namespace msir
