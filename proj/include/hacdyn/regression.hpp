#pragma once

#include "hacdyn/sample.hpp"

namespace hacdyn {

struct RegressionFit {
  Vector beta_hat;
  Vector residuals;
  Matrix q_hat;             // (1/n) Z'Z
  double sigma2_hat = 0.0;  // sse / (n - m)
  double sse = 0.0;
  Eigen::Index n_obs = 0;

  Eigen::Index coefficients() const { return beta_hat.size(); }
};

/// Least squares of `response` on the columns of `design` through a
/// Householder QR factorization. No intercept is added.
///
/// Throws DimensionMismatch when row counts differ or n <= m, and
/// RankDeficient when the smallest singular value of the design is at most
/// 1e-10 times the largest.
RegressionFit ols_fit(const Matrix& design, const Vector& response);

/// Classical t statistic (beta_j - null) / sqrt(sigma2 [Q^-1]_jj / n).
/// Defined as 0 when numerator and standard error are both zero.
double ols_t_stat(const RegressionFit& fit, Eigen::Index coef_index, double null_value);

/// sigma2 [Q^-1]_jj / n, the squared classical standard error.
double ols_variance(const RegressionFit& fit, Eigen::Index coef_index);

// Inverse of q_hat via Cholesky; throws SingularQ when it is not positive
// definite.
Matrix invert_moment_matrix(const Matrix& q_hat);

}  // namespace hacdyn
