#include "hacdyn/regression.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hacdyn/error.hpp"

namespace hacdyn {

Sample make_sample(Vector y, Matrix x, Vector u) {
  if (y.size() != x.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "y has " + std::to_string(y.size()) + " rows, x has " + std::to_string(x.rows()));
  }
  if (u.size() != 0 && u.size() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "u length differs from y");
  }
  if (y.size() < 2) {
    throw Error(ErrorCode::InsufficientData, "a sample needs at least 2 observations");
  }
  if (x.cols() < 1) {
    throw Error(ErrorCode::InvalidArgument, "a sample needs at least one regressor");
  }
  if (!y.allFinite() || !x.allFinite() || !u.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "sample contains non-finite values");
  }
  Sample s;
  s.y = std::move(y);
  s.x = std::move(x);
  s.u = std::move(u);
  return s;
}

RegressionFit ols_fit(const Matrix& design, const Vector& response) {
  const Eigen::Index n = design.rows();
  const Eigen::Index m = design.cols();
  if (response.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "design has " + std::to_string(n) +
                                                  " rows, response has " +
                                                  std::to_string(response.size()));
  }
  if (m < 1 || n <= m) {
    throw Error(ErrorCode::DimensionMismatch,
                "need more rows than columns (n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");
  }

  Eigen::HouseholderQR<Matrix> qr(design);
  const Matrix r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();

  // Singular values of R equal those of the design.
  double smax = 0.0;
  double smin = 0.0;
  if (m == 1) {
    smax = smin = std::abs(r(0, 0));
  } else {
    Eigen::JacobiSVD<Matrix> svd(r);
    const auto& sv = svd.singularValues();
    smax = sv(0);
    smin = sv(m - 1);
  }
  if (!(smax > 0.0) || !(smin > 1e-10 * smax)) {
    throw Error(ErrorCode::RankDeficient, "design does not have full column rank");
  }

  RegressionFit fit;
  fit.beta_hat = qr.solve(response);
  // One step of iterative refinement; an exact relationship then comes out
  // with zero residuals instead of round-off.
  fit.beta_hat += qr.solve(Vector(response - design * fit.beta_hat));
  fit.residuals = response - design * fit.beta_hat;
  fit.sse = fit.residuals.squaredNorm();
  fit.n_obs = n;
  fit.sigma2_hat = fit.sse / static_cast<double>(n - m);
  Matrix q = design.transpose() * design / static_cast<double>(n);
  fit.q_hat = 0.5 * (q + q.transpose());
  return fit;
}

Matrix invert_moment_matrix(const Matrix& q_hat) {
  Eigen::LLT<Matrix> llt(q_hat);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularQ, "moment matrix is not positive definite");
  }
  return llt.solve(Matrix::Identity(q_hat.rows(), q_hat.cols()));
}

double ols_variance(const RegressionFit& fit, Eigen::Index coef_index) {
  if (coef_index < 0 || coef_index >= fit.coefficients()) {
    throw Error(ErrorCode::InvalidArgument, "coefficient index out of range");
  }
  const Matrix q_inv = invert_moment_matrix(fit.q_hat);
  return fit.sigma2_hat * q_inv(coef_index, coef_index) / static_cast<double>(fit.n_obs);
}

double ols_t_stat(const RegressionFit& fit, Eigen::Index coef_index, double null_value) {
  const double var = ols_variance(fit, coef_index);
  const double num = fit.beta_hat(coef_index) - null_value;
  if (var <= 0.0) {
    if (num == 0.0) return 0.0;
    return std::copysign(std::numeric_limits<double>::infinity(), num);
  }
  return num / std::sqrt(var);
}

}  // namespace hacdyn
