#pragma once

#include <span>
#include <string>
#include <vector>

#include "hacdyn/hac.hpp"
#include "hacdyn/regression.hpp"

namespace hacdyn {

enum class Criterion { BIC, AIC, Fixed };

const char* to_string(Criterion c);
Criterion parse_criterion(const std::string& text);

// Coefficients are ordered (phi_1..phi_p, beta_1..beta_k,
// gamma_{1,1}..gamma_{k,1}, ..., gamma_{1,p}..gamma_{k,p}), i.e. the
// regressor vector z_t = (y_{t-1},..,y_{t-p}, x_t', x_{t-1}',.., x_{t-p}').
struct DynRegFit {
  int p = 0;
  Eigen::Index k = 1;
  Vector theta_hat;
  RegressionFit fit;
  Criterion criterion_used = Criterion::Fixed;
  Eigen::Index n_effective = 0;
  // 1-based index of the first response row used by the final fit.
  Eigen::Index first_row = 1;
  // Criterion value for each candidate order on the common sample (empty
  // for a fixed-order fit).
  std::vector<double> scores;

  Eigen::Index beta_index(Eigen::Index regressor = 0) const { return p + regressor; }
  double beta(Eigen::Index regressor = 0) const { return theta_hat(beta_index(regressor)); }
};

struct LaggedDesign {
  Matrix design;
  Vector response;
};

inline Eigen::Index dynreg_parameter_count(int p, Eigen::Index k) { return p + k + k * p; }

/// Rows t = start..T (1-based) of the lag-p regression.
/// Throws InsufficientData unless T - start + 1 > p + k + kp.
LaggedDesign build_lagged_design(const Sample& sample, int p, Eigen::Index start);

/// n log(sse) + penalty, with penalty log(n)(p+k+kp) for BIC and
/// 2(p+k+kp) for AIC. An exact fit (sse == 0) scores -infinity.
double ic_score(double sse, Eigen::Index n, int p, Eigen::Index k, Criterion criterion);
double ic_penalty(Eigen::Index n, int p, Eigen::Index k, Criterion criterion);

/// min(floor(T/5), 30).
int default_max_order(Eigen::Index T);

/// Fixed-order fit on rows t = p+1..T.
DynRegFit fit_dynreg(const Sample& sample, int p);

/// Residual sums of squares for every p in 0..p_max on the common rows
/// t = p_max+1..T, from one QR factorization of the nested design.
/// Entries are +infinity where the candidate design is rank deficient.
std::vector<double> candidate_sse(const Sample& sample, int p_max);

/// Scores every p in 0..p_max on the common sample, keeps the minimiser
/// (ties go to the smaller p) and refits it on rows p+1..T.
DynRegFit select_order(const Sample& sample, int p_max, Criterion criterion);

/// Classical t test on the contemporaneous coefficient of `regressor`.
/// Normal critical value unless `student_t` is set, in which case
/// Student-t(n_effective - m).
TestResult dynreg_t_test(const DynRegFit& fit, double null_value, double level,
                         bool student_t = false, Eigen::Index regressor = 0);

/// One-step forecast of y_{T+1}. Histories are ordered oldest first and end
/// at time T; `history_x` has one row per period and k columns.
double dynreg_forecast(const DynRegFit& fit, std::span<const double> history_y,
                       const Matrix& history_x, const Vector& x_next);
double dynreg_forecast(const DynRegFit& fit, std::span<const double> history_y,
                       std::span<const double> history_x, double x_next);

}  // namespace hacdyn
