#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hacdyn/regression.hpp"

namespace hacdyn {

// Truncation rules for the long-run variance of x_t u_t.
enum class BandwidthRule {
  NW,       // floor(4 (T/100)^{2/9}) + 1
  NW_A,     // floor(0.75 T^{1/3}) + 1
  NW_LLSW,  // floor(1.3 T^{1/2}) + 1
  NW_KV,    // T
  M_LLSW,   // cosine count floor(c T^{2/3}), c = 0.41 by default
};

inline constexpr double kDefaultMllswCoefficient = 0.41;

const char* to_string(BandwidthRule rule);
BandwidthRule parse_bandwidth_rule(const std::string& text);
bool is_newey_west(BandwidthRule rule);

int bandwidth(BandwidthRule rule, int T, double m_llsw_coefficient = kDefaultMllswCoefficient);

struct LrvEstimate {
  Matrix omega_hat;
  BandwidthRule method = BandwidthRule::NW;
  int bandwidth_used = 0;
  std::optional<int> dof_for_test;  // set to nu for the cosine estimator
};

struct TestResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  bool reject = false;
  std::string method;
  double nominal_level = 0.05;
};

/// Bartlett lag-window estimate
///   Gamma_0 + sum_{tau=1}^{h} (1 - tau/(h+1)) (Gamma_tau + Gamma_tau'),
///   Gamma_tau = (1/T) sum_t u_t x_t x_{t-tau}' u_{t-tau}.
/// `x` is the T x k design the fit was computed on.
LrvEstimate bartlett_lrv(const RegressionFit& fit, const Matrix& x, int h,
                         BandwidthRule tag = BandwidthRule::NW);

/// Equally weighted average of nu outer products of type-II cosine
/// projections of x_t u_t.
LrvEstimate cosine_lrv(const RegressionFit& fit, const Matrix& x, int nu);

/// Convenience: apply `rule` at the fit's sample size.
LrvEstimate estimate_lrv(const RegressionFit& fit, const Matrix& x, BandwidthRule rule,
                         double m_llsw_coefficient = kDefaultMllswCoefficient);

/// Two-sided level-`level` quantile of |W(1)| / sqrt(2 int_0^1 B(r)^2 dr),
/// B the Brownian bridge, simulated on `grid_points` steps with `draws`
/// draws. Deterministic in (level, grid_points, draws, seed).
double fixed_b_critical_value(double level, int grid_points, int draws, std::uint64_t seed);

// Defaults used when hac_t_test needs a fixed-b constant; the value for each
// level is simulated once per process and cached.
inline constexpr int kFixedBGridPoints = 1000;
inline constexpr int kFixedBDraws = 500000;
inline constexpr std::uint64_t kFixedBSeed = 20020101;
double default_fixed_b_critical_value(double level);

double normal_critical_value(double level);
double student_t_critical_value(double level, double dof);

/// Two-sided critical value for the rule: normal for NW/NW-A/NW-LLSW,
/// Student-t(nu) for the cosine estimator, simulated fixed-b for NW-KV.
double hac_critical_value(const LrvEstimate& lrv, double level);

/// [Q^-1 Omega Q^-1]_jj / T, the squared HAC standard error.
/// Throws NonPsdLrv when negative.
double hac_variance(const RegressionFit& fit, const LrvEstimate& lrv, Eigen::Index coef_index);

/// t test of H0: beta_j = null using M = Q^-1 Omega Q^-1.
TestResult hac_t_test(const RegressionFit& fit, const LrvEstimate& lrv, Eigen::Index coef_index,
                      double null_value, double level);
// Same, with the critical value supplied by the caller.
TestResult hac_t_test(const RegressionFit& fit, const LrvEstimate& lrv, Eigen::Index coef_index,
                      double null_value, double level, double critical_value);

/// Classical OLS t test against a standard normal critical value.
TestResult ols_t_test(const RegressionFit& fit, Eigen::Index coef_index, double null_value,
                      double level);

}  // namespace hacdyn
