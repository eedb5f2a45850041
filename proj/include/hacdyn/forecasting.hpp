#pragma once

#include <cstdint>

#include "hacdyn/dgp.hpp"
#include "hacdyn/dynreg.hpp"

namespace hacdyn {

struct ForecastPair {
  double optimal = 0.0;     // DynReg, exploits the serial correlation in u
  double suboptimal = 0.0;  // static OLS
  double realized = 0.0;
};

/// Known-parameter relative prediction efficiency 1/2 + 1/(2(1 - rho^2)).
double analytic_re_pred(double rho);

/// Least-squares AR(1) coefficient of a series without intercept.
double ar1_coefficient(const Vector& series);

/// Fits static OLS and DynReg on the first `T` rows of `sample` (which must
/// hold at least T + 1 rows), forecasts x_{T+1} by an AR(1) fitted to x, and
/// returns both one-step forecasts of y_{T+1} with its realized value.
ForecastPair forecast_pair(const Sample& sample, Eigen::Index T, Criterion criterion, int p_max = -1);

struct MspeResult {
  double mspe_subopt = 0.0;
  double mspe_opt = 0.0;
  double re_pred_hat = 0.0;
  double re_pred_se = 0.0;  // delta-method Monte Carlo standard error
  double mean_error_subopt = 0.0;
  double mean_error_opt = 0.0;
  double se_error_subopt = 0.0;
  double se_error_opt = 0.0;
  int reps_used = 0;
  int reps_failed = 0;
};

/// Monte Carlo one-step MSPE of the OLS and DynReg forecasts; replication r
/// uses stream (seed, r). Failed replications are skipped and counted.
MspeResult mspe_experiment(const DgpSpec& spec, int T, int reps, Criterion criterion, std::uint64_t seed,
                           int threads = 1, int p_max = -1);

}  // namespace hacdyn
