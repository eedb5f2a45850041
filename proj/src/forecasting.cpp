#include "hacdyn/forecasting.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "hacdyn/error.hpp"
#include "hacdyn/parallel.hpp"

namespace hacdyn {

double analytic_re_pred(double rho) {
  if (!(std::abs(rho) < 1.0)) throw Error(ErrorCode::ExplosiveSpec, "|rho| must be < 1");
  return 0.5 + 0.5 / (1.0 - rho * rho);
}

double ar1_coefficient(const Vector& series) {
  const Eigen::Index n = series.size();
  if (n < 3) throw Error(ErrorCode::InsufficientData, "AR(1) fit needs at least 3 observations");
  const RegressionFit fit = ols_fit(series.head(n - 1), series.tail(n - 1));
  return fit.beta_hat(0);
}

ForecastPair forecast_pair(const Sample& sample, Eigen::Index T, Criterion criterion, int p_max) {
  if (sample.size() < T + 1) {
    throw Error(ErrorCode::InsufficientHistory, "forecast evaluation needs T + 1 observations");
  }
  if (sample.regressors() != 1) throw Error(ErrorCode::InvalidArgument, "forecasting supports one regressor");
  Sample est;
  est.y = sample.y.head(T);
  est.x = sample.x.topRows(T);
  est.meta = sample.meta;

  const Vector xs = est.x.col(0);
  const double x_hat = ar1_coefficient(xs) * xs(T - 1);

  const RegressionFit ols = ols_fit(est.x, est.y);
  const int pm = p_max >= 0 ? p_max : default_max_order(T);
  const DynRegFit dyn = select_order(est, pm, criterion);

  ForecastPair out;
  out.suboptimal = ols.beta_hat(0) * x_hat;
  out.optimal = dynreg_forecast(dyn, std::span<const double>(est.y.data(), static_cast<std::size_t>(T)),
                                std::span<const double>(xs.data(), static_cast<std::size_t>(T)), x_hat);
  out.realized = sample.y(T);
  return out;
}

MspeResult mspe_experiment(const DgpSpec& spec, int T, int reps, Criterion criterion, std::uint64_t seed,
                           int threads, int p_max) {
  if (reps < 100) throw Error(ErrorCode::InvalidArgument, "mspe_experiment needs reps >= 100");
  DgpSpec s = spec;
  s.T = T;
  validate(s);

  std::vector<std::optional<ForecastPair>> pairs(static_cast<std::size_t>(reps));
  parallel_for(pairs.size(), threads, [&](std::size_t r) {
    try {
      const Sample sample = simulate(s, StreamKey{seed, r}, 1);
      pairs[r] = forecast_pair(sample, T, criterion, p_max);
    } catch (const Error&) {
      pairs[r].reset();
    }
  });

  std::vector<double> e_sub, e_opt, sq_sub, sq_opt;
  for (const auto& p : pairs) {
    if (!p) continue;
    const double es = p->realized - p->suboptimal;
    const double eo = p->realized - p->optimal;
    e_sub.push_back(es);
    e_opt.push_back(eo);
    sq_sub.push_back(es * es);
    sq_opt.push_back(eo * eo);
  }
  MspeResult out;
  out.reps_used = static_cast<int>(e_sub.size());
  out.reps_failed = reps - out.reps_used;
  if (out.reps_used < 2) throw Error(ErrorCode::InsufficientData, "fewer than two forecast replications succeeded");

  const double n = static_cast<double>(out.reps_used);
  out.mspe_subopt = pairwise_sum(sq_sub) / n;
  out.mspe_opt = pairwise_sum(sq_opt) / n;
  out.re_pred_hat = out.mspe_subopt / out.mspe_opt;
  out.mean_error_subopt = pairwise_sum(e_sub) / n;
  out.mean_error_opt = pairwise_sum(e_opt) / n;

  std::vector<double> dev_sub(e_sub.size()), dev_opt(e_sub.size()), da(e_sub.size()), db(e_sub.size()),
      dab(e_sub.size());
  for (std::size_t i = 0; i < e_sub.size(); ++i) {
    dev_sub[i] = (e_sub[i] - out.mean_error_subopt) * (e_sub[i] - out.mean_error_subopt);
    dev_opt[i] = (e_opt[i] - out.mean_error_opt) * (e_opt[i] - out.mean_error_opt);
    const double a = sq_sub[i] - out.mspe_subopt;
    const double b = sq_opt[i] - out.mspe_opt;
    da[i] = a * a;
    db[i] = b * b;
    dab[i] = a * b;
  }
  out.se_error_subopt = std::sqrt(pairwise_sum(dev_sub) / (n - 1.0) / n);
  out.se_error_opt = std::sqrt(pairwise_sum(dev_opt) / (n - 1.0) / n);

  // Var(A/B) ~ (var a - 2R cov(a,b) + R^2 var b) / (n B^2).
  const double r = out.re_pred_hat;
  const double va = pairwise_sum(da) / (n - 1.0);
  const double vb = pairwise_sum(db) / (n - 1.0);
  const double cab = pairwise_sum(dab) / (n - 1.0);
  const double v = (va - 2.0 * r * cab + r * r * vb) / (n * out.mspe_opt * out.mspe_opt);
  out.re_pred_se = std::sqrt(std::max(v, 0.0));
  return out;
}

}  // namespace hacdyn
