#include "hacdyn/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "hacdyn/error.hpp"
#include "hacdyn/parallel.hpp"

namespace hacdyn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t method_slot(Method m) { return static_cast<std::size_t>(m); }

bool contains(const std::vector<Method>& methods, Method m) {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

DgpSpec spec_for(const ExperimentConfig& config, const CellKey& key) {
  DgpSpec spec;
  spec.kind = key.dgp;
  spec.rho = key.rho;
  spec.rho_x = config.rho_x;
  spec.beta = key.beta_true;
  spec.T = key.T;
  spec.var_matrix = config.var_matrix;
  return spec;
}

// Per-cell constants shared by every replication.
struct TestPlan {
  double level = 0.05;
  double null_value = 1.0;
  double cv_normal = 0.0;
  double cv_fixed_b = 0.0;
  double cv_cosine = 0.0;
  int h_nw = 0, h_nw_a = 0, h_nw_llsw = 0, h_nw_kv = 0, nu = 0;
};

TestPlan make_plan(const ExperimentConfig& config, int T) {
  TestPlan plan;
  plan.level = config.level;
  plan.null_value = config.null_value;
  plan.cv_normal = normal_critical_value(config.level);
  plan.h_nw = bandwidth(BandwidthRule::NW, T);
  plan.h_nw_a = bandwidth(BandwidthRule::NW_A, T);
  plan.h_nw_llsw = bandwidth(BandwidthRule::NW_LLSW, T);
  plan.h_nw_kv = bandwidth(BandwidthRule::NW_KV, T);
  plan.nu = bandwidth(BandwidthRule::M_LLSW, T, config.m_llsw_coefficient);
  if (contains(config.methods, Method::NW_KV)) plan.cv_fixed_b = default_fixed_b_critical_value(config.level);
  if (contains(config.methods, Method::M_LLSW)) plan.cv_cosine = student_t_critical_value(config.level, plan.nu);
  return plan;
}

bool hac_reject(const RegressionFit& fit, const Matrix& x, BandwidthRule rule, int h, double cv,
                const TestPlan& plan) {
  const LrvEstimate lrv = rule == BandwidthRule::M_LLSW ? cosine_lrv(fit, x, h) : bartlett_lrv(fit, x, h, rule);
  return hac_t_test(fit, lrv, 0, plan.null_value, plan.level, cv).reject;
}

double mean_of(const std::vector<double>& v) { return pairwise_sum(v) / static_cast<double>(v.size()); }

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::OLS: return "OLS";
    case Method::NW: return "NW";
    case Method::NW_A: return "NW-A";
    case Method::NW_LLSW: return "NW-LLSW";
    case Method::NW_KV: return "NW-KV";
    case Method::M_LLSW: return "M-LLSW";
    case Method::DynReg: return "DynReg";
  }
  return "?";
}

Method parse_method(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(c == '_' ? '-' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  for (Method m : all_methods()) {
    std::string name = to_string(m);
    for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (name == t) return m;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + text + "'");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::OLS,    Method::NW,     Method::NW_A,  Method::NW_LLSW,
                                           Method::NW_KV,  Method::M_LLSW, Method::DynReg};
  return methods;
}

std::vector<double> ExperimentConfig::default_beta_grid(bool symmetric) {
  std::vector<double> grid;
  for (int i = symmetric ? -20 : 0; i <= 20; ++i) grid.push_back(1.0 + 0.025 * i);
  return grid;
}

void ExperimentConfig::validate() const {
  if (reps < 100) throw Error(ErrorCode::InvalidArgument, "reps must be at least 100");
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidArgument, "level must lie in (0, 1)");
  if (threads < 1) throw Error(ErrorCode::InvalidArgument, "threads must be at least 1");
  if (rhos.empty() || Ts.empty()) throw Error(ErrorCode::InvalidArgument, "rho and T lists must be non-empty");
  for (double r : rhos) {
    if (!(std::abs(r) < 1.0)) throw Error(ErrorCode::ExplosiveSpec, "rho values must lie in (-1, 1)");
  }
  for (int t : Ts) {
    if (t < 10) throw Error(ErrorCode::InvalidArgument, "T values must be at least 10");
  }
}

ExperimentSummary::ExperimentSummary()
    : bias(kNaN), variance(kNaN), mse(kNaN), re_est(kNaN), rejection(kNaN), mc_se(kNaN), lag_median(kNaN),
      lag_mean(kNaN) {}

std::vector<ReplicationOutcome> run_replications(const ExperimentConfig& config, const CellKey& key,
                                                 bool with_tests) {
  const DgpSpec spec = spec_for(config, key);
  validate(spec);
  const TestPlan plan = make_plan(config, key.T);
  const int p_max = config.p_max >= 0 ? config.p_max : default_max_order(key.T);
  const auto& methods = config.methods;

  std::vector<ReplicationOutcome> out(static_cast<std::size_t>(config.reps));
  parallel_for(out.size(), config.threads, [&](std::size_t r) {
    ReplicationOutcome o;
    try {
      const Sample sample = simulate(spec, StreamKey{config.seed, r});
      const RegressionFit fit = ols_fit(sample.x, sample.y);
      const DynRegFit dyn = select_order(sample, p_max, config.criterion);
      o.beta_ols = fit.beta_hat(0);
      o.beta_dynreg = dyn.beta();
      o.lag = dyn.p;
      if (with_tests) {
        for (Method m : methods) {
          bool rej = false;
          switch (m) {
            case Method::OLS: rej = std::abs(ols_t_stat(fit, 0, plan.null_value)) > plan.cv_normal; break;
            case Method::NW: rej = hac_reject(fit, sample.x, BandwidthRule::NW, plan.h_nw, plan.cv_normal, plan); break;
            case Method::NW_A: rej = hac_reject(fit, sample.x, BandwidthRule::NW_A, plan.h_nw_a, plan.cv_normal, plan); break;
            case Method::NW_LLSW:
              rej = hac_reject(fit, sample.x, BandwidthRule::NW_LLSW, plan.h_nw_llsw, plan.cv_normal, plan);
              break;
            case Method::NW_KV:
              rej = hac_reject(fit, sample.x, BandwidthRule::NW_KV, plan.h_nw_kv, plan.cv_fixed_b, plan);
              break;
            case Method::M_LLSW: rej = hac_reject(fit, sample.x, BandwidthRule::M_LLSW, plan.nu, plan.cv_cosine, plan); break;
            case Method::DynReg:
              rej = dynreg_t_test(dyn, plan.null_value, plan.level, config.dynreg_student_t).reject;
              break;
          }
          o.reject[method_slot(m)] = rej;
        }
      }
      o.ok = true;
    } catch (const Error&) {
      o = ReplicationOutcome{};
    }
    out[r] = o;
  });
  return out;
}

std::vector<ExperimentSummary> summarize_estimation(const CellKey& key, const std::vector<ReplicationOutcome>& reps) {
  std::vector<double> e_ols, e_dyn, lags;
  for (const auto& r : reps) {
    if (!r.ok) continue;
    e_ols.push_back(r.beta_ols - key.beta_true);
    e_dyn.push_back(r.beta_dynreg - key.beta_true);
    lags.push_back(r.lag);
  }
  const int used = static_cast<int>(e_ols.size());
  const int failed = static_cast<int>(reps.size()) - used;

  auto row = [&](const char* method, const std::vector<double>& err) {
    ExperimentSummary s;
    s.dgp = key.dgp;
    s.criterion = key.criterion;
    s.rho = key.rho;
    s.T = key.T;
    s.beta_true = key.beta_true;
    s.method = method;
    s.reps_used = used;
    s.reps_failed = failed;
    if (used == 0) return s;
    s.bias = mean_of(err);
    std::vector<double> dev(err.size()), sq(err.size());
    for (std::size_t i = 0; i < err.size(); ++i) {
      dev[i] = (err[i] - s.bias) * (err[i] - s.bias);
      sq[i] = err[i] * err[i];
    }
    s.variance = mean_of(dev);
    s.mse = mean_of(sq);
    return s;
  };

  ExperimentSummary hac = row("HAC", e_ols);
  ExperimentSummary dyn = row("DynReg", e_dyn);
  if (used > 0) {
    hac.re_est = dyn.re_est = hac.mse / dyn.mse;
    std::vector<double> sorted = lags;
    const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>((sorted.size() - 1) / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    dyn.lag_median = *mid;
    dyn.lag_mean = mean_of(lags);
  }
  return {hac, dyn};
}

std::vector<ExperimentSummary> summarize_tests(const CellKey& key, const std::vector<Method>& methods,
                                               const std::vector<ReplicationOutcome>& reps) {
  int used = 0;
  std::array<int, kMethodCount> counts{};
  for (const auto& r : reps) {
    if (!r.ok) continue;
    ++used;
    for (std::size_t m = 0; m < kMethodCount; ++m) counts[m] += r.reject[m] ? 1 : 0;
  }
  std::vector<ExperimentSummary> rows;
  for (Method m : methods) {
    ExperimentSummary s;
    s.dgp = key.dgp;
    s.criterion = key.criterion;
    s.rho = key.rho;
    s.T = key.T;
    s.beta_true = key.beta_true;
    s.method = to_string(m);
    s.reps_used = used;
    s.reps_failed = static_cast<int>(reps.size()) - used;
    if (used > 0) {
      const double r = static_cast<double>(counts[method_slot(m)]) / used;
      s.rejection = r;
      s.mc_se = std::sqrt(r * (1.0 - r) / used);
    }
    rows.push_back(std::move(s));
  }
  return rows;
}

CellOutput run_cell(const ExperimentConfig& config, const CellKey& key, bool with_tests) {
  const auto reps = run_replications(config, key, with_tests);
  CellOutput out;
  out.key = key;
  out.estimation = summarize_estimation(key, reps);
  if (with_tests) out.tests = summarize_tests(key, config.methods, reps);
  out.reps_failed = out.estimation.front().reps_failed;
  return out;
}

namespace {

// Runs the cells in order, honouring skip/on_cell, and appends results.
template <typename Collect>
void drive(const ExperimentConfig& config, const std::vector<CellKey>& cells, bool with_tests,
           const CellHooks& hooks, Collect&& collect) {
  for (const CellKey& key : cells) {
    if (hooks.skip && hooks.skip(key)) continue;
    CellOutput out = run_cell(config, key, with_tests);
    collect(out);
    if (hooks.on_cell) hooks.on_cell(out);
  }
}

std::vector<CellKey> grid_cells(const ExperimentConfig& config, double beta_true = 1.0) {
  std::vector<CellKey> cells;
  for (int T : config.Ts) {
    for (double rho : config.rhos) cells.push_back(CellKey{config.dgp, config.criterion, rho, T, beta_true});
  }
  return cells;
}

}  // namespace

TableResult run_table(const ExperimentConfig& config, const CellHooks& hooks) {
  config.validate();
  TableResult result;
  const bool with_tests = !config.methods.empty();
  drive(config, grid_cells(config), with_tests, hooks, [&](CellOutput& out) {
    for (const auto& s : out.estimation) result.efficiency.push_back(s);
    for (const auto& s : out.tests) result.size.push_back(s);
  });
  return result;
}

std::vector<ExperimentSummary> run_efficiency(const ExperimentConfig& config, const CellHooks& hooks) {
  ExperimentConfig c = config;
  c.methods.clear();
  return run_table(c, hooks).efficiency;
}

std::vector<ExperimentSummary> run_size(const ExperimentConfig& config, const CellHooks& hooks) {
  return run_table(config, hooks).size;
}

std::vector<ExperimentSummary> run_power(const ExperimentConfig& config, const CellHooks& hooks) {
  config.validate();
  if (config.beta_grid.empty()) throw Error(ErrorCode::InvalidArgument, "power needs a non-empty beta grid");
  std::vector<CellKey> cells;
  for (int T : config.Ts) {
    for (double rho : config.rhos) {
      for (double b : config.beta_grid) cells.push_back(CellKey{config.dgp, config.criterion, rho, T, b});
    }
  }
  std::vector<ExperimentSummary> rows;
  drive(config, cells, true, hooks, [&](CellOutput& out) {
    for (const auto& s : out.tests) rows.push_back(s);
  });
  return rows;
}

std::vector<double> surface_rho_grid() {
  return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};
}

std::vector<int> surface_T_grid() { return {50, 200, 500, 1000, 1500, 2000, 2500}; }

std::vector<SurfacePoint> run_surface(const ExperimentConfig& config, const CellHooks& hooks) {
  config.validate();
  std::vector<SurfacePoint> points;
  drive(config, grid_cells(config), true, hooks, [&](CellOutput& out) {
    for (const auto& s : out.tests) points.push_back(SurfacePoint{s.rho, s.T, s.method, s.rejection - config.level});
  });
  return points;
}

std::vector<ExperimentSummary> run_weak_exo(const ExperimentConfig& config, const CellHooks& hooks) {
  ExperimentConfig c = config;
  c.dgp = DgpKind::WEAK_EXO;
  c.rhos = {0.0};
  c.validate();
  std::vector<CellKey> cells;
  for (int T : c.Ts) {
    for (double b : {1.0, 0.8}) cells.push_back(CellKey{DgpKind::WEAK_EXO, c.criterion, 0.0, T, b});
  }
  std::vector<ExperimentSummary> rows;
  drive(c, cells, true, hooks, [&](CellOutput& out) {
    const ExperimentSummary& hac = out.estimation[0];
    const ExperimentSummary& dyn = out.estimation[1];
    for (auto& s : out.tests) {
      const ExperimentSummary& est = s.method == std::string("DynReg") ? dyn : hac;
      s.bias = est.bias;
      s.variance = est.variance;
      s.mse = est.mse;
      s.re_est = est.re_est;
      s.lag_median = est.lag_median;
      s.lag_mean = est.lag_mean;
      rows.push_back(s);
    }
  });
  return rows;
}

std::vector<ForecastSummary> run_forecast(const ExperimentConfig& config, const ForecastHooks& hooks) {
  config.validate();
  std::vector<ForecastSummary> rows;
  for (int T : config.Ts) {
    for (double rho : config.rhos) {
      if (hooks.skip && hooks.skip(T, rho)) continue;
      DgpSpec spec = spec_for(config, CellKey{config.dgp, config.criterion, rho, T, 1.0});
      ForecastSummary f;
      f.T = T;
      f.rho = rho;
      f.result = mspe_experiment(spec, T, config.reps, config.criterion, config.seed, config.threads, config.p_max);
      f.analytic = config.dgp == DgpKind::AR_AR ? analytic_re_pred(rho) : kNaN;
      f.reps = f.result.reps_used;
      if (hooks.on_row) hooks.on_row(f);
      rows.push_back(f);
    }
  }
  return rows;
}

}  // namespace hacdyn
