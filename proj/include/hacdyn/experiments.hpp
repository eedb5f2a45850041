#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hacdyn/dgp.hpp"
#include "hacdyn/dynreg.hpp"
#include "hacdyn/forecasting.hpp"
#include "hacdyn/hac.hpp"

namespace hacdyn {

enum class Method { OLS, NW, NW_A, NW_LLSW, NW_KV, M_LLSW, DynReg };
inline constexpr std::size_t kMethodCount = 7;

const char* to_string(Method m);
Method parse_method(const std::string& text);
const std::vector<Method>& all_methods();

inline constexpr std::uint64_t kDefaultSeed = 12345;

struct ExperimentConfig {
  DgpKind dgp = DgpKind::AR_AR;
  std::vector<double> rhos{0.0, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99};
  std::vector<int> Ts{50, 200, 600, 2500};
  int reps = 2000;
  Criterion criterion = Criterion::BIC;
  std::vector<Method> methods = all_methods();
  std::vector<double> beta_grid = default_beta_grid();
  double level = 0.05;
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
  std::optional<double> rho_x;
  Eigen::Matrix2d var_matrix = DgpSpec{}.var_matrix;
  double m_llsw_coefficient = kDefaultMllswCoefficient;
  int p_max = -1;  // -1: min(floor(T/5), 30)
  bool dynreg_student_t = false;
  double null_value = 1.0;

  // 1.00, 1.025, ..., 1.50; the symmetric variant mirrors it below 1.
  static std::vector<double> default_beta_grid(bool symmetric = false);
  void validate() const;
};

struct CellKey {
  DgpKind dgp = DgpKind::AR_AR;
  Criterion criterion = Criterion::BIC;
  double rho = 0.0;
  int T = 0;
  double beta_true = 1.0;
};

// One row of a results table. Fields that do not apply to the row's method
// are NaN (e.g. lag statistics on a HAC row).
struct ExperimentSummary {
  DgpKind dgp = DgpKind::AR_AR;
  Criterion criterion = Criterion::BIC;
  double rho = 0.0;
  int T = 0;
  std::string method;
  double beta_true = 1.0;
  double bias;
  double variance;
  double mse;
  double re_est;
  double rejection;
  double mc_se;
  double lag_median;
  double lag_mean;
  int reps_used = 0;
  int reps_failed = 0;

  ExperimentSummary();
};

// What one replication contributes to a cell.
struct ReplicationOutcome {
  bool ok = false;
  double beta_ols = 0.0;
  double beta_dynreg = 0.0;
  int lag = 0;
  std::array<bool, kMethodCount> reject{};
};

struct CellOutput {
  CellKey key;
  std::vector<ExperimentSummary> estimation;  // "HAC" and "DynReg" rows
  std::vector<ExperimentSummary> tests;       // one row per configured method
  int reps_failed = 0;
};

// Hooks for streaming and resuming: `skip` returns true for cells already on
// disk; `on_cell` runs once per finished cell, in grid order.
struct CellHooks {
  std::function<bool(const CellKey&)> skip;
  std::function<void(const CellOutput&)> on_cell;
};

/// Runs every replication of one (DGP, rho, T, beta_true) cell; replication r
/// uses stream (seed, r) whatever the thread count.
std::vector<ReplicationOutcome> run_replications(const ExperimentConfig& config, const CellKey& key,
                                                 bool with_tests);

/// Bias, variance (1/N), MSE and RE_est for the OLS (HAC) and DynReg arms
/// plus the DynReg lag median (lower) and mean.
std::vector<ExperimentSummary> summarize_estimation(const CellKey& key, const std::vector<ReplicationOutcome>& reps);

/// Rejection frequency and its Monte Carlo standard error per method.
std::vector<ExperimentSummary> summarize_tests(const CellKey& key, const std::vector<Method>& methods,
                                               const std::vector<ReplicationOutcome>& reps);

CellOutput run_cell(const ExperimentConfig& config, const CellKey& key, bool with_tests);

struct TableResult {
  std::vector<ExperimentSummary> efficiency;
  std::vector<ExperimentSummary> size;
};

/// Efficiency and size over the rho x T grid from one pass of replications.
TableResult run_table(const ExperimentConfig& config, const CellHooks& hooks = {});
std::vector<ExperimentSummary> run_efficiency(const ExperimentConfig& config, const CellHooks& hooks = {});
std::vector<ExperimentSummary> run_size(const ExperimentConfig& config, const CellHooks& hooks = {});

/// Rejection of H0: beta = null for every beta_true in the grid (DGP
/// generated with beta = beta_true); rows carry beta_true.
std::vector<ExperimentSummary> run_power(const ExperimentConfig& config, const CellHooks& hooks = {});

struct SurfacePoint {
  double rho = 0.0;
  int T = 0;
  std::string method;
  double size_distortion = 0.0;  // rejection - level
};

std::vector<double> surface_rho_grid();
std::vector<int> surface_T_grid();

/// Raw size-distortion grid; no smoothing.
std::vector<SurfacePoint> run_surface(const ExperimentConfig& config, const CellHooks& hooks = {});

/// Weak-exogeneity panel: cells (T, beta_true) for beta_true in {1, 0.8}.
/// Test rows also carry their cell's estimation statistics; `on_cell` sees
/// them already merged.
std::vector<ExperimentSummary> run_weak_exo(const ExperimentConfig& config, const CellHooks& hooks = {});

struct ForecastSummary {
  int T = 0;
  double rho = 0.0;
  MspeResult result;
  double analytic = 0.0;
  int reps = 0;
};

struct ForecastHooks {
  std::function<bool(int T, double rho)> skip;
  std::function<void(const ForecastSummary&)> on_row;
};

/// MSPE of both forecasts over the rho x T grid, T outer.
std::vector<ForecastSummary> run_forecast(const ExperimentConfig& config, const ForecastHooks& hooks = {});

}  // namespace hacdyn
