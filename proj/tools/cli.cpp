#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hacdyn/csv.hpp"
#include "hacdyn/error.hpp"
#include "hacdyn/experiments.hpp"

namespace hacdyn::cli {

namespace {

namespace fs = std::filesystem;
using csv::format_double;

// Raised for flag values that parse but are not acceptable (e.g. rho = 1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridFlags {
  std::string dgp = "ar";
  std::vector<double> rho;
  std::vector<int> T;
  int reps = 2000;
  std::string criterion = "BIC";
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
  std::string out = "results";
  std::vector<std::string> methods;
  double level = 0.05;
  double rho_x = 0.0;
  int pmax = -1;
  double mllsw_coef = kDefaultMllswCoefficient;
  bool resume = false;
  bool student_t = false;
  // power only
  std::vector<double> beta_grid;
  bool symmetric = false;
};

std::vector<std::string> method_names() {
  std::vector<std::string> names;
  for (Method m : all_methods()) names.emplace_back(to_string(m));
  return names;
}

void add_grid_flags(CLI::App* sub, GridFlags& f, const ExperimentConfig& defaults, bool with_out = true) {
  f.rho = defaults.rhos;
  f.T = defaults.Ts;
  f.methods = method_names();
  sub->add_option("--dgp", f.dgp, "Data generating process: ar, ma or weakexo");
  sub->add_option("--rho", f.rho, "Comma-separated autoregressive parameters")->delimiter(',');
  sub->add_option("--T", f.T, "Comma-separated sample sizes")->delimiter(',');
  sub->add_option("--reps", f.reps, "Monte Carlo replications per cell")->check(CLI::PositiveNumber);
  sub->add_option("--criterion", f.criterion, "DynReg lag selection: BIC or AIC");
  sub->add_option("--seed", f.seed, "Base seed; replication r uses stream (seed, r)");
  sub->add_option("--threads", f.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  if (with_out) sub->add_option("--out", f.out, "Output directory");
  sub->add_option("--methods", f.methods, "Comma-separated inference methods")->delimiter(',');
  sub->add_option("--level", f.level, "Nominal test level");
  sub->add_option("--rho-x", f.rho_x, "AR coefficient of x when it differs from rho")->default_str("rho");
  sub->add_option("--pmax", f.pmax, "Largest candidate lag order (-1: min(T/5, 30))");
  sub->add_option("--mllsw-coef", f.mllsw_coef, "Coefficient c in nu = floor(c T^(2/3))");
  sub->add_flag("--resume", f.resume, "Keep finished cells already in the output files");
  sub->add_flag("--student-t", f.student_t, "Student-t critical values for the DynReg test");
}

ExperimentConfig make_config(const GridFlags& f, CLI::App* sub) {
  ExperimentConfig c;
  try {
    c.dgp = parse_dgp_kind(f.dgp);
    c.criterion = parse_criterion(f.criterion);
    c.methods.clear();
    for (const auto& m : f.methods) c.methods.push_back(parse_method(m));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  c.rhos = f.rho;
  c.Ts = f.T;
  c.reps = f.reps;
  c.seed = f.seed;
  c.threads = f.threads;
  c.level = f.level;
  if (sub->count("--rho-x") > 0) c.rho_x = f.rho_x;
  c.p_max = f.pmax;
  c.m_llsw_coefficient = f.mllsw_coef;
  c.dynreg_student_t = f.student_t;
  if (!f.beta_grid.empty()) {
    c.beta_grid = f.beta_grid;
  } else {
    c.beta_grid = ExperimentConfig::default_beta_grid(f.symmetric);
  }
  try {
    c.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return c;
}

std::string describe(const CellKey& k) {
  std::ostringstream s;
  s << "dgp=" << to_string(k.dgp) << " rho=" << format_double(k.rho) << " T=" << k.T
    << " beta=" << format_double(k.beta_true);
  return s.str();
}

// Progress and failure bookkeeping shared by the grid commands.
class Tracker {
 public:
  explicit Tracker(std::ostream& err) : err_(err), start_(std::chrono::steady_clock::now()) {}

  void done(const std::string& label, int failed, int reps) {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    err_ << "[" << format_double(std::round(secs * 10.0) / 10.0) << "s] " << label;
    if (failed > 0) {
      err_ << " (" << failed << " of " << reps << " replications failed)";
      failed_.push_back(label);
    }
    err_ << '\n';
  }

  int finish() const {
    if (failed_.empty()) return kOk;
    err_ << failed_.size() << " cell(s) had failed replications:\n";
    for (const auto& l : failed_) err_ << "  " << l << '\n';
    return kCellsFailed;
  }

 private:
  std::ostream& err_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> failed_;
};

template <class F>
std::vector<std::string> rows_of(const std::vector<ExperimentSummary>& xs, F&& row) {
  std::vector<std::string> out;
  for (const auto& s : xs) out.push_back(row(s));
  return out;
}

int cmd_table(const GridFlags& f, CLI::App* sub, std::ostream& out, std::ostream& err) {
  const ExperimentConfig config = make_config(f, sub);
  const fs::path dir(f.out);
  csv::ResultFile eff(dir / "efficiency.csv", csv::kEfficiencyHeader, {0, 1, 2, 3}, f.resume);
  csv::ResultFile size(dir / "size.csv", csv::kSizeHeader, {0, 1, 2, 3}, f.resume);
  Tracker tracker(err);
  CellHooks hooks;
  hooks.skip = [&](const CellKey& k) {
    const auto key = csv::grid_key(k);
    return eff.has(key) && size.has(key);
  };
  hooks.on_cell = [&](const CellOutput& cell) {
    const auto key = csv::grid_key(cell.key);
    if (!eff.has(key)) eff.append(rows_of(cell.estimation, csv::efficiency_row));
    if (!size.has(key)) size.append(rows_of(cell.tests, csv::size_row));
    tracker.done(describe(cell.key), cell.reps_failed, config.reps);
  };
  run_table(config, hooks);
  out << "wrote " << (dir / "efficiency.csv").string() << " and " << (dir / "size.csv").string() << '\n';
  return tracker.finish();
}

int cmd_power(const GridFlags& f, CLI::App* sub, std::ostream& out, std::ostream& err) {
  const ExperimentConfig config = make_config(f, sub);
  const fs::path path = fs::path(f.out) / "power.csv";
  csv::ResultFile file(path, csv::kPowerHeader, {0, 1, 2, 3, 5}, f.resume);
  Tracker tracker(err);
  CellHooks hooks;
  hooks.skip = [&](const CellKey& k) { return file.has(csv::power_key(k)); };
  hooks.on_cell = [&](const CellOutput& cell) {
    file.append(rows_of(cell.tests, csv::power_row));
    tracker.done(describe(cell.key), cell.reps_failed, config.reps);
  };
  run_power(config, hooks);
  out << "wrote " << path.string() << '\n';
  return tracker.finish();
}

int cmd_surface(const GridFlags& f, CLI::App* sub, std::ostream& out, std::ostream& err) {
  ExperimentConfig config = make_config(f, sub);
  const fs::path path = fs::path(f.out) / "surface.csv";
  csv::ResultFile file(path, csv::kSurfaceHeader, {0, 1}, f.resume);
  Tracker tracker(err);
  CellHooks hooks;
  hooks.skip = [&](const CellKey& k) { return file.has(csv::surface_key(k)); };
  hooks.on_cell = [&](const CellOutput& cell) {
    std::vector<std::string> rows;
    for (const auto& t : cell.tests) {
      rows.push_back(csv::surface_row(SurfacePoint{t.rho, t.T, t.method, t.rejection - config.level}));
    }
    file.append(rows);
    tracker.done(describe(cell.key), cell.reps_failed, config.reps);
  };
  run_surface(config, hooks);
  out << "wrote " << path.string() << '\n';
  return tracker.finish();
}

int cmd_weakexo(const GridFlags& f, CLI::App* sub, std::ostream& out, std::ostream& err) {
  ExperimentConfig config = make_config(f, sub);
  config.dgp = DgpKind::WEAK_EXO;
  const fs::path path = fs::path(f.out) / "weakexo.csv";
  csv::ResultFile file(path, csv::kWeakExoHeader, {2, 3}, f.resume);
  Tracker tracker(err);
  CellHooks hooks;
  hooks.skip = [&](const CellKey& k) { return file.has(csv::weak_exo_key(k)); };
  hooks.on_cell = [&](const CellOutput& cell) {
    file.append(rows_of(cell.tests, csv::weak_exo_row));
    tracker.done(describe(cell.key), cell.reps_failed, config.reps);
  };
  run_weak_exo(config, hooks);
  out << "wrote " << path.string() << '\n';
  return tracker.finish();
}

int cmd_forecast(const GridFlags& f, CLI::App* sub, std::ostream& out, std::ostream& err) {
  const ExperimentConfig config = make_config(f, sub);
  const fs::path path = fs::path(f.out) / "forecast.csv";
  csv::ResultFile file(path, csv::kForecastHeader, {0, 1}, f.resume);
  Tracker tracker(err);
  ForecastHooks hooks;
  hooks.skip = [&](int T, double rho) { return file.has(csv::forecast_key(T, rho)); };
  hooks.on_row = [&](const ForecastSummary& s) {
    file.append({csv::forecast_row(s)});
    tracker.done("T=" + std::to_string(s.T) + " rho=" + format_double(s.rho), s.result.reps_failed, config.reps);
  };
  run_forecast(config, hooks);
  out << "wrote " << path.string() << '\n';
  return tracker.finish();
}

struct AnalyzeFlags {
  std::string input;
  std::string method = "DynReg";
  std::string criterion = "BIC";
  int pmax = -1;
  int p = -1;
  double level = 0.05;
  double null_value = 1.0;
  int coef = 0;
  double mllsw_coef = kDefaultMllswCoefficient;
  bool json = false;
  bool student_t = false;
};

int cmd_analyze(const AnalyzeFlags& f, std::ostream& out) {
  Sample sample = csv::read_data_csv(fs::path(f.input));
  if (sample.size() < 10) {
    throw Error(ErrorCode::InsufficientData,
                "need at least 10 observations, found " + std::to_string(sample.size()));
  }
  if (f.coef < 0 || f.coef >= sample.regressors()) {
    throw UsageError("--coef must index one of the " + std::to_string(sample.regressors()) + " regressor column(s)");
  }
  if (!(f.level > 0.0 && f.level < 1.0)) throw UsageError("--level must lie in (0, 1)");

  std::string method_text;
  Method method;
  try {
    method = parse_method(f.method);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  method_text = to_string(method);

  nlohmann::ordered_json j;
  j["method"] = method_text;
  j["observations"] = sample.size();
  j["regressors"] = sample.regressors();
  j["null"] = f.null_value;
  j["level"] = f.level;

  TestResult test;
  double se = 0.0;
  if (method == Method::DynReg) {
    DynRegFit fit;
    int p_max = -1;
    try {
      if (f.p >= 0) {
        fit = fit_dynreg(sample, f.p);
      } else {
        const Criterion crit = parse_criterion(f.criterion);
        if (crit == Criterion::Fixed) throw UsageError("--criterion fixed needs --p");
        p_max = f.pmax >= 0 ? f.pmax : default_max_order(sample.size());
        fit = select_order(sample, p_max, crit);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::RankDeficient) {
        throw Error(ErrorCode::RankDeficient,
                    std::string(e.what()) + "; the lagged regressors are collinear, try a smaller --p or --pmax");
      }
      if (e.code() == ErrorCode::InvalidArgument) throw UsageError(e.what());
      throw;
    }
    test = dynreg_t_test(fit, f.null_value, f.level, f.student_t, f.coef);
    se = std::sqrt(ols_variance(fit.fit, fit.beta_index(f.coef)));
    j["criterion"] = to_string(fit.criterion_used);
    if (p_max >= 0) j["p_max"] = p_max;
    j["p"] = fit.p;
    j["first_row"] = fit.first_row;
    j["n_effective"] = fit.n_effective;
    j["theta"] = std::vector<double>(fit.theta_hat.data(), fit.theta_hat.data() + fit.theta_hat.size());
    j["beta_hat"] = fit.beta(f.coef);
  } else {
    RegressionFit fit;
    try {
      fit = ols_fit(sample.x, sample.y);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::RankDeficient) {
        throw Error(ErrorCode::RankDeficient, std::string(e.what()) + "; drop collinear regressor columns");
      }
      throw;
    }
    if (method == Method::OLS) {
      test = ols_t_test(fit, f.coef, f.null_value, f.level);
      se = std::sqrt(ols_variance(fit, f.coef));
    } else {
      const auto rule = parse_bandwidth_rule(method_text);
      const LrvEstimate lrv = estimate_lrv(fit, sample.x, rule, f.mllsw_coef);
      test = hac_t_test(fit, lrv, f.coef, f.null_value, f.level);
      se = std::sqrt(hac_variance(fit, lrv, f.coef));
      if (rule == BandwidthRule::M_LLSW) {
        j["nu"] = lrv.bandwidth_used;
      } else {
        j["h"] = lrv.bandwidth_used;
      }
    }
    j["beta_hat"] = std::vector<double>(fit.beta_hat.data(), fit.beta_hat.data() + fit.beta_hat.size());
  }
  j["std_error"] = se;
  j["statistic"] = test.statistic;
  j["critical_value"] = test.critical_value;
  j["reject"] = test.reject;

  if (f.json) {
    out << j.dump(2) << '\n';
    return kOk;
  }
  auto num = [](const nlohmann::ordered_json& v) {
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_array()) {
      std::string s;
      for (const auto& e : v) s += (s.empty() ? "" : " ") + format_double(e.get<double>());
      return s;
    }
    return v.dump();
  };
  out << "method: " << method_text << '\n';
  out << "observations: " << sample.size() << '\n';
  if (j.contains("h")) out << "bandwidth: h=" << j["h"].get<int>() << '\n';
  if (j.contains("nu")) out << "bandwidth: nu=" << j["nu"].get<int>() << '\n';
  if (j.contains("p")) {
    out << "lag order: p=" << j["p"].get<int>();
    if (j.contains("p_max")) out << " (" << j["criterion"].get<std::string>() << ", p_max=" << j["p_max"].get<int>() << ")";
    out << '\n';
    out << "theta: " << num(j["theta"]) << '\n';
  }
  out << "beta_hat: " << num(j["beta_hat"]) << '\n';
  out << "std_error: " << format_double(se) << '\n';
  out << "t_stat (H0: beta=" << format_double(f.null_value) << "): " << format_double(test.statistic) << '\n';
  out << "critical_value: " << format_double(test.critical_value) << '\n';
  out << "reject at " << format_double(f.level) << ": " << (test.reject ? "yes" : "no") << '\n';
  return kOk;
}

struct SimulateFlags {
  std::string dgp = "ar";
  double rho = 0.5;
  double rho_x = 0.0;
  double beta = 1.0;
  int T = 200;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t rep = 0;
  int extra = 0;
  std::string out;
};

int cmd_simulate(const SimulateFlags& f, CLI::App* sub, std::ostream& out) {
  DgpSpec spec;
  try {
    spec.kind = parse_dgp_kind(f.dgp);
    spec.rho = f.rho;
    if (sub->count("--rho-x") > 0) spec.rho_x = f.rho_x;
    spec.beta = f.beta;
    spec.T = f.T;
    validate(spec);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (f.extra < 0) throw UsageError("--extra must be non-negative");
  const Sample s = simulate(spec, StreamKey{f.seed, f.rep}, f.extra);
  if (f.out.empty() || f.out == "-") {
    write_sample_csv(out, s);
  } else {
    const fs::path path(f.out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorCode::IoError, "cannot write '" + f.out + "'");
    write_sample_csv(file, s);
    if (!file) throw Error(ErrorCode::IoError, "write to '" + f.out + "' failed");
  }
  return kOk;
}

struct CritvalFlags {
  double level = 0.05;
  int grid = kFixedBGridPoints;
  int draws = kFixedBDraws;
  std::uint64_t seed = kFixedBSeed;
};

int cmd_critval(const CritvalFlags& f, std::ostream& out) {
  double c = 0.0;
  try {
    c = fixed_b_critical_value(f.level, f.grid, f.draws, f.seed);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) throw UsageError(e.what());
    throw;
  }
  out << format_double(c) << '\n';
  return kOk;
}

void add_config_option(CLI::App* sub) {
  sub->add_option("--config", "File of key=value lines; flags given on the command line take precedence")
      ->default_str("");
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Appends `--key value` for every line of the --config file whose key was
// not given on the command line. Lists may be written a,b or [a,b]; boolean
// keys take true/false.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config file '" + path + "'");
  auto given = [&](const std::string& flag) {
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  std::vector<std::string> extra;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = strip(line.substr(0, line.find('#')));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = strip(t.substr(0, eq));
    std::string value = strip(t.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    if (value.size() >= 2 && value.front() == '[' && value.back() == ']') value = value.substr(1, value.size() - 2);
    std::erase(value, ' ');
    const std::string flag = "--" + key;
    if (key == "config" || given(flag)) continue;
    if (value == "true") {
      extra.push_back(flag);
    } else if (value != "false") {
      extra.push_back(flag);
      extra.push_back(value);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"HAC and dynamic-regression inference for time-series regressions", "hacdyn"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough(false);

  const ExperimentConfig defaults;

  AnalyzeFlags af;
  auto* analyze = app.add_subcommand("analyze", "Estimate and test beta on a CSV with y and x columns");
  analyze->add_option("input", af.input, "CSV file with a header naming y and the regressors")->required();
  analyze->add_option("--method", af.method, "OLS, NW, NW-A, NW-LLSW, NW-KV, M-LLSW or DynReg");
  analyze->add_option("--criterion", af.criterion, "DynReg lag selection: BIC or AIC");
  analyze->add_option("--pmax", af.pmax, "Largest candidate lag order (-1: min(T/5, 30))");
  analyze->add_option("--p", af.p, "Impose this lag order instead of selecting one (-1: select)");
  analyze->add_option("--level", af.level, "Nominal test level");
  analyze->add_option("--null", af.null_value, "Value of beta under the null hypothesis");
  analyze->add_option("--coef", af.coef, "Zero-based index of the tested regressor");
  analyze->add_option("--mllsw-coef", af.mllsw_coef, "Coefficient c in nu = floor(c T^(2/3))");
  analyze->add_flag("--json", af.json, "Print a JSON object instead of text");
  analyze->add_flag("--student-t", af.student_t, "Student-t critical value for the DynReg test");
  add_config_option(analyze);

  SimulateFlags sf;
  auto* sim = app.add_subcommand("simulate", "Write one simulated sample as CSV");
  sim->add_option("--dgp", sf.dgp, "ar, ma or weakexo");
  sim->add_option("--rho", sf.rho, "Autoregressive parameter");
  sim->add_option("--rho-x", sf.rho_x, "AR coefficient of x when it differs from rho")->default_str("rho");
  sim->add_option("--beta", sf.beta, "Slope of y on x");
  sim->add_option("--T", sf.T, "Sample size");
  sim->add_option("--seed", sf.seed, "Base seed");
  sim->add_option("--rep", sf.rep, "Replication index within the seed");
  sim->add_option("--extra", sf.extra, "Extra periods appended after T");
  sim->add_option("--out", sf.out, "Output file (default: standard output)");
  add_config_option(sim);

  GridFlags tf, pf, uf, wf, ff;
  auto* table = app.add_subcommand("table", "Efficiency and size over a rho x T grid");
  add_grid_flags(table, tf, defaults);
  add_config_option(table);

  auto* power = app.add_subcommand("power", "Rejection frequencies over a grid of true beta");
  add_grid_flags(power, pf, defaults);
  power->add_option("--beta-grid", pf.beta_grid, "Comma-separated true beta values (default 1.00..1.50)")
      ->delimiter(',');
  power->add_flag("--symmetric", pf.symmetric, "Mirror the default beta grid below 1");
  add_config_option(power);

  ExperimentConfig surface_defaults;
  surface_defaults.rhos = surface_rho_grid();
  surface_defaults.Ts = surface_T_grid();
  auto* surface = app.add_subcommand("surface", "Size distortion over a fine rho x T grid");
  add_grid_flags(surface, uf, surface_defaults);
  add_config_option(surface);

  ExperimentConfig weak_defaults;
  weak_defaults.dgp = DgpKind::WEAK_EXO;
  weak_defaults.rhos = {0.0};
  auto* weak = app.add_subcommand("weakexo", "Estimation and tests when x is only weakly exogenous");
  add_grid_flags(weak, wf, weak_defaults);
  wf.dgp = "weakexo";
  add_config_option(weak);

  ExperimentConfig forecast_defaults;
  forecast_defaults.rhos = {0.7, 0.9};
  forecast_defaults.Ts = {200};
  auto* forecast = app.add_subcommand("forecast", "One-step MSPE of OLS and DynReg forecasts");
  add_grid_flags(forecast, ff, forecast_defaults);
  add_config_option(forecast);

  CritvalFlags cf;
  auto* critval = app.add_subcommand("critval", "Simulate the fixed-b critical value used with NW-KV");
  critval->add_option("--level", cf.level, "Two-sided level");
  critval->add_option("--grid", cf.grid, "Grid points per Brownian path (>= 200)");
  critval->add_option("--draws", cf.draws, "Simulated paths (>= 50000)");
  critval->add_option("--seed", cf.seed, "Seed");

  std::vector<std::string> reversed;
  try {
    const auto expanded = expand_config(args);
    reversed.assign(expanded.rbegin(), expanded.rend());
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << "run 'hacdyn " << sub->get_name() << " --help' for usage\n";
    } else {
      err << "run 'hacdyn --help' for usage\n";
    }
    return kUsageError;
  }

  try {
    if (*analyze) return cmd_analyze(af, out);
    if (*sim) return cmd_simulate(sf, sim, out);
    if (*table) return cmd_table(tf, table, out, err);
    if (*power) return cmd_power(pf, power, out, err);
    if (*surface) return cmd_surface(uf, surface, out, err);
    if (*weak) return cmd_weakexo(wf, weak, out, err);
    if (*forecast) return cmd_forecast(ff, forecast, out, err);
    if (*critval) return cmd_critval(cf, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace hacdyn::cli
