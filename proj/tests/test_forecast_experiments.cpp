#include <doctest.h>

#include <cmath>
#include <cstring>

#include "hacdyn/error.hpp"
#include "hacdyn/experiments.hpp"
#include "hacdyn/forecasting.hpp"
#include "support.hpp"

using namespace hacdyn;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

// Bitwise equality that treats NaN == NaN.
bool same(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_row(const ExperimentSummary& a, const ExperimentSummary& b) {
  return a.method == b.method && a.T == b.T && same(a.rho, b.rho) && same(a.beta_true, b.beta_true) &&
         same(a.bias, b.bias) && same(a.variance, b.variance) && same(a.mse, b.mse) && same(a.re_est, b.re_est) &&
         same(a.rejection, b.rejection) && same(a.mc_se, b.mc_se) && same(a.lag_median, b.lag_median) &&
         same(a.lag_mean, b.lag_mean) && a.reps_used == b.reps_used;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.rhos = {0.0, 0.7};
  c.Ts = {50};
  c.reps = 200;
  c.seed = 99;
  return c;
}

}  // namespace

TEST_SUITE("forecasting") {

TEST_CASE("analytic relative prediction efficiency") {
  CHECK(analytic_re_pred(0.0) == 1.0);
  CHECK(analytic_re_pred(0.9) == doctest::Approx(3.1316).epsilon(1e-4));
  CHECK(analytic_re_pred(0.7) == doctest::Approx(1.4804).epsilon(1e-4));
  CHECK(analytic_re_pred(-0.7) == analytic_re_pred(0.7));
  CHECK(code_of([] { analytic_re_pred(1.0); }) == ErrorCode::ExplosiveSpec);
}

TEST_CASE("AR(1) coefficient matches the closed form") {
  const Vector s = test::random_vector(30, 4);
  const double num = s.tail(29).dot(s.head(29));
  const double den = s.head(29).squaredNorm();
  CHECK(ar1_coefficient(s) == doctest::Approx(num / den).epsilon(1e-12));
  CHECK(code_of([] { ar1_coefficient(Vector::Ones(2)); }) == ErrorCode::InsufficientData);
}

TEST_CASE("static forecast is beta_hat times the AR(1) forecast of x") {
  DgpSpec spec;
  spec.rho = 0.8;
  spec.T = 120;
  const Sample s = simulate(spec, StreamKey{4, 0}, 1);
  const ForecastPair p = forecast_pair(s, 120, Criterion::BIC);
  const Vector x = s.x.col(0).head(120);
  const Vector y = s.y.head(120);
  const double b = x.dot(y) / x.squaredNorm();
  const double phi = x.tail(119).dot(x.head(119)) / x.head(119).squaredNorm();
  CHECK(p.suboptimal == doctest::Approx(b * phi * x(119)).epsilon(1e-10));
  CHECK(p.realized == s.y(120));
  CHECK(code_of([&] { forecast_pair(s, 121, Criterion::BIC); }) == ErrorCode::InsufficientHistory);
}

TEST_CASE("DynReg forecasts dominate under serial correlation and neither is biased") {
  DgpSpec spec;
  spec.rho = 0.9;
  const MspeResult r = mspe_experiment(spec, 200, 1000, Criterion::BIC, 2024);
  CHECK(r.reps_used + r.reps_failed == 1000);
  CHECK(r.mspe_opt < r.mspe_subopt);
  CHECK(r.re_pred_hat == doctest::Approx(r.mspe_subopt / r.mspe_opt).epsilon(1e-14));
  CHECK(std::abs(r.mean_error_opt) < 4.0 * r.se_error_opt);
  CHECK(std::abs(r.mean_error_subopt) < 4.0 * r.se_error_subopt);
  CHECK(r.re_pred_se > 0.0);
  // Known-parameter efficiency is an upper reference; estimation only erodes it.
  CHECK(r.re_pred_hat < analytic_re_pred(0.9) + 4.0 * r.re_pred_se);
}

TEST_CASE("MSPE experiment is thread invariant") {
  DgpSpec spec;
  spec.rho = 0.5;
  const MspeResult a = mspe_experiment(spec, 60, 150, Criterion::AIC, 5, 1);
  const MspeResult b = mspe_experiment(spec, 60, 150, Criterion::AIC, 5, 3);
  CHECK(same(a.mspe_opt, b.mspe_opt));
  CHECK(same(a.mspe_subopt, b.mspe_subopt));
  CHECK(code_of([&] { mspe_experiment(spec, 60, 99, Criterion::AIC, 5); }) == ErrorCode::InvalidArgument);
}

}  // TEST_SUITE

TEST_SUITE("experiments") {

TEST_CASE("method names round-trip") {
  CHECK(all_methods().size() == kMethodCount);
  for (Method m : all_methods()) CHECK(parse_method(to_string(m)) == m);
  CHECK(code_of([] { parse_method("bootstrap"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("config validation") {
  ExperimentConfig c = small_config();
  c.validate();
  c.reps = 99;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
  c = small_config();
  c.rhos = {1.0};
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::ExplosiveSpec);
  c = small_config();
  c.level = 1.0;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
  c = small_config();
  c.Ts = {9};
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("default beta grid") {
  const auto g = ExperimentConfig::default_beta_grid();
  REQUIRE(g.size() == 21);
  CHECK(g.front() == 1.0);
  CHECK(g.back() == doctest::Approx(1.5));
  const auto sym = ExperimentConfig::default_beta_grid(true);
  CHECK(sym.size() == 41);
  CHECK(sym.front() == doctest::Approx(0.5));
}

TEST_CASE("results do not depend on the thread count") {
  ExperimentConfig one = small_config();
  ExperimentConfig four = one;
  four.threads = 4;
  const TableResult a = run_table(one);
  const TableResult b = run_table(four);
  REQUIRE(a.efficiency.size() == b.efficiency.size());
  REQUIRE(a.size.size() == b.size.size());
  for (std::size_t i = 0; i < a.efficiency.size(); ++i) CHECK(same_row(a.efficiency[i], b.efficiency[i]));
  for (std::size_t i = 0; i < a.size.size(); ++i) CHECK(same_row(a.size[i], b.size[i]));
}

TEST_CASE("summary identities") {
  const TableResult t = run_table(small_config());
  REQUIRE(t.efficiency.size() == 4);
  REQUIRE(t.size.size() == 2 * kMethodCount);
  for (const auto& s : t.efficiency) {
    CHECK(s.mse == doctest::Approx(s.variance + s.bias * s.bias).epsilon(1e-12));
    CHECK(s.variance >= 0.0);
    CHECK(s.reps_used == 200);
  }
  for (std::size_t i = 0; i < t.efficiency.size(); i += 2) {
    const auto& hac = t.efficiency[i];
    const auto& dyn = t.efficiency[i + 1];
    CHECK(hac.method == "HAC");
    CHECK(dyn.method == "DynReg");
    CHECK(hac.re_est == doctest::Approx(hac.mse / dyn.mse).epsilon(1e-14));
    CHECK(std::isnan(hac.lag_median));
    CHECK(dyn.lag_median >= 0.0);
    CHECK(std::isnan(hac.rejection));
  }
  for (const auto& s : t.size) {
    CHECK(s.rejection >= 0.0);
    CHECK(s.rejection <= 1.0);
    CHECK(s.mc_se == doctest::Approx(std::sqrt(s.rejection * (1 - s.rejection) / 200)).epsilon(1e-14));
    CHECK(std::isnan(s.bias));
  }
}

TEST_CASE("the lag median is the lower median") {
  std::vector<ReplicationOutcome> reps;
  for (int lag : {3, 0, 2, 1}) {
    ReplicationOutcome o;
    o.ok = true;
    o.lag = lag;
    reps.push_back(o);
  }
  ReplicationOutcome bad;
  reps.push_back(bad);
  const auto rows = summarize_estimation(CellKey{}, reps);
  CHECK(rows[1].lag_median == 1.0);
  CHECK(rows[1].lag_mean == 1.5);
  CHECK(rows[1].reps_used == 4);
  CHECK(rows[1].reps_failed == 1);
}

TEST_CASE("power at the null equals size") {
  ExperimentConfig c = small_config();
  c.rhos = {0.7};
  c.beta_grid = {1.0, 1.3};
  const auto power = run_power(c);
  const auto size = run_size(c);
  REQUIRE(power.size() == 2 * kMethodCount);
  REQUIRE(size.size() == kMethodCount);
  for (std::size_t m = 0; m < kMethodCount; ++m) {
    CHECK(power[m].beta_true == 1.0);
    CHECK(power[m].method == size[m].method);
    CHECK(power[m].rejection == size[m].rejection);
    // Moving away from the null raises rejection for every method.
    CHECK(power[kMethodCount + m].rejection > power[m].rejection);
  }
}

TEST_CASE("streaming hooks see cells in order and can skip") {
  ExperimentConfig c = small_config();
  std::vector<double> seen;
  CellHooks hooks;
  hooks.skip = [](const CellKey& k) { return k.rho == 0.0; };
  hooks.on_cell = [&](const CellOutput& out) { seen.push_back(out.key.rho); };
  const TableResult t = run_table(c, hooks);
  REQUIRE(seen.size() == 1);
  CHECK(seen[0] == 0.7);
  CHECK(t.efficiency.size() == 2);
}

TEST_CASE("weak exogeneity rows carry estimation statistics") {
  ExperimentConfig c = small_config();
  c.dgp = DgpKind::WEAK_EXO;
  c.rhos = {0.0};
  const auto rows = run_weak_exo(c);
  REQUIRE(rows.size() == 2 * kMethodCount);
  for (const auto& r : rows) {
    CHECK(!std::isnan(r.rejection));
    CHECK(!std::isnan(r.mse));
  }
  CHECK(rows.front().beta_true == 1.0);
  CHECK(rows.back().beta_true == 0.8);
}

TEST_CASE("forecast grid") {
  ExperimentConfig c = small_config();
  c.rhos = {0.0, 0.9};
  c.Ts = {100};
  const auto rows = run_forecast(c);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].analytic == 1.0);
  CHECK(rows[1].analytic == doctest::Approx(3.1316).epsilon(1e-4));
  CHECK(rows[1].reps == rows[1].result.reps_used);
}

}  // TEST_SUITE
