#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hacdyn/csv.hpp"
#include "hacdyn/dgp.hpp"
#include "hacdyn/dynreg.hpp"
#include "hacdyn/error.hpp"
#include "hacdyn/experiments.hpp"
#include "hacdyn/forecasting.hpp"
#include "hacdyn/hac.hpp"
#include "hacdyn/regression.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace hacdyn;

namespace {

Sample to_sample(const Vector& y, const Matrix& x) { return make_sample(y, x); }

Matrix as_design(const py::array_t<double, py::array::forcecast>& x) {
  const auto buf = x.request();
  if (buf.ndim == 1) {
    Matrix m(buf.shape[0], 1);
    for (py::ssize_t i = 0; i < buf.shape[0]; ++i) m(i, 0) = x.at(i);
    return m;
  }
  if (buf.ndim != 2) throw Error(ErrorCode::DimensionMismatch, "x must be 1-D or 2-D");
  return x.cast<Matrix>();
}

py::dict summary_dict(const ExperimentSummary& s) {
  return py::dict("dgp"_a = to_string(s.dgp), "criterion"_a = to_string(s.criterion), "rho"_a = s.rho,
                  "T"_a = s.T, "method"_a = s.method, "beta_true"_a = s.beta_true, "bias"_a = s.bias,
                  "variance"_a = s.variance, "mse"_a = s.mse, "re_est"_a = s.re_est,
                  "rejection"_a = s.rejection, "mc_se"_a = s.mc_se, "lag_median"_a = s.lag_median,
                  "lag_mean"_a = s.lag_mean, "reps_used"_a = s.reps_used, "reps_failed"_a = s.reps_failed);
}

ExperimentConfig make_config(const std::string& dgp, const std::vector<double>& rhos, const std::vector<int>& Ts,
                             int reps, const std::string& criterion, std::uint64_t seed, int threads,
                             const std::vector<std::string>& methods) {
  ExperimentConfig c;
  c.dgp = parse_dgp_kind(dgp);
  c.rhos = rhos;
  c.Ts = Ts;
  c.reps = reps;
  c.criterion = parse_criterion(criterion);
  c.seed = seed;
  c.threads = threads;
  if (!methods.empty()) {
    c.methods.clear();
    for (const auto& m : methods) c.methods.push_back(parse_method(m));
  }
  return c;
}

}  // namespace

PYBIND11_MODULE(_hacdyn, m) {
  m.doc() = "HAC and dynamic-regression inference for time-series regressions";

  // Raised for every library error; `code` carries the ErrorCode name.
  static py::handle error_type = py::exception<Error>(m, "HacdynError", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error_type(e.what());
      exc.attr("code") = to_string(e.code());
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<RegressionFit>(m, "RegressionFit")
      .def_readonly("beta_hat", &RegressionFit::beta_hat)
      .def_readonly("residuals", &RegressionFit::residuals)
      .def_readonly("q_hat", &RegressionFit::q_hat)
      .def_readonly("sigma2_hat", &RegressionFit::sigma2_hat)
      .def_readonly("sse", &RegressionFit::sse)
      .def_readonly("n_obs", &RegressionFit::n_obs);

  py::class_<LrvEstimate>(m, "LrvEstimate")
      .def_readonly("omega_hat", &LrvEstimate::omega_hat)
      .def_property_readonly("method", [](const LrvEstimate& l) { return to_string(l.method); })
      .def_readonly("bandwidth_used", &LrvEstimate::bandwidth_used)
      .def_readonly("dof_for_test", &LrvEstimate::dof_for_test);

  py::class_<TestResult>(m, "TestResult")
      .def_readonly("statistic", &TestResult::statistic)
      .def_readonly("critical_value", &TestResult::critical_value)
      .def_readonly("reject", &TestResult::reject)
      .def_readonly("method", &TestResult::method)
      .def_readonly("nominal_level", &TestResult::nominal_level);

  py::class_<DynRegFit>(m, "DynRegFit")
      .def_readonly("p", &DynRegFit::p)
      .def_readonly("k", &DynRegFit::k)
      .def_readonly("theta_hat", &DynRegFit::theta_hat)
      .def_readonly("fit", &DynRegFit::fit)
      .def_property_readonly("criterion", [](const DynRegFit& f) { return to_string(f.criterion_used); })
      .def_readonly("n_effective", &DynRegFit::n_effective)
      .def_readonly("first_row", &DynRegFit::first_row)
      .def_readonly("scores", &DynRegFit::scores)
      .def_property_readonly("beta", [](const DynRegFit& f) { return f.beta(); });

  m.def("ols_fit", [](const py::array_t<double, py::array::forcecast>& x, const Vector& y) {
    return ols_fit(as_design(x), y);
  }, "x"_a, "y"_a, "Least squares of y on the columns of x (no intercept).");

  m.def("bandwidth", [](const std::string& rule, int T, double c) {
    return bandwidth(parse_bandwidth_rule(rule), T, c);
  }, "rule"_a, "T"_a, "m_llsw_coefficient"_a = kDefaultMllswCoefficient);

  m.def("estimate_lrv", [](const RegressionFit& fit, const py::array_t<double, py::array::forcecast>& x,
                           const std::string& rule, double c) {
    return estimate_lrv(fit, as_design(x), parse_bandwidth_rule(rule), c);
  }, "fit"_a, "x"_a, "rule"_a, "m_llsw_coefficient"_a = kDefaultMllswCoefficient);

  m.def("bartlett_lrv", [](const RegressionFit& fit, const py::array_t<double, py::array::forcecast>& x, int h) {
    return bartlett_lrv(fit, as_design(x), h);
  }, "fit"_a, "x"_a, "h"_a);

  m.def("cosine_lrv", [](const RegressionFit& fit, const py::array_t<double, py::array::forcecast>& x, int nu) {
    return cosine_lrv(fit, as_design(x), nu);
  }, "fit"_a, "x"_a, "nu"_a);

  m.def("hac_t_test", py::overload_cast<const RegressionFit&, const LrvEstimate&, Eigen::Index, double, double>(&hac_t_test),
        "fit"_a, "lrv"_a, "coef_index"_a = 0, "null_value"_a = 1.0, "level"_a = 0.05);

  m.def("fixed_b_critical_value", &fixed_b_critical_value, "level"_a = 0.05, "grid_points"_a = kFixedBGridPoints,
        "draws"_a = kFixedBDraws, "seed"_a = kFixedBSeed);

  m.def("fit_dynreg", [](const Vector& y, const py::array_t<double, py::array::forcecast>& x, int p) {
    return fit_dynreg(to_sample(y, as_design(x)), p);
  }, "y"_a, "x"_a, "p"_a);

  m.def("select_order", [](const Vector& y, const py::array_t<double, py::array::forcecast>& x, int p_max,
                           const std::string& criterion) {
    const Sample s = to_sample(y, as_design(x));
    return select_order(s, p_max >= 0 ? p_max : default_max_order(s.size()), parse_criterion(criterion));
  }, "y"_a, "x"_a, "p_max"_a = -1, "criterion"_a = "BIC");

  m.def("dynreg_t_test", &dynreg_t_test, "fit"_a, "null_value"_a = 1.0, "level"_a = 0.05,
        "student_t"_a = false, "regressor"_a = 0);

  m.def("simulate", [](const std::string& dgp, double rho, int T, double beta, std::uint64_t seed,
                       std::uint64_t replication, int extra) {
    DgpSpec spec;
    spec.kind = parse_dgp_kind(dgp);
    spec.rho = rho;
    spec.T = T;
    spec.beta = beta;
    const Sample s = simulate(spec, StreamKey{seed, replication}, extra);
    return py::dict("y"_a = s.y, "x"_a = Vector(s.x.col(0)), "u"_a = s.u);
  }, "dgp"_a = "ar", "rho"_a = 0.5, "T"_a = 200, "beta"_a = 1.0, "seed"_a = kDefaultSeed,
     "replication"_a = 0, "extra"_a = 0, "Simulated sample as a dict of y, x and u arrays.");

  m.def("analytic_re_pred", &analytic_re_pred, "rho"_a);

  m.def("mspe_experiment", [](const std::string& dgp, double rho, int T, int reps, const std::string& criterion,
                              std::uint64_t seed, int threads) {
    DgpSpec spec;
    spec.kind = parse_dgp_kind(dgp);
    spec.rho = rho;
    spec.T = T;
    const MspeResult r = mspe_experiment(spec, T, reps, parse_criterion(criterion), seed, threads);
    return py::dict("mspe_subopt"_a = r.mspe_subopt, "mspe_opt"_a = r.mspe_opt, "re_pred"_a = r.re_pred_hat,
                    "re_pred_se"_a = r.re_pred_se, "reps_used"_a = r.reps_used, "reps_failed"_a = r.reps_failed);
  }, "dgp"_a = "ar", "rho"_a = 0.9, "T"_a = 200, "reps"_a = 1000, "criterion"_a = "BIC",
     "seed"_a = kDefaultSeed, "threads"_a = 1);

  m.def("run_table", [](const std::string& dgp, const std::vector<double>& rhos, const std::vector<int>& Ts, int reps,
                        const std::string& criterion, std::uint64_t seed, int threads,
                        const std::vector<std::string>& methods) {
    TableResult t;
    {
      py::gil_scoped_release release;
      t = run_table(make_config(dgp, rhos, Ts, reps, criterion, seed, threads, methods));
    }
    py::list eff, size;
    for (const auto& s : t.efficiency) eff.append(summary_dict(s));
    for (const auto& s : t.size) size.append(summary_dict(s));
    return py::dict("efficiency"_a = eff, "size"_a = size);
  }, "dgp"_a = "ar", "rhos"_a, "Ts"_a, "reps"_a = 2000, "criterion"_a = "BIC", "seed"_a = kDefaultSeed,
     "threads"_a = 1, "methods"_a = std::vector<std::string>{},
     "Efficiency and size rows over the rho x T grid, as lists of dicts.");
}
