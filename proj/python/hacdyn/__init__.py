"""HAC and dynamic-regression inference for time-series regressions."""

from ._hacdyn import (
    DynRegFit,
    HacdynError,
    LrvEstimate,
    RegressionFit,
    TestResult,
    analytic_re_pred,
    bandwidth,
    bartlett_lrv,
    cosine_lrv,
    dynreg_t_test,
    estimate_lrv,
    fit_dynreg,
    fixed_b_critical_value,
    hac_t_test,
    mspe_experiment,
    ols_fit,
    run_table,
    select_order,
    simulate,
)

__all__ = [
    "DynRegFit",
    "HacdynError",
    "LrvEstimate",
    "RegressionFit",
    "TestResult",
    "analytic_re_pred",
    "bandwidth",
    "bartlett_lrv",
    "cosine_lrv",
    "dynreg_t_test",
    "estimate_lrv",
    "fit_dynreg",
    "fixed_b_critical_value",
    "hac_t_test",
    "mspe_experiment",
    "ols_fit",
    "run_table",
    "select_order",
    "simulate",
]
