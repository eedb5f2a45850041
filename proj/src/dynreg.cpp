#include "hacdyn/dynreg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "hacdyn/error.hpp"

namespace hacdyn {

const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::BIC: return "BIC";
    case Criterion::AIC: return "AIC";
    case Criterion::Fixed: return "fixed";
  }
  return "?";
}

Criterion parse_criterion(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (t == "BIC") return Criterion::BIC;
  if (t == "AIC") return Criterion::AIC;
  if (t == "FIXED") return Criterion::Fixed;
  throw Error(ErrorCode::InvalidArgument, "unknown criterion '" + text + "'");
}

LaggedDesign build_lagged_design(const Sample& sample, int p, Eigen::Index start) {
  const Eigen::Index T = sample.size();
  const Eigen::Index k = sample.regressors();
  if (p < 0) throw Error(ErrorCode::InvalidArgument, "lag order must be non-negative");
  if (start <= p || start > T) {
    throw Error(ErrorCode::InvalidArgument, "start row must satisfy p < start <= T");
  }
  const Eigen::Index n = T - start + 1;
  const Eigen::Index m = dynreg_parameter_count(p, k);
  if (n <= m) {
    throw Error(ErrorCode::InsufficientData, std::to_string(n) + " rows cannot identify " +
                                                 std::to_string(m) + " coefficients");
  }

  LaggedDesign out;
  out.design.resize(n, m);
  const Eigen::Index r0 = start - 1;  // 0-based row of t = start
  out.response = sample.y.segment(r0, n);
  for (int j = 1; j <= p; ++j) out.design.col(j - 1) = sample.y.segment(r0 - j, n);
  for (int j = 0; j <= p; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) {
      out.design.col(p + j * k + i) = sample.x.col(i).segment(r0 - j, n);
    }
  }
  return out;
}

double ic_penalty(Eigen::Index n, int p, Eigen::Index k, Criterion criterion) {
  const double params = static_cast<double>(dynreg_parameter_count(p, k));
  switch (criterion) {
    case Criterion::BIC: return std::log(static_cast<double>(n)) * params;
    case Criterion::AIC: return 2.0 * params;
    case Criterion::Fixed: break;
  }
  throw Error(ErrorCode::InvalidArgument, "information criterion must be BIC or AIC");
}

double ic_score(double sse, Eigen::Index n, int p, Eigen::Index k, Criterion criterion) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "information criterion needs n >= 2");
  if (!(sse >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sse must be non-negative");
  const double penalty = ic_penalty(n, p, k, criterion);
  if (sse == 0.0) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(n) * std::log(sse) + penalty;
}

int default_max_order(Eigen::Index T) {
  return static_cast<int>(std::min<Eigen::Index>(T / 5, 30));
}

DynRegFit fit_dynreg(const Sample& sample, int p) {
  LaggedDesign d = build_lagged_design(sample, p, p + 1);
  DynRegFit out;
  out.p = p;
  out.k = sample.regressors();
  out.fit = ols_fit(d.design, d.response);
  out.theta_hat = out.fit.beta_hat;
  out.criterion_used = Criterion::Fixed;
  out.n_effective = out.fit.n_obs;
  out.first_row = p + 1;
  return out;
}

std::vector<double> candidate_sse(const Sample& sample, int p_max) {
  if (p_max < 0) throw Error(ErrorCode::InvalidArgument, "p_max must be non-negative");
  const Eigen::Index T = sample.size();
  const Eigen::Index k = sample.regressors();
  const Eigen::Index m_max = dynreg_parameter_count(p_max, k);
  const Eigen::Index start = p_max + 1;
  if (start > T || T - start + 1 <= m_max) {
    throw Error(ErrorCode::InsufficientData, "sample too short for p_max=" + std::to_string(p_max));
  }
  const Eigen::Index n = T - start + 1;
  const Eigen::Index r0 = start - 1;

  // Column order x_t, y_{t-1}, x_{t-1}, y_{t-2}, ... makes each candidate
  // design a leading block, so one factorization of [Z | y] yields every
  // candidate's SSE as a tail sum of Q'y.
  Matrix z(n, m_max + 1);
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < k; ++i) z.col(c++) = sample.x.col(i).segment(r0, n);
  for (int j = 1; j <= p_max; ++j) {
    z.col(c++) = sample.y.segment(r0 - j, n);
    for (Eigen::Index i = 0; i < k; ++i) z.col(c++) = sample.x.col(i).segment(r0 - j, n);
  }
  z.col(c) = sample.y.segment(r0, n);

  Eigen::HouseholderQR<Matrix> qr(std::move(z));
  const Matrix& r = qr.matrixQR();
  const Eigen::Index last = m_max;
  const Eigen::Index depth = std::min<Eigen::Index>(n - 1, last);

  // tail[m] = sum_{i >= m} (Q'y)_i^2, the SSE of the first m columns.
  Vector tail(m_max + 1);
  double acc = 0.0;
  for (Eigen::Index i = depth; i >= 0; --i) {
    const double q = r(i, last);
    acc += q * q;
    if (i <= m_max) tail(i) = acc;
  }
  const double y_norm2 = sample.y.segment(r0, n).squaredNorm();

  double rmax = 0.0;
  for (Eigen::Index i = 0; i < m_max; ++i) rmax = std::max(rmax, std::abs(r(i, i)));

  std::vector<double> out(static_cast<std::size_t>(p_max) + 1);
  bool deficient = false;
  Eigen::Index checked = 0;
  for (int p = 0; p <= p_max; ++p) {
    const Eigen::Index m = dynreg_parameter_count(p, k);
    for (; checked < m; ++checked) {
      if (!(std::abs(r(checked, checked)) > 1e-10 * rmax)) deficient = true;
    }
    if (deficient) {
      out[static_cast<std::size_t>(p)] = std::numeric_limits<double>::infinity();
      continue;
    }
    double sse = tail(m);
    if (sse <= 1e-20 * y_norm2) sse = 0.0;
    out[static_cast<std::size_t>(p)] = sse;
  }
  return out;
}

DynRegFit select_order(const Sample& sample, int p_max, Criterion criterion) {
  if (criterion == Criterion::Fixed) {
    throw Error(ErrorCode::InvalidArgument, "order selection needs BIC or AIC");
  }
  const std::vector<double> sse = candidate_sse(sample, p_max);
  const Eigen::Index n = sample.size() - p_max;
  const Eigen::Index k = sample.regressors();

  std::vector<double> scores(sse.size());
  int best = -1;
  for (int p = 0; p <= p_max; ++p) {
    const double s = sse[static_cast<std::size_t>(p)];
    scores[static_cast<std::size_t>(p)] =
        std::isinf(s) ? std::numeric_limits<double>::infinity() : ic_score(s, n, p, k, criterion);
    if (best < 0 || scores[static_cast<std::size_t>(p)] < scores[static_cast<std::size_t>(best)]) {
      if (!std::isinf(s)) best = p;
    }
  }
  if (best < 0) throw Error(ErrorCode::RankDeficient, "no candidate lag order has a full-rank design");

  DynRegFit out = fit_dynreg(sample, best);
  out.criterion_used = criterion;
  out.scores = std::move(scores);
  return out;
}

TestResult dynreg_t_test(const DynRegFit& fit, double null_value, double level, bool student_t,
                         Eigen::Index regressor) {
  if (regressor < 0 || regressor >= fit.k) throw Error(ErrorCode::InvalidArgument, "regressor index out of range");
  const double stat = ols_t_stat(fit.fit, fit.beta_index(regressor), null_value);
  const double dof = static_cast<double>(fit.fit.n_obs - fit.fit.coefficients());
  const double cv = student_t ? student_t_critical_value(level, dof) : normal_critical_value(level);
  return TestResult{stat, cv, std::abs(stat) > cv, "DynReg", level};
}

double dynreg_forecast(const DynRegFit& fit, std::span<const double> history_y,
                       const Matrix& history_x, const Vector& x_next) {
  const int p = fit.p;
  const Eigen::Index k = fit.k;
  if (x_next.size() != k || history_x.cols() != k) {
    throw Error(ErrorCode::DimensionMismatch, "forecast regressors do not match the fit");
  }
  if (static_cast<Eigen::Index>(history_y.size()) < p || history_x.rows() < p) {
    throw Error(ErrorCode::InsufficientHistory, "forecast needs at least " + std::to_string(p) + " past periods");
  }
  const auto ny = static_cast<Eigen::Index>(history_y.size());
  const Eigen::Index nx = history_x.rows();
  const Vector& th = fit.theta_hat;

  double f = 0.0;
  for (int j = 1; j <= p; ++j) f += th(j - 1) * history_y[static_cast<std::size_t>(ny - j)];
  for (Eigen::Index i = 0; i < k; ++i) f += th(p + i) * x_next(i);
  for (int j = 1; j <= p; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) f += th(p + j * k + i) * history_x(nx - j, i);
  }
  return f;
}

double dynreg_forecast(const DynRegFit& fit, std::span<const double> history_y,
                       std::span<const double> history_x, double x_next) {
  const Matrix hx = Eigen::Map<const Vector>(history_x.data(), static_cast<Eigen::Index>(history_x.size()));
  return dynreg_forecast(fit, history_y, hx, Vector::Constant(1, x_next));
}

}  // namespace hacdyn
