#include "hacdyn/hac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "hacdyn/error.hpp"
#include "hacdyn/parallel.hpp"
#include "hacdyn/rng.hpp"

namespace hacdyn {

const char* to_string(BandwidthRule rule) {
  switch (rule) {
    case BandwidthRule::NW: return "NW";
    case BandwidthRule::NW_A: return "NW-A";
    case BandwidthRule::NW_LLSW: return "NW-LLSW";
    case BandwidthRule::NW_KV: return "NW-KV";
    case BandwidthRule::M_LLSW: return "M-LLSW";
  }
  return "?";
}

BandwidthRule parse_bandwidth_rule(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(c == '_' ? '-' : static_cast<char>(std::toupper(c)));
  if (t == "NW") return BandwidthRule::NW;
  if (t == "NW-A") return BandwidthRule::NW_A;
  if (t == "NW-LLSW") return BandwidthRule::NW_LLSW;
  if (t == "NW-KV") return BandwidthRule::NW_KV;
  if (t == "M-LLSW") return BandwidthRule::M_LLSW;
  throw Error(ErrorCode::InvalidArgument, "unknown bandwidth rule '" + text + "'");
}

bool is_newey_west(BandwidthRule rule) { return rule != BandwidthRule::M_LLSW; }

int bandwidth(BandwidthRule rule, int T, double m_llsw_coefficient) {
  if (T < 2) throw Error(ErrorCode::InvalidArgument, "bandwidth needs T >= 2");
  const double t = static_cast<double>(T);
  int h = 0;
  switch (rule) {
    case BandwidthRule::NW:
      h = static_cast<int>(std::floor(4.0 * std::pow(t / 100.0, 2.0 / 9.0))) + 1;
      break;
    case BandwidthRule::NW_A:
      h = static_cast<int>(std::floor(0.75 * std::cbrt(t))) + 1;
      break;
    case BandwidthRule::NW_LLSW:
      h = static_cast<int>(std::floor(1.3 * std::sqrt(t))) + 1;
      break;
    case BandwidthRule::NW_KV:
      return T;
    case BandwidthRule::M_LLSW: {
      const double c = std::cbrt(t);
      h = static_cast<int>(std::floor(m_llsw_coefficient * c * c));
      // The cosine estimator needs 1 <= nu <= T - 1.
      h = std::min(h, T - 1);
      break;
    }
  }
  return std::max(h, 1);
}

namespace {

Matrix scores(const RegressionFit& fit, const Matrix& x) {
  if (fit.residuals.size() != x.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "residual length differs from regressor rows");
  }
  return x.array().colwise() * fit.residuals.array();
}

// cos(pi j (t - 1/2) / T) for j = 1..nu, t = 1..T, cached per thread since
// the Monte Carlo harness asks for the same (T, nu) on every replication.
const Matrix& cosine_basis(Eigen::Index T, int nu) {
  thread_local Eigen::Index cached_t = -1;
  thread_local int cached_nu = -1;
  thread_local Matrix basis;
  if (cached_t != T || cached_nu != nu) {
    basis.resize(nu, T);
    const double scale = std::sqrt(2.0 / static_cast<double>(T));
    for (int j = 1; j <= nu; ++j) {
      for (Eigen::Index t = 1; t <= T; ++t) {
        const double arg = std::numbers::pi * j * (static_cast<double>(t) - 0.5) / static_cast<double>(T);
        basis(j - 1, t - 1) = scale * std::cos(arg);
      }
    }
    cached_t = T;
    cached_nu = nu;
  }
  return basis;
}

}  // namespace

LrvEstimate bartlett_lrv(const RegressionFit& fit, const Matrix& x, int h, BandwidthRule tag) {
  const Eigen::Index T = x.rows();
  if (h < 0 || h > T) {
    throw Error(ErrorCode::BandwidthOutOfRange,
                "Bartlett bandwidth " + std::to_string(h) + " outside [0, " + std::to_string(T) + "]");
  }
  const Matrix v = scores(fit, x);
  const double inv_t = 1.0 / static_cast<double>(T);
  const double inv_h1 = 1.0 / static_cast<double>(h + 1);

  Matrix omega;
  if (v.cols() == 1) {
    const auto s = v.col(0);
    double acc = s.squaredNorm() * inv_t;
    for (int tau = 1; tau <= h && tau < T; ++tau) {
      const double gamma = s.tail(T - tau).dot(s.head(T - tau)) * inv_t;
      acc += 2.0 * (1.0 - tau * inv_h1) * gamma;
    }
    omega = Matrix::Constant(1, 1, acc);
  } else {
    omega = v.transpose() * v * inv_t;
    for (int tau = 1; tau <= h && tau < T; ++tau) {
      const Matrix gamma = v.bottomRows(T - tau).transpose() * v.topRows(T - tau) * inv_t;
      omega += (1.0 - tau * inv_h1) * (gamma + gamma.transpose());
    }
    omega = 0.5 * (omega + omega.transpose()).eval();
  }
  return LrvEstimate{std::move(omega), tag, h, std::nullopt};
}

LrvEstimate cosine_lrv(const RegressionFit& fit, const Matrix& x, int nu) {
  const Eigen::Index T = x.rows();
  if (nu < 1 || nu > T - 1) {
    throw Error(ErrorCode::BandwidthOutOfRange,
                "cosine count " + std::to_string(nu) + " outside [1, " + std::to_string(T - 1) + "]");
  }
  const Matrix v = scores(fit, x);
  const Matrix lambda = cosine_basis(T, nu) * v;  // nu x k
  Matrix omega = lambda.transpose() * lambda / static_cast<double>(nu);
  omega = 0.5 * (omega + omega.transpose()).eval();
  return LrvEstimate{std::move(omega), BandwidthRule::M_LLSW, nu, nu};
}

LrvEstimate estimate_lrv(const RegressionFit& fit, const Matrix& x, BandwidthRule rule,
                         double m_llsw_coefficient) {
  const int T = static_cast<int>(x.rows());
  const int h = bandwidth(rule, T, m_llsw_coefficient);
  if (rule == BandwidthRule::M_LLSW) return cosine_lrv(fit, x, h);
  return bartlett_lrv(fit, x, h, rule);
}

double fixed_b_critical_value(double level, int grid_points, int draws, std::uint64_t seed) {
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidArgument, "level must lie in (0, 1)");
  if (grid_points < 200) throw Error(ErrorCode::InvalidArgument, "fixed-b simulation needs >= 200 grid points");
  if (draws < 50000) throw Error(ErrorCode::InvalidArgument, "fixed-b simulation needs >= 50000 draws");

  std::vector<double> stats(static_cast<std::size_t>(draws));
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(grid_points));
  const double inv_n = 1.0 / static_cast<double>(grid_points);

  // Draw d uses replication d of the seed, so the result does not depend on
  // how draws are partitioned.
  parallel_for(stats.size(), 1, [&](std::size_t d) {
    thread_local std::vector<double> path;
    path.resize(static_cast<std::size_t>(grid_points));
    ShockStream(StreamKey{seed, d}, StreamRole::FixedB).fill(path);
    double w = 0.0;
    for (auto& e : path) {
      w += e * inv_sqrt_n;
      e = w;
    }
    const double w1 = w;
    double integral = 0.0;
    for (int i = 0; i < grid_points; ++i) {
      const double bridge = path[static_cast<std::size_t>(i)] - (i + 1) * inv_n * w1;
      integral += bridge * bridge;
    }
    integral *= inv_n;
    stats[d] = std::abs(w1) / std::sqrt(2.0 * integral);
  });

  // Linear interpolation between order statistics.
  const double pos = (1.0 - level) * static_cast<double>(draws - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  std::nth_element(stats.begin(), stats.begin() + static_cast<std::ptrdiff_t>(lo), stats.end());
  const double a = stats[lo];
  if (lo + 1 >= stats.size()) return a;
  const double b = *std::min_element(stats.begin() + static_cast<std::ptrdiff_t>(lo) + 1, stats.end());
  return a + (pos - static_cast<double>(lo)) * (b - a);
}

double default_fixed_b_critical_value(double level) {
  static std::mutex mutex;
  static std::map<double, double> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(level);
  if (it != cache.end()) return it->second;
  const double c = fixed_b_critical_value(level, kFixedBGridPoints, kFixedBDraws, kFixedBSeed);
  cache.emplace(level, c);
  return c;
}

double normal_critical_value(double level) {
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidArgument, "level must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - level / 2.0);
}

double student_t_critical_value(double level, double dof) {
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidArgument, "level must lie in (0, 1)");
  if (!(dof > 0.0)) throw Error(ErrorCode::InvalidArgument, "Student-t needs positive degrees of freedom");
  return boost::math::quantile(boost::math::students_t_distribution<double>(dof), 1.0 - level / 2.0);
}

double hac_critical_value(const LrvEstimate& lrv, double level) {
  switch (lrv.method) {
    case BandwidthRule::NW:
    case BandwidthRule::NW_A:
    case BandwidthRule::NW_LLSW:
      return normal_critical_value(level);
    case BandwidthRule::NW_KV:
      return default_fixed_b_critical_value(level);
    case BandwidthRule::M_LLSW:
      return student_t_critical_value(level, lrv.dof_for_test.value_or(lrv.bandwidth_used));
  }
  return normal_critical_value(level);
}

double hac_variance(const RegressionFit& fit, const LrvEstimate& lrv, Eigen::Index coef_index) {
  const Eigen::Index m = fit.coefficients();
  if (lrv.omega_hat.rows() != m || lrv.omega_hat.cols() != m) {
    throw Error(ErrorCode::DimensionMismatch, "long-run variance does not match the coefficient count");
  }
  if (coef_index < 0 || coef_index >= m) throw Error(ErrorCode::InvalidArgument, "coefficient index out of range");
  const Matrix q_inv = invert_moment_matrix(fit.q_hat);
  const double var = (q_inv * lrv.omega_hat * q_inv)(coef_index, coef_index) /
                     static_cast<double>(fit.n_obs);
  if (var < 0.0) throw Error(ErrorCode::NonPsdLrv, "negative estimated coefficient variance");
  return var;
}

TestResult hac_t_test(const RegressionFit& fit, const LrvEstimate& lrv, Eigen::Index coef_index,
                      double null_value, double level, double critical_value) {
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidArgument, "level must lie in (0, 1)");
  const double var = hac_variance(fit, lrv, coef_index);
  const double num = fit.beta_hat(coef_index) - null_value;
  double stat = 0.0;
  if (var > 0.0) {
    stat = num / std::sqrt(var);
  } else if (num != 0.0) {
    stat = std::copysign(std::numeric_limits<double>::infinity(), num);
  }
  return TestResult{stat, critical_value, std::abs(stat) > critical_value, to_string(lrv.method), level};
}

TestResult hac_t_test(const RegressionFit& fit, const LrvEstimate& lrv, Eigen::Index coef_index,
                      double null_value, double level) {
  return hac_t_test(fit, lrv, coef_index, null_value, level, hac_critical_value(lrv, level));
}

TestResult ols_t_test(const RegressionFit& fit, Eigen::Index coef_index, double null_value,
                      double level) {
  const double stat = ols_t_stat(fit, coef_index, null_value);
  const double cv = normal_critical_value(level);
  return TestResult{stat, cv, std::abs(stat) > cv, "OLS", level};
}

}  // namespace hacdyn
