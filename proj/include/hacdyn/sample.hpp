#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace hacdyn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class DgpKind {
  AR_AR,     // AR(1) regressor, AR(1) disturbance
  AR_MA,     // AR(1) regressor, MA(1) disturbance
  WEAK_EXO,  // (x, u) jointly VAR(1)
};

const char* to_string(DgpKind kind);
DgpKind parse_dgp_kind(const std::string& text);

struct DgpSpec {
  DgpKind kind = DgpKind::AR_AR;
  double rho = 0.0;
  // AR coefficient of x when it differs from rho (negative-rho MA design).
  std::optional<double> rho_x;
  double beta = 1.0;
  int T = 200;
  // WEAK_EXO only: (x_t, u_t)' = A (x_{t-1}, u_{t-1})' + e_t.
  Eigen::Matrix2d var_matrix = (Eigen::Matrix2d() << 0.5, 0.2, 0.3, 0.4).finished();

  double x_coefficient() const { return rho_x.value_or(rho); }
};

// Identifies one replication's family of shock streams.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
};

struct SampleMeta {
  std::optional<DgpSpec> spec;
  StreamKey stream;
};

// One (y, x) realization. `u` holds the disturbance path when the sample was
// simulated and is empty for user-supplied data.
struct Sample {
  Vector y;
  Matrix x;
  Vector u;
  SampleMeta meta;

  Eigen::Index size() const { return y.size(); }
  Eigen::Index regressors() const { return x.cols(); }
};

// Validates length agreement, T >= 2 and finiteness.
Sample make_sample(Vector y, Matrix x, Vector u = Vector());

}  // namespace hacdyn
