#pragma once

#include <iosfwd>
#include <string>

#include "hacdyn/rng.hpp"
#include "hacdyn/sample.hpp"

namespace hacdyn {

// Throws ExplosiveSpec when |rho| >= 1, |rho_x| >= 1 or the VAR matrix has
// spectral radius >= 1; InvalidArgument for T < 2 or non-finite fields.
void validate(const DgpSpec& spec);

/// Stationary covariance of z_t = A z_{t-1} + e_t with e_t ~ N(0, I):
/// the solution of S = A S A' + I.
Eigen::Matrix2d stationary_covariance(const Eigen::Matrix2d& var_matrix);

struct InitialState {
  double x0 = 0.0;
  double u0 = 0.0;
  // Presample MA shock (AR_MA only).
  double eps0 = 0.0;
};

/// Draws (x_0, u_0) from the stationary distribution using the Init stream.
InitialState stationary_init(const DgpSpec& spec, StreamKey key);

/// T + horizon_extra observations t = 1..T+horizon_extra with y = beta x + u.
/// Shock i of replication r depends only on (seed, r, role, i), so two
/// specs that differ only in rho consume identical standard normals.
Sample simulate(const DgpSpec& spec, StreamKey key, int horizon_extra = 0);

// CSV with header t,y,x,u and 17 significant digits.
void write_sample_csv(std::ostream& out, const Sample& sample);

}  // namespace hacdyn
