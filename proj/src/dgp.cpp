#include "hacdyn/dgp.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "hacdyn/error.hpp"

namespace hacdyn {

const char* to_string(DgpKind kind) {
  switch (kind) {
    case DgpKind::AR_AR: return "ar";
    case DgpKind::AR_MA: return "ma";
    case DgpKind::WEAK_EXO: return "weakexo";
  }
  return "?";
}

DgpKind parse_dgp_kind(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (c != '_' && c != '-') t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (t == "ar" || t == "arar") return DgpKind::AR_AR;
  if (t == "ma" || t == "arma") return DgpKind::AR_MA;
  if (t == "weakexo" || t == "var") return DgpKind::WEAK_EXO;
  throw Error(ErrorCode::InvalidArgument, "unknown DGP '" + text + "' (expected ar, ma or weakexo)");
}

void validate(const DgpSpec& spec) {
  if (spec.T < 2) throw Error(ErrorCode::InvalidArgument, "T must be at least 2");
  if (!std::isfinite(spec.rho) || !std::isfinite(spec.beta) || !std::isfinite(spec.x_coefficient()) ||
      !spec.var_matrix.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "DGP parameters must be finite");
  }
  if (spec.kind == DgpKind::WEAK_EXO) {
    const double radius = spec.var_matrix.eigenvalues().cwiseAbs().maxCoeff();
    if (!(radius < 1.0)) {
      throw Error(ErrorCode::ExplosiveSpec, "VAR matrix spectral radius " + std::to_string(radius) + " >= 1");
    }
    return;
  }
  if (!(std::abs(spec.rho) < 1.0)) throw Error(ErrorCode::ExplosiveSpec, "|rho| must be < 1");
  if (!(std::abs(spec.x_coefficient()) < 1.0)) throw Error(ErrorCode::ExplosiveSpec, "|rho_x| must be < 1");
}

Eigen::Matrix2d stationary_covariance(const Eigen::Matrix2d& var_matrix) {
  const Eigen::Matrix4d kron = Eigen::kroneckerProduct(var_matrix, var_matrix);
  const Eigen::Vector4d vec_i(1.0, 0.0, 0.0, 1.0);
  const Eigen::Vector4d vec_s = (Eigen::Matrix4d::Identity() - kron).partialPivLu().solve(vec_i);
  Eigen::Matrix2d s = Eigen::Map<const Eigen::Matrix2d>(vec_s.data());
  return 0.5 * (s + s.transpose());
}

InitialState stationary_init(const DgpSpec& spec, StreamKey key) {
  validate(spec);
  const ShockStream init(key, StreamRole::Init);
  const double n0 = init.normal(0);
  const double n1 = init.normal(1);
  InitialState s;
  switch (spec.kind) {
    case DgpKind::AR_AR: {
      const double rx = spec.x_coefficient();
      s.x0 = n0 / std::sqrt(1.0 - rx * rx);
      s.u0 = n1 / std::sqrt(1.0 - spec.rho * spec.rho);
      break;
    }
    case DgpKind::AR_MA: {
      const double rx = spec.x_coefficient();
      s.x0 = n0 / std::sqrt(1.0 - rx * rx);
      // u_1 = eps_1 + rho eps_0 only needs the presample shock.
      s.eps0 = n1;
      break;
    }
    case DgpKind::WEAK_EXO: {
      const Eigen::Matrix2d cov = stationary_covariance(spec.var_matrix);
      const Eigen::Matrix2d l = cov.llt().matrixL();
      const Eigen::Vector2d z = l * Eigen::Vector2d(n0, n1);
      s.x0 = z(0);
      s.u0 = z(1);
      break;
    }
  }
  return s;
}

Sample simulate(const DgpSpec& spec, StreamKey key, int horizon_extra) {
  validate(spec);
  if (horizon_extra < 0) throw Error(ErrorCode::InvalidArgument, "horizon_extra must be non-negative");
  const Eigen::Index n = spec.T + horizon_extra;

  Vector ex(n), eu(n);
  ShockStream(key, StreamRole::XShocks).fill(std::span<double>(ex.data(), static_cast<std::size_t>(n)));
  ShockStream(key, StreamRole::UShocks).fill(std::span<double>(eu.data(), static_cast<std::size_t>(n)));
  const InitialState init = stationary_init(spec, key);

  Vector x(n), u(n);
  switch (spec.kind) {
    case DgpKind::AR_AR: {
      const double rx = spec.x_coefficient();
      double xp = init.x0, up = init.u0;
      for (Eigen::Index t = 0; t < n; ++t) {
        xp = rx * xp + ex(t);
        up = spec.rho * up + eu(t);
        x(t) = xp;
        u(t) = up;
      }
      break;
    }
    case DgpKind::AR_MA: {
      const double rx = spec.x_coefficient();
      double xp = init.x0, ep = init.eps0;
      for (Eigen::Index t = 0; t < n; ++t) {
        xp = rx * xp + ex(t);
        x(t) = xp;
        u(t) = eu(t) + spec.rho * ep;
        ep = eu(t);
      }
      break;
    }
    case DgpKind::WEAK_EXO: {
      const Eigen::Matrix2d& a = spec.var_matrix;
      double xp = init.x0, up = init.u0;
      for (Eigen::Index t = 0; t < n; ++t) {
        const double xn = a(0, 0) * xp + a(0, 1) * up + ex(t);
        const double un = a(1, 0) * xp + a(1, 1) * up + eu(t);
        x(t) = xp = xn;
        u(t) = up = un;
      }
      break;
    }
  }

  Sample s;
  s.y = spec.beta * x + u;
  s.x = std::move(x);
  s.u = std::move(u);
  s.meta.spec = spec;
  s.meta.stream = key;
  return s;
}

void write_sample_csv(std::ostream& out, const Sample& sample) {
  out << "t,y,x,u\n";
  char buf[128];
  for (Eigen::Index t = 0; t < sample.size(); ++t) {
    const double u = sample.u.size() == sample.size() ? sample.u(t) : std::nan("");
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g\n", static_cast<long long>(t + 1), sample.y(t),
                  sample.x(t, 0), u);
    out << buf;
  }
}

}  // namespace hacdyn
