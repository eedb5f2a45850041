#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "hacdyn/csv.hpp"
#include "hacdyn/dgp.hpp"
#include "hacdyn/error.hpp"
#include "hacdyn/rng.hpp"
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

DgpSpec spec_of(DgpKind kind, double rho, int T) {
  DgpSpec s;
  s.kind = kind;
  s.rho = rho;
  s.T = T;
  return s;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_SUITE("rng") {

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::generate(C{0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::generate(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::generate(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("draws are pure functions of their index") {
  const ShockStream s(StreamKey{9, 3}, StreamRole::UShocks);
  std::vector<double> all(101);
  s.fill(all);
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(s.normal(i) == all[i]);
  std::vector<double> tail(50);
  s.fill(tail, 37);
  for (std::size_t i = 0; i < tail.size(); ++i) CHECK(tail[i] == all[37 + i]);
  const ShockStream again(StreamKey{9, 3}, StreamRole::UShocks);
  CHECK(again.normal(55) == s.normal(55));
}

TEST_CASE("streams for different replications and roles are uncorrelated") {
  const std::size_t n = 100000;
  std::vector<double> a(n), b(n), c(n);
  ShockStream(StreamKey{1, 0}, StreamRole::XShocks).fill(a);
  ShockStream(StreamKey{1, 1}, StreamRole::XShocks).fill(b);
  ShockStream(StreamKey{1, 0}, StreamRole::UShocks).fill(c);
  CHECK(std::abs(correlation(a, b)) < 0.01);
  CHECK(std::abs(correlation(a, c)) < 0.01);
  CHECK(a != b);
}

TEST_CASE("standard normal moments") {
  const std::size_t n = 1000000;
  std::vector<double> z(n);
  ShockStream(StreamKey{77, 5}, StreamRole::XShocks).fill(z);
  double m1 = 0, m2 = 0, m4 = 0, tail = 0;
  for (double v : z) {
    m1 += v;
    m2 += v * v;
    m4 += v * v * v * v;
    tail += std::abs(v) > 1.959963985;
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  tail /= n;
  CHECK(std::abs(m1) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(m2 - 1.0) < 0.005);
  CHECK(std::abs(m4 - 3.0) < 0.03);
  CHECK(std::abs(tail - 0.05) < 0.001);
}

}  // TEST_SUITE

TEST_SUITE("dgp") {

TEST_CASE("explosive and malformed specs are rejected") {
  CHECK(code_of([] { validate(spec_of(DgpKind::AR_AR, 1.0, 50)); }) == ErrorCode::ExplosiveSpec);
  CHECK(code_of([] { validate(spec_of(DgpKind::AR_MA, -1.2, 50)); }) == ErrorCode::ExplosiveSpec);
  DgpSpec s = spec_of(DgpKind::AR_AR, 0.5, 50);
  s.rho_x = 1.0;
  CHECK(code_of([&] { validate(s); }) == ErrorCode::ExplosiveSpec);
  DgpSpec v = spec_of(DgpKind::WEAK_EXO, 0.0, 50);
  v.var_matrix << 1.0, 0.0, 0.0, 0.5;
  CHECK(code_of([&] { validate(v); }) == ErrorCode::ExplosiveSpec);
  CHECK(code_of([] { validate(spec_of(DgpKind::AR_AR, 0.5, 1)); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { parse_dgp_kind("garch"); }) == ErrorCode::InvalidArgument);
  for (DgpKind k : {DgpKind::AR_AR, DgpKind::AR_MA, DgpKind::WEAK_EXO}) CHECK(parse_dgp_kind(to_string(k)) == k);
}

TEST_CASE("simulation is deterministic and y = beta x + u") {
  DgpSpec spec = spec_of(DgpKind::AR_AR, 0.7, 100);
  spec.beta = 1.3;
  const Sample a = simulate(spec, StreamKey{5, 2});
  const Sample b = simulate(spec, StreamKey{5, 2});
  CHECK(a.y == b.y);
  CHECK(a.x == b.x);
  CHECK(a.u == b.u);
  CHECK((a.y - (1.3 * a.x.col(0) + a.u)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.meta.spec.has_value());
  CHECK(a.meta.stream.replication == 2);
  const Sample c = simulate(spec, StreamKey{5, 3});
  CHECK(a.y != c.y);
}

TEST_CASE("extra horizon leaves the estimation sample unchanged") {
  const DgpSpec spec = spec_of(DgpKind::AR_MA, 0.6, 80);
  const Sample a = simulate(spec, StreamKey{1, 1});
  const Sample b = simulate(spec, StreamKey{1, 1}, 1);
  REQUIRE(b.size() == 81);
  CHECK(b.y.head(80) == a.y);
  CHECK(b.x.topRows(80) == a.x);
}

TEST_CASE("common random numbers across rho") {
  // Recover the innovations from the simulated paths; they must be the same
  // draws whatever rho is.
  const int T = 50;
  auto innovations = [&](double rho) {
    const Sample s = simulate(spec_of(DgpKind::AR_AR, rho, T), StreamKey{11, 4});
    Vector ex(T - 1), eu(T - 1);
    for (int t = 1; t < T; ++t) {
      ex(t - 1) = s.x(t, 0) - rho * s.x(t - 1, 0);
      eu(t - 1) = s.u(t) - rho * s.u(t - 1);
    }
    return std::pair{ex, eu};
  };
  const auto [ex0, eu0] = innovations(0.0);
  for (double rho : {0.3, 0.9, 0.99}) {
    const auto [ex, eu] = innovations(rho);
    CHECK((ex - ex0).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((eu - eu0).cwiseAbs().maxCoeff() < 1e-12);
  }
  // The raw shocks are literally the same stream.
  const Sample a = simulate(spec_of(DgpKind::AR_AR, 0.0, T), StreamKey{11, 4});
  std::vector<double> shocks(T);
  ShockStream(StreamKey{11, 4}, StreamRole::UShocks).fill(shocks);
  for (int t = 0; t < T; ++t) CHECK(a.u(t) == shocks[static_cast<std::size_t>(t)]);
}

TEST_CASE("stationary variances") {
  auto pooled_variance = [](DgpKind kind, double rho) {
    double s = 0, ss = 0;
    long n = 0;
    for (std::uint64_t r = 0; r < 1000; ++r) {
      const Sample smp = simulate(spec_of(kind, rho, 1000), StreamKey{3, r});
      s += smp.u.sum();
      ss += smp.u.squaredNorm();
      n += smp.u.size();
    }
    return ss / n - (s / n) * (s / n);
  };
  CHECK(std::abs(pooled_variance(DgpKind::AR_AR, 0.0) - 1.0) < 0.01);
  CHECK(std::abs(pooled_variance(DgpKind::AR_AR, 0.9) / (1.0 / (1.0 - 0.81)) - 1.0) < 0.02);
}

TEST_CASE("stationary initial state") {
  const InitialState s0 = stationary_init(spec_of(DgpKind::AR_AR, 0.0, 10), StreamKey{1, 0});
  CHECK(s0.x0 == ShockStream(StreamKey{1, 0}, StreamRole::Init).normal(0));

  // 1/sqrt(1 - 0.9025) = 3.2026
  CHECK(1.0 / std::sqrt(1.0 - 0.95 * 0.95) == doctest::Approx(3.2026).epsilon(1e-4));
  const int reps = 20000;
  double ss = 0, ss0 = 0;
  for (int r = 0; r < reps; ++r) {
    ss += std::pow(stationary_init(spec_of(DgpKind::AR_AR, 0.95, 10), StreamKey{2, static_cast<std::uint64_t>(r)}).u0, 2);
    ss0 += std::pow(stationary_init(spec_of(DgpKind::AR_AR, 0.0, 10), StreamKey{2, static_cast<std::uint64_t>(r)}).u0, 2);
  }
  CHECK(std::sqrt(ss / reps) == doctest::Approx(3.2026).epsilon(0.03));
  CHECK(ss0 / reps == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("VAR stationary covariance matches a fixed-point iteration") {
  const Eigen::Matrix2d a = DgpSpec{}.var_matrix;
  Eigen::Matrix2d s = Eigen::Matrix2d::Identity();
  for (int i = 0; i < 500; ++i) s = a * s * a.transpose() + Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d lyap = stationary_covariance(a);
  CHECK((lyap - s).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(lyap).eigenvalues().minCoeff() > 0.0);

  // E(x_t u_{t-1}) = (A S)_{01}: x responds to lagged u.
  const double cross = (a * lyap)(0, 1);
  CHECK(std::abs(cross) > 0.1);

  double sum = 0, sum_xx = 0;
  long n = 0;
  for (std::uint64_t r = 0; r < 400; ++r) {
    const Sample smp = simulate(spec_of(DgpKind::WEAK_EXO, 0.0, 500), StreamKey{8, r});
    for (Eigen::Index t = 1; t < smp.size(); ++t) {
      sum += smp.x(t, 0) * smp.u(t - 1);
      ++n;
    }
    sum_xx += smp.x.col(0).squaredNorm() / smp.size();
  }
  CHECK(sum / n == doctest::Approx(cross).epsilon(0.05));
  CHECK(sum_xx / 400 == doctest::Approx(lyap(0, 0)).epsilon(0.05));
}

TEST_CASE("x and u are orthogonal for the AR designs") {
  for (DgpKind kind : {DgpKind::AR_AR, DgpKind::AR_MA}) {
    std::vector<double> xs, us;
    for (std::uint64_t r = 0; r < 200; ++r) {
      const Sample s = simulate(spec_of(kind, 0.5, 500), StreamKey{21, r});
      for (Eigen::Index t = 0; t < s.size(); ++t) {
        xs.push_back(s.x(t, 0));
        us.push_back(s.u(t));
      }
    }
    CHECK(std::abs(correlation(xs, us)) < 3.0 / std::sqrt(static_cast<double>(xs.size())));
  }
}

TEST_CASE("MA(1) disturbance autocorrelation") {
  const double rho = 0.6;
  std::vector<double> a, b1, b2;
  for (std::uint64_t r = 0; r < 200; ++r) {
    const Sample s = simulate(spec_of(DgpKind::AR_MA, rho, 1000), StreamKey{31, r});
    for (Eigen::Index t = 2; t < s.size(); ++t) {
      a.push_back(s.u(t));
      b1.push_back(s.u(t - 1));
      b2.push_back(s.u(t - 2));
    }
  }
  const double se = 1.0 / std::sqrt(static_cast<double>(a.size()));
  CHECK(std::abs(correlation(a, b1) - rho / (1 + rho * rho)) < 4 * se * 1.5);
  CHECK(std::abs(correlation(a, b2)) < 4 * se * 1.5);
}

TEST_CASE("sample CSV round-trips exactly") {
  const Sample s = simulate(spec_of(DgpKind::AR_AR, 0.9, 40), StreamKey{6, 6});
  std::stringstream buf;
  write_sample_csv(buf, s);
  std::string header;
  std::getline(std::stringstream(buf.str()), header);
  CHECK(header == "t,y,x,u");
  const Sample back = csv::read_data_csv(buf);
  CHECK(back.y == s.y);
  CHECK(back.x == s.x);
  CHECK(back.regressors() == 1);
}

}  // TEST_SUITE
