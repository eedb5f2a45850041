#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "hacdyn/sample.hpp"

namespace hacdyn::test {

// Independent of the library's Philox streams on purpose.
inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = n(gen);
  }
  return m;
}

inline Vector random_vector(Eigen::Index n, std::uint64_t seed) { return random_matrix(n, 1, seed).col(0); }

inline double min_eigenvalue(const Matrix& s) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(s).eigenvalues().minCoeff();
}

}  // namespace hacdyn::test
