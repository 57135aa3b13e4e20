#pragma once

#include <random>

#include <Eigen/Core>

namespace degen::testing {

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace degen::testing
