#pragma once

#include <cstdint>
#include <memory>

#include <Eigen/Dense>

#include "gwiener/gwiener.hpp"

namespace gwiener::testing {

inline Graph path3() {
  Eigen::MatrixXd w(3, 3);
  w << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  return build_graph(w);
}

inline Graph cycle(Eigen::Index n) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) w(i, (i + 1) % n) = w((i + 1) % n, i) = 1.0;
  return build_graph(w);
}

inline std::shared_ptr<const SpectralBasis> basis_of(const Graph& g) {
  return std::make_shared<const SpectralBasis>(eigendecompose(laplacian(g)));
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) m.col(c) = standard_normal(rows, rng);
  return m;
}

inline Eigen::MatrixXd random_spd(Eigen::Index n, std::uint64_t seed) {
  const Eigen::MatrixXd g = random_matrix(n, n, seed);
  return g * g.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
}

inline double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max(b.norm(), 1e-300);
  return (a - b).norm() / scale;
}

}  // namespace gwiener::testing
