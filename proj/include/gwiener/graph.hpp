#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gwiener/error.hpp"
#include "gwiener/random.hpp"

namespace gwiener {

/// Weighted undirected graph stored as a dense symmetric adjacency matrix.
class Graph {
 public:
  Graph() = default;

  Eigen::Index size() const { return weights_.rows(); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  bool connected() const { return connected_; }

  /// Number of undirected edges (nonzero upper-triangular weights).
  std::size_t edge_count() const {
    std::size_t edges = 0;
    for (Eigen::Index m = 0; m < size(); ++m)
      for (Eigen::Index n = m + 1; n < size(); ++n)
        if (weights_(m, n) != 0.0) ++edges;
    return edges;
  }

 private:
  friend Graph build_graph(const Eigen::MatrixXd& weights);

  Eigen::MatrixXd weights_;
  bool connected_ = false;
};

struct DegreeLaplacian {
  Eigen::VectorXd degrees;
  Eigen::MatrixXd laplacian;
};

namespace detail {

inline std::size_t count_components(const Eigen::MatrixXd& w) {
  const Eigen::Index n = w.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  std::size_t components = static_cast<std::size_t>(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = m + 1; k < n; ++k) {
      if (w(m, k) == 0.0) continue;
      const auto a = find(m), b = find(k);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
  }
  return components;
}

}  // namespace detail

/// Number of connected components of the graph.
inline std::size_t connected_components(const Graph& g) {
  return detail::count_components(g.weights());
}

/// Validates a weight matrix. Connectivity is recorded, not enforced.
inline Graph build_graph(const Eigen::MatrixXd& weights) {
  if (weights.rows() != weights.cols() || weights.rows() == 0)
    throw Error(ErrorCode::DimensionMismatch, "weight matrix must be square and non-empty");
  const Eigen::Index n = weights.rows();
  for (Eigen::Index m = 0; m < n; ++m) {
    if (weights(m, m) != 0.0)
      throw Error(ErrorCode::NonzeroDiagonal, "weights(" + std::to_string(m) + "," + std::to_string(m) + ") != 0");
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!std::isfinite(weights(m, k)))
        throw Error(ErrorCode::InvalidArgument, "non-finite weight");
      if (weights(m, k) < 0.0)
        throw Error(ErrorCode::NegativeWeight, "weights(" + std::to_string(m) + "," + std::to_string(k) + ") < 0");
      if (std::abs(weights(m, k) - weights(k, m)) > 1e-12)
        throw Error(ErrorCode::NonSymmetric, "weights(" + std::to_string(m) + "," + std::to_string(k) + ") != weights(" +
                                                 std::to_string(k) + "," + std::to_string(m) + ")");
    }
  }
  Graph g;
  // Symmetrize exactly so downstream eigen-solvers see a bitwise-symmetric matrix.
  g.weights_ = 0.5 * (weights + weights.transpose());
  g.connected_ = detail::count_components(g.weights_) == 1;
  return g;
}

/// L = D - A.
inline DegreeLaplacian laplacian(const Graph& g) {
  DegreeLaplacian dl;
  dl.degrees = g.weights().rowwise().sum();
  dl.laplacian = -g.weights();
  dl.laplacian.diagonal() += dl.degrees;
  return dl;
}

inline constexpr int kGeneratorRetries = 100;

/// Symmetrized k-nearest-neighbour graph over points uniform on the unit square.
/// Unweighted; reseeds until connected.
inline Graph gen_sensor_knn(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  if (k < 1 || n <= k)
    throw Error(ErrorCode::InvalidArgument, "sensor graph requires n > k >= 1");
  for (int attempt = 0; attempt < kGeneratorRetries; ++attempt) {
    Rng rng(attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt), SeedRole::Retry));
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    Eigen::MatrixX2d pts(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      pts(i, 0) = coord(rng);
      pts(i, 1) = coord(rng);
    }
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::vector<double> dist(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) dist[j] = (pts.row(i) - pts.row(j)).squaredNorm();
      std::iota(order.begin(), order.end(), Eigen::Index{0});
      // Ties broken by index so the neighbour list is reproducible.
      std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return dist[a] < dist[b];
      });
      Eigen::Index taken = 0;
      for (Eigen::Index j : order) {
        if (j == i) continue;
        w(i, j) = w(j, i) = 1.0;
        if (++taken == k) break;
      }
    }
    Graph g = build_graph(w);
    if (g.connected()) return g;
  }
  throw Error(ErrorCode::DisconnectedAfterRetries, "sensor graph stayed disconnected after retries");
}

/// G(n, p) with unit weights; reseeds until connected.
inline Graph gen_erdos_renyi(Eigen::Index n, double p, std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "edge probability must lie in (0, 1]");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  for (int attempt = 0; attempt < kGeneratorRetries; ++attempt) {
    Rng rng(attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt), SeedRole::Retry));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j)
        if (coin(rng) < p) w(i, j) = w(j, i) = 1.0;
    Graph g = build_graph(w);
    if (g.connected()) return g;
  }
  throw Error(ErrorCode::DisconnectedAfterRetries, "Erdos-Renyi graph stayed disconnected after retries");
}

/// 4-neighbour lattice with unit weights; vertex (r, c) has index r * cols + c.
inline Graph gen_grid2d(Eigen::Index rows, Eigen::Index cols) {
  if (rows < 1 || cols < 1) throw Error(ErrorCode::InvalidArgument, "grid needs rows, cols >= 1");
  const Eigen::Index n = rows * cols;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Eigen::Index v = r * cols + c;
      if (c + 1 < cols) w(v, v + 1) = w(v + 1, v) = 1.0;
      if (r + 1 < rows) w(v, v + cols) = w(v + cols, v) = 1.0;
    }
  }
  return build_graph(w);
}

}  // namespace gwiener
