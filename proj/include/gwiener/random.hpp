#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace gwiener {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Tags keep the streams of one trial disjoint.
enum class SeedRole : std::uint64_t {
  Graph = 1,
  Signal = 2,
  Noise = 3,
  VertexSet = 4,
  Reduced = 5,
  Retry = 6,
};

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index, SeedRole role) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ index);
  return splitmix64(h ^ (static_cast<std::uint64_t>(role) * 0xd6e8feb86659fd93ULL));
}

inline Eigen::VectorXd standard_normal(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = dist(rng);
  return z;
}

}  // namespace gwiener
