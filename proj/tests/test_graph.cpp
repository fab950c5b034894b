#include <gtest/gtest.h>

#include "test_helpers.hpp"

using namespace gwiener;
using gwiener::testing::path3;

namespace {

// det(L - tI) for a 3x3 matrix, expanded by cofactors.
double char_poly3(const Eigen::Matrix3d& l, double t) {
  Eigen::Matrix3d m = l - t * Eigen::Matrix3d::Identity();
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

}  // namespace

TEST(BuildGraph, ZeroMatrixIsTwoIsolatedVertices) {
  const Graph g = build_graph(Eigen::MatrixXd::Zero(2, 2));
  EXPECT_EQ(g.size(), 2);
  EXPECT_FALSE(g.connected());
  EXPECT_EQ(connected_components(g), 2u);
}

TEST(BuildGraph, PathIsConnected) {
  const Graph g = path3();
  EXPECT_TRUE(g.connected());
  EXPECT_EQ(g.edge_count(), 2u);
}

TEST(BuildGraph, RejectsInvalidWeights) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
  w(0, 1) = 1;
  w(1, 0) = 2;
  try {
    build_graph(w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonSymmetric);
  }
  w(1, 0) = 1;
  w(0, 0) = 0.5;
  try {
    build_graph(w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonzeroDiagonal);
  }
  w(0, 0) = 0;
  w(0, 1) = w(1, 0) = -1;
  try {
    build_graph(w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeWeight);
  }
}

TEST(Laplacian, PathByHand) {
  const DegreeLaplacian dl = laplacian(path3());
  Eigen::Matrix3d expected;
  expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  EXPECT_EQ(dl.laplacian, Eigen::MatrixXd(expected));
  EXPECT_EQ(dl.degrees, Eigen::Vector3d(1, 2, 1));
}

TEST(Laplacian, PathEigenvaluesAreCharacteristicRoots) {
  const Eigen::Matrix3d l = laplacian(path3()).laplacian;
  // Roots of -t (t - 1) (t - 3).
  for (double t : {0.0, 1.0, 3.0}) EXPECT_NEAR(char_poly3(l, t), 0.0, 1e-12);
  EXPECT_NEAR(char_poly3(l, 2.0), 2.0, 1e-12);  // -2 * 1 * -1
  const SpectralBasis b = eigendecompose(laplacian(path3()));
  EXPECT_NEAR(b.lambda[0], 0.0, 1e-12);
  EXPECT_NEAR(b.lambda[1], 1.0, 1e-12);
  EXPECT_NEAR(b.lambda[2], 3.0, 1e-12);
}

TEST(Laplacian, SingleVertex) {
  const DegreeLaplacian dl = laplacian(build_graph(Eigen::MatrixXd::Zero(1, 1)));
  EXPECT_EQ(dl.laplacian.rows(), 1);
  EXPECT_EQ(dl.laplacian(0, 0), 0.0);
}

TEST(Laplacian, ZeroEigenvaluesCountComponents) {
  // Two disjoint paths (3 + 2 vertices) and one isolated vertex.
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(6, 6);
  w(0, 1) = w(1, 0) = 1;
  w(1, 2) = w(2, 1) = 2;
  w(3, 4) = w(4, 3) = 0.5;
  const Graph g = build_graph(w);
  const SpectralBasis b = eigendecompose(laplacian(g));
  int zeros = 0;
  for (Eigen::Index i = 0; i < b.size(); ++i) zeros += b.lambda[i] < 1e-10;
  EXPECT_EQ(zeros, 3);
  EXPECT_EQ(connected_components(g), 3u);
}

TEST(Generators, KnnWithKEqualNMinusOneIsComplete) {
  const Graph g = gen_sensor_knn(4, 3, 11);
  EXPECT_EQ(g.edge_count(), 6u);
}

TEST(Generators, SensorGraphConnectedWithMinimumDegree) {
  const Graph g = gen_sensor_knn(256, 6, 1);
  EXPECT_TRUE(g.connected());
  const DegreeLaplacian dl = laplacian(g);
  EXPECT_GE(dl.degrees.minCoeff(), 6.0);
}

TEST(Generators, KnnRejectsKAtLeastN) {
  try {
    gen_sensor_knn(2, 3, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(Generators, ErdosRenyiComplete) { EXPECT_EQ(gen_erdos_renyi(5, 1.0, 3).edge_count(), 10u); }

TEST(Generators, ErdosRenyiEdgeCountWithinFourSigma) {
  const double n = 256, p = 0.3;
  const double pairs = n * (n - 1) / 2;
  const double mean = p * pairs, sd = std::sqrt(pairs * p * (1 - p));
  const auto edges = static_cast<double>(gen_erdos_renyi(256, p, 7).edge_count());
  EXPECT_LE(std::abs(edges - mean), 4 * sd);
}

TEST(Generators, ErdosRenyiRejectsZeroProbability) {
  EXPECT_THROW(gen_erdos_renyi(5, 0.0, 1), Error);
}

TEST(Generators, Grids) {
  const Graph g22 = gen_grid2d(2, 2);
  EXPECT_EQ(g22.edge_count(), 4u);
  EXPECT_EQ(laplacian(g22).degrees, Eigen::Vector4d::Constant(2.0));
  const Graph g16 = gen_grid2d(16, 16);
  EXPECT_EQ(g16.size(), 256);
  EXPECT_EQ(g16.edge_count(), 2u * 16u * 15u);
  const Graph line = gen_grid2d(1, 3);
  EXPECT_EQ(line.weights(), path3().weights());
}

TEST(Generators, DeterministicPerSeed) {
  EXPECT_EQ(gen_sensor_knn(64, 6, 5).weights(), gen_sensor_knn(64, 6, 5).weights());
  EXPECT_EQ(gen_erdos_renyi(64, 0.3, 5).weights(), gen_erdos_renyi(64, 0.3, 5).weights());
  EXPECT_NE(gen_erdos_renyi(64, 0.3, 5).weights(), gen_erdos_renyi(64, 0.3, 6).weights());
}

TEST(Generators, LaplaciansArePsdWithZeroRowSums) {
  for (const Graph& g : {gen_sensor_knn(64, 6, 2), gen_erdos_renyi(64, 0.3, 2), gen_grid2d(8, 8)}) {
    const DegreeLaplacian dl = laplacian(g);
    const double scale = dl.laplacian.cwiseAbs().maxCoeff();
    EXPECT_LE(dl.laplacian.rowwise().sum().cwiseAbs().maxCoeff(), 1e-10 * scale);
    EXPECT_EQ(dl.laplacian, dl.laplacian.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dl.laplacian);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9 * es.eigenvalues().maxCoeff());
  }
}
