#include <gtest/gtest.h>

#include "test_helpers.hpp"

using namespace gwiener;
using namespace gwiener::testing;

TEST(Eigendecompose, PathSpectrumAndConstantMode) {
  const SpectralBasis b = eigendecompose(laplacian(path3()));
  EXPECT_NEAR((b.lambda - Eigen::Vector3d(0, 1, 3)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((b.u.col(0) - Eigen::Vector3d::Constant(1 / std::sqrt(3.0))).norm(), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(b.lambda_max, b.lambda[2]);
}

TEST(Eigendecompose, SingleVertex) {
  const SpectralBasis b = eigendecompose(Eigen::MatrixXd::Zero(1, 1));
  EXPECT_EQ(b.u(0, 0), 1.0);
  EXPECT_EQ(b.lambda[0], 0.0);
}

TEST(Eigendecompose, BasisInvariantsOnGeneratedGraphs) {
  for (const Graph& g : {gen_sensor_knn(64, 6, 3), gen_erdos_renyi(48, 0.3, 3), gen_grid2d(6, 8)}) {
    const DegreeLaplacian dl = laplacian(g);
    const SpectralBasis b = eigendecompose(dl);
    const Eigen::Index n = b.size();
    EXPECT_LE((b.u.transpose() * b.u - Eigen::MatrixXd::Identity(n, n)).norm(), 1e-9);
    EXPECT_LE(rel_diff(b.u * b.lambda.asDiagonal() * b.u.transpose(), dl.laplacian), 1e-8);
    EXPECT_LE(b.lambda[0], 1e-9 * b.lambda_max);
    for (Eigen::Index i = 1; i < n; ++i) EXPECT_LE(b.lambda[i - 1], b.lambda[i]);
    // Connected: u_0 proportional to the all-ones vector.
    EXPECT_LE((b.u.col(0) - Eigen::VectorXd::Constant(n, 1 / std::sqrt(double(n)))).norm(), 1e-9);
    // Sign convention: first nonzero entry positive.
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index m = 0; m < n; ++m) {
        if (std::abs(b.u(m, i)) > 1e-10) {
          EXPECT_GT(b.u(m, i), 0.0);
          break;
        }
      }
    }
  }
}

TEST(Eigendecompose, Deterministic) {
  const Eigen::MatrixXd l = laplacian(gen_sensor_knn(64, 6, 4)).laplacian;
  const SpectralBasis a = eigendecompose(l), b = eigendecompose(l);
  EXPECT_EQ(a.u, b.u);
  EXPECT_EQ(a.lambda, b.lambda);
}

TEST(Gft, UnitVectorsAndZero) {
  const SpectralBasis b = eigendecompose(laplacian(cycle(8)));
  const Eigen::VectorXd xhat = gft(b, b.u.col(3));
  EXPECT_LE((xhat - Eigen::VectorXd::Unit(8, 3)).norm(), 1e-12);
  EXPECT_EQ(gft(b, Eigen::VectorXd::Zero(8)), Eigen::VectorXd::Zero(8));
  EXPECT_LE((igft(b, Eigen::VectorXd::Unit(8, 0)) - b.u.col(0)).norm(), 1e-15);
  EXPECT_THROW(gft(b, Eigen::VectorXd::Zero(7)), Error);
  EXPECT_THROW(igft(b, Eigen::VectorXd::Zero(9)), Error);
}

TEST(Gft, AllOnesSpectrumGivesRowSums) {
  const SpectralBasis b = eigendecompose(laplacian(gen_grid2d(3, 4)));
  const Eigen::VectorXd x = igft(b, Eigen::VectorXd::Ones(b.size()));
  for (Eigen::Index m = 0; m < b.size(); ++m) {
    double row = 0.0;
    for (Eigen::Index i = 0; i < b.size(); ++i) row += b.u(m, i);
    EXPECT_NEAR(x[m], row, 1e-12);
  }
}

TEST(Gft, RoundTripAndParseval) {
  const SpectralBasis b = eigendecompose(laplacian(gen_sensor_knn(64, 6, 9)));
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd x = standard_normal(b.size(), rng);
    const Eigen::VectorXd xhat = gft(b, x);
    EXPECT_NEAR(xhat.norm(), x.norm(), 1e-10);
    EXPECT_LE((igft(b, xhat) - x).norm(), 1e-10);
  }
}

TEST(KernelFilter, IdentityAndLaplacian) {
  const DegreeLaplacian dl = laplacian(gen_erdos_renyi(32, 0.3, 1));
  const SpectralBasis b = eigendecompose(dl);
  EXPECT_LE((kernel_filter_matrix(b, constant_kernel(1.0)) - Eigen::MatrixXd::Identity(32, 32)).norm(), 1e-10);
  const SpectralKernel lam{"lambda", [](double l, Eigen::Index) { return l; }};
  EXPECT_LE(rel_diff(kernel_filter_matrix(b, lam), dl.laplacian), 1e-8);
}

TEST(KernelFilter, FiltersCommuteAndCompose) {
  const SpectralBasis b = eigendecompose(laplacian(gen_sensor_knn(40, 6, 2)));
  const SpectralKernel f = cosine_reconstruction(b.lambda_max);
  const SpectralKernel g = gaussian_psd(b.lambda_max);
  const SpectralKernel fg{"fg", [&](double l, Eigen::Index i) { return f(l, i) * g(l, i); }};
  const Eigen::MatrixXd a = kernel_filter_matrix(b, f), c = kernel_filter_matrix(b, g);
  EXPECT_LE((a * c - kernel_filter_matrix(b, fg)).norm(), 1e-8);
  EXPECT_LE((a * c - c * a).norm(), 1e-8);
}

TEST(KernelFilter, RejectsNonFinite) {
  const SpectralBasis b = eigendecompose(laplacian(path3()));
  const SpectralKernel bad{"bad", [](double l, Eigen::Index) { return 1.0 / l; }};
  try {
    kernel_filter_matrix(b, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteKernelValue);
  }
}

TEST(KernelCatalog, ExperimentResponses) {
  const double lmax = 7.5;
  EXPECT_DOUBLE_EQ(fullband_sampling_response(0.0, lmax), 2.0);
  EXPECT_DOUBLE_EQ(fullband_sampling_response(lmax, lmax), 1.0);
  EXPECT_DOUBLE_EQ(fullband_sampling_response(lmax / 2, lmax), 1.0);
  EXPECT_DOUBLE_EQ(fullband_sampling_response(lmax / 4, lmax), 1.5);
  EXPECT_DOUBLE_EQ(cosine_reconstruction_response(0.0, lmax), 1.0);
  EXPECT_NEAR(cosine_reconstruction_response(lmax, lmax), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(gaussian_psd_response(lmax / 2, lmax), 1.0);
  EXPECT_NEAR(gaussian_psd_response(0.0, lmax), std::exp(-lmax), 1e-15);
  EXPECT_DOUBLE_EQ(smoothness_response(0.0, lmax, 0.1), 0.1);
  EXPECT_DOUBLE_EQ(smoothness_response(lmax, lmax, 0.1), 1.1);
  const SpectralKernel bl = bandlimited_sampling(3);
  EXPECT_EQ(bl(100.0, 2), 1.0);
  EXPECT_EQ(bl(0.0, 3), 0.0);
}

TEST(KernelCatalog, CosineFilterHasUnitDcResponse) {
  const SpectralBasis b = eigendecompose(laplacian(gen_grid2d(4, 4)));
  const Eigen::MatrixXd g = kernel_filter_matrix(b, cosine_reconstruction(b.lambda_max));
  EXPECT_NEAR(b.u.col(0).dot(g * b.u.col(0)), 1.0, 1e-12);
}

TEST(KernelCatalog, LookupByName) {
  const SpectralBasis b = eigendecompose(laplacian(gen_grid2d(4, 4)));
  for (const auto& name : kernel_names()) EXPECT_EQ(kernel_by_name(name, b, 4).name, name);
  try {
    kernel_by_name("nope", b, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownKernel);
  }
}
