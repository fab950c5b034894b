#pragma once

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gwiener/graph.hpp"
#include "gwiener/priors.hpp"
#include "gwiener/random.hpp"
#include "gwiener/sampling.hpp"
#include "gwiener/spectral.hpp"
#include "gwiener/stationarity.hpp"
#include "gwiener/wiener.hpp"

namespace gwiener {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) m.col(c) = standard_normal(rows, rng);
  return m;
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace detail

/// Invariant suite on small sensor graphs (N in {8, 16}). Every check is
/// deterministic for a given seed.
inline std::vector<SelftestCheck> run_selftest(std::uint64_t seed = 1) {
  std::vector<SelftestCheck> out;
  auto record = [&](std::string name, const std::function<std::string()>& body) {
    SelftestCheck c{std::move(name), false, {}};
    try {
      c.detail = body();
      c.passed = c.detail.empty();
    } catch (const std::exception& e) {
      c.detail = e.what();
    }
    out.push_back(std::move(c));
  };

  for (const Eigen::Index n : {Eigen::Index{8}, Eigen::Index{16}}) {
    const std::string tag = "N=" + std::to_string(n);
    const DegreeLaplacian dl = laplacian(gen_sensor_knn(n, 3, derive_seed(seed, n, SeedRole::Graph)));
    auto basis = std::make_shared<const SpectralBasis>(eigendecompose(dl));
    const Eigen::Index ratio = 2, k = n / ratio;
    const SpectralKernel sk = fullband_sampling(basis->lambda_max);
    const SpectralKernel wk = cosine_reconstruction(basis->lambda_max);
    const Eigen::VectorXd psd = kernel_values(*basis, gaussian_psd(basis->lambda_max));
    const Eigen::MatrixXd gx = spectral_matrix(*basis, psd);
    const Eigen::MatrixXd ge = white_noise_covariance(k, 0.3);
    const Eigen::MatrixXd ur = random_orthogonal(k, derive_seed(seed, n, SeedRole::Reduced));
    const auto vertices = random_vertex_set(n, k, derive_seed(seed, n, SeedRole::VertexSet));

    record("perturbation optimality " + tag, [&]() -> std::string {
      const SamplingOperator s = vertex_sampler(*basis, sk, vertices);
      const ReconstructionOperator w = vertex_reconstructor(*basis, wk, vertices);
      const CorrectionFilter h = correction_predefined(s, w, gx, ge);
      const double best = analytic_mse(s.s_star, h.h, w.w, gx, ge);
      const double scale = (w.w.transpose() * gx * s.s()).norm();
      const double grad = mse_gradient(s.s_star, h.h, w.w, gx, ge).norm();
      if (grad > 1e-8 * scale) return "gradient norm " + detail::fmt(grad);
      Rng rng(derive_seed(seed, n, SeedRole::Signal));
      for (int t = 0; t < 50; ++t) {
        Eigen::MatrixXd e = detail::gaussian_matrix(k, k, rng);
        e *= 1e-3 / e.norm();
        if (analytic_mse(s.s_star, h.h + e, w.w, gx, ge) < best - 1e-12) return "perturbation lowered the MSE";
      }
      return {};
    });

    record("dual-path equality " + tag, [&]() -> std::string {
      const SamplingOperator s = spectral_sampler(*basis, sk, ratio, ur);
      const ReconstructionOperator w = spectral_reconstructor(*basis, wk, ratio, ur);
      Rng rng(derive_seed(seed, n, SeedRole::Noise));
      for (int t = 0; t < 10; ++t) {
        const Eigen::VectorXd x = standard_normal(n, rng);
        const Eigen::VectorXd d = standard_normal(k, rng);
        const Eigen::VectorXd c_fold = ur * spectral_fold(*basis, sk, ratio, gft(*basis, x));
        const Eigen::VectorXd x_rep = igft(*basis, spectral_replicate(*basis, wk, ratio, ur.transpose() * d));
        if ((s.s_star * x - c_fold).norm() > 1e-10 * c_fold.norm()) return "sampler paths disagree";
        if ((w.w * d - x_rep).norm() > 1e-10 * x_rep.norm()) return "reconstructor paths disagree";
      }
      return {};
    });

    record("diagonalizability " + tag, [&]() -> std::string {
      const auto report = is_diagonalizable(make_covariance(gx), *basis, 1e-8);
      if (!report.diagonalizable) return "covariance residual " + detail::fmt(report.residual);
      const double comm = commutation_residual(gx, dl.laplacian);
      if (comm > 1e-8) return "commutation residual " + detail::fmt(comm);
      const SamplingOperator s = spectral_sampler(*basis, sk, ratio, ur);
      const ReconstructionOperator w = spectral_reconstructor(*basis, wk, ratio, ur);
      const CorrectionFilter h = correction_predefined(s, w, gx, ge);
      const double off = off_diagonal_ratio(h.h, ur);
      if (off > 1e-8) return "H_PRE off-diagonal mass " + detail::fmt(off);
      const Eigen::VectorXd formula = spectral_response_pre(*basis, sk, wk, psd, Eigen::VectorXd::Constant(k, 0.3), ratio);
      const double diff = ((ur.transpose() * h.h * ur).diagonal() - formula).cwiseAbs().maxCoeff();
      if (diff > 1e-9) return "fold-sum response differs by " + detail::fmt(diff);
      return {};
    });

    record("prior equivalences " + tag, [&]() -> std::string {
      const SamplingOperator s = vertex_sampler(*basis, sk, vertices);
      const ReconstructionOperator w = vertex_reconstructor(*basis, wk, vertices);
      Rng rng(derive_seed(seed, n, SeedRole::Retry));
      const Eigen::MatrixXd a = detail::gaussian_matrix(n, k, rng);
      const Eigen::MatrixXd g = detail::gaussian_matrix(k, k, rng);
      const SubspacePrior p1 = make_subspace_prior(a, Eigen::MatrixXd::Identity(k, k));
      const SubspacePrior p2 = make_subspace_prior(a, g * g.transpose() + Eigen::MatrixXd::Identity(k, k));
      const Eigen::MatrixXd h1 = subspace_correction_noiseless(p1, s, w).h;
      const Eigen::MatrixXd h2 = subspace_correction(p2, s, w, Eigen::MatrixXd::Zero(k, k)).h;
      if ((h1 - h2).norm() > 1e-8 * h1.norm()) return "subspace correction depends on Sigma_d";
      const SmoothnessPrior prior{smoothness_measure(basis->lambda_max, kDefaultSmoothnessEpsilon), 1.0};
      const Eigen::MatrixXd hs = smoothness_correction(prior, *basis, s, w).h;
      const Eigen::MatrixXd hp =
          correction_predefined(s, w, smoothness_covariance(prior, *basis).gamma, Eigen::MatrixXd::Zero(k, k)).h;
      if ((hs - hp).norm() > 1e-9 * hs.norm()) return "smoothness correction differs from predefined Wiener";
      return {};
    });
  }
  return out;
}

}  // namespace gwiener
