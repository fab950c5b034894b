#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gwiener/error.hpp"
#include "gwiener/graph.hpp"
#include "gwiener/random.hpp"
#include "gwiener/spectral.hpp"

namespace gwiener {

using Complex = std::complex<double>;

/// Zero-mean graph wide-sense stationary process, fully described by its PSD
/// over the shared Laplacian eigenbasis.
struct GwssProcess {
  std::shared_ptr<const SpectralBasis> basis;
  Eigen::VectorXd psd;

  Eigen::Index size() const { return psd.size(); }
};

/// Symmetric positive semidefinite covariance.
struct Covariance {
  Eigen::MatrixXd gamma;
};

inline GwssProcess make_process(std::shared_ptr<const SpectralBasis> basis, Eigen::VectorXd psd) {
  if (!basis) throw Error(ErrorCode::InvalidArgument, "process needs a basis");
  if (psd.size() != basis->size()) throw Error(ErrorCode::DimensionMismatch, "PSD length differs from N");
  for (Eigen::Index i = 0; i < psd.size(); ++i)
    if (!(psd[i] >= 0.0) || !std::isfinite(psd[i]))
      throw Error(ErrorCode::InvalidArgument, "PSD must be finite and nonnegative (index " + std::to_string(i) + ")");
  return {std::move(basis), std::move(psd)};
}

inline GwssProcess make_process(std::shared_ptr<const SpectralBasis> basis, const SpectralKernel& psd_kernel) {
  Eigen::VectorXd psd = kernel_values(*basis, psd_kernel);
  return make_process(std::move(basis), std::move(psd));
}

/// Checks symmetry (1e-10 relative) and eigenvalues >= -1e-9 * trace.
inline Covariance make_covariance(const Eigen::MatrixXd& gamma) {
  if (gamma.rows() != gamma.cols()) throw Error(ErrorCode::DimensionMismatch, "covariance must be square");
  const double scale = std::max(gamma.cwiseAbs().maxCoeff(), 1.0);
  if ((gamma - gamma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw Error(ErrorCode::NonSymmetric, "covariance is not symmetric");
  Eigen::MatrixXd sym = 0.5 * (gamma + gamma.transpose());
  if (sym.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    const double floor = -1e-9 * std::max(std::abs(sym.trace()), 1e-300);
    if (solver.eigenvalues().minCoeff() < floor)
      throw Error(ErrorCode::InvalidArgument, "covariance is not positive semidefinite");
  }
  return {std::move(sym)};
}

/// Gamma = U diag(psd) U^T
inline Covariance covariance_from_psd(const GwssProcess& process) {
  return {spectral_matrix(*process.basis, process.psd)};
}

struct DiagonalizabilityReport {
  bool diagonalizable = false;
  double residual = 0.0;  // off-diagonal Frobenius mass of U^T Gamma U, relative to total
};

inline DiagonalizabilityReport is_diagonalizable(const Covariance& gamma, const SpectralBasis& basis, double tol) {
  if (gamma.gamma.rows() != basis.size() || gamma.gamma.cols() != basis.size())
    throw Error(ErrorCode::DimensionMismatch, "covariance size differs from N");
  DiagonalizabilityReport report;
  report.residual = off_diagonal_ratio(gamma.gamma, basis.u);
  report.diagonalizable = report.residual <= tol;
  return report;
}

/// ||Gamma L - L Gamma||_F / (||Gamma||_F ||L||_F)
inline double commutation_residual(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& laplacian) {
  const double scale = gamma.norm() * laplacian.norm();
  if (scale == 0.0) return 0.0;
  return (gamma * laplacian - laplacian * gamma).norm() / scale;
}

// Modulation operator and the GWSS_M covariance structure.

/// Modulation frame with columns exp(j 2 pi k / N) * 1.
inline Eigen::MatrixXcd modulation_frame(Eigen::Index n) {
  Eigen::MatrixXcd frame(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    frame.col(k).setConstant(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n)));
  return frame;
}

/// x * delta_n = M diag(u_0[n], ..., u_{N-1}[n]) U^T x
inline Eigen::VectorXcd modulate(const SpectralBasis& basis, const Eigen::VectorXd& x, Eigen::Index vertex) {
  if (vertex < 0 || vertex >= basis.size())
    throw Error(ErrorCode::IndexOutOfRange, "modulation vertex " + std::to_string(vertex) + " out of range");
  const Eigen::VectorXd xhat = gft(basis, x);
  const Eigen::VectorXcd weighted = (basis.u.row(vertex).transpose().cwiseProduct(xhat)).cast<Complex>();
  return modulation_frame(basis.size()) * weighted;
}

/// Xi[i][l] = exp(-j 2 pi (i - l) / N)
inline Eigen::MatrixXcd xi_matrix(Eigen::Index n) {
  Eigen::MatrixXcd xi(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index l = 0; l < n; ++l)
      xi(i, l) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(i - l) / static_cast<double>(n));
  return xi;
}

/// U (Gamma_hat o Xi) U^T: covariance of the modulated process.
inline Eigen::MatrixXcd modulated_covariance(const SpectralBasis& basis, const Eigen::MatrixXd& gamma_hat) {
  const Eigen::MatrixXcd masked = gamma_hat.cast<Complex>().cwiseProduct(xi_matrix(basis.size()));
  const Eigen::MatrixXcd u = basis.u.cast<Complex>();
  return u * masked * u.adjoint();
}

// Energy-preserving translation operator (GWSS_T).

/// rho_G = max_m sqrt(2 d_m (d_m + dbar_m)), dbar_m = sum_n a_mn d_n / d_m.
/// Isolated vertices contribute zero.
inline double translation_rho(const DegreeLaplacian& dl) {
  const Eigen::VectorXd& d = dl.degrees;
  Eigen::MatrixXd adjacency = -dl.laplacian;
  adjacency.diagonal().setZero();
  const Eigen::VectorXd neighbour_degree_sum = adjacency * d;
  double rho = 0.0;
  for (Eigen::Index m = 0; m < d.size(); ++m) {
    if (d[m] <= 0.0) continue;
    const double dbar = neighbour_degree_sum[m] / d[m];
    rho = std::max(rho, std::sqrt(2.0 * d[m] * (d[m] + dbar)));
  }
  return rho;
}

struct TranslationOperator {
  Eigen::MatrixXcd t;
  double rho = 0.0;
};

/// T_G = U exp(j pi sqrt(Lambda / rho_G)) U^T
inline TranslationOperator translation_operator(const SpectralBasis& basis, const DegreeLaplacian& dl) {
  const double rho = translation_rho(dl);
  if (rho <= 0.0) throw Error(ErrorCode::InvalidArgument, "translation operator needs at least one edge");
  Eigen::VectorXcd phase(basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i)
    phase[i] = std::polar(1.0, std::numbers::pi * std::sqrt(basis.lambda[i] / rho));
  const Eigen::MatrixXcd u = basis.u.cast<Complex>();
  return {u * phase.asDiagonal() * u.adjoint(), rho};
}

/// Theta[i][l] = exp(j pi (sqrt(lambda_i / rho) - sqrt(lambda_l / rho)))
inline Eigen::MatrixXcd theta_matrix(const SpectralBasis& basis, double rho) {
  const Eigen::Index n = basis.size();
  Eigen::MatrixXcd theta(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index l = 0; l < n; ++l)
      theta(i, l) = std::polar(1.0, std::numbers::pi * (std::sqrt(basis.lambda[i] / rho) - std::sqrt(basis.lambda[l] / rho)));
  return theta;
}

// Sampling, estimation, noise.

/// x = U diag(sqrt(psd)) z with z ~ N(0, I) drawn from `seed`.
inline Eigen::VectorXd sample_signal(const GwssProcess& process, std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::VectorXd z = standard_normal(process.size(), rng);
  const Eigen::VectorXd amplitude = process.psd.cwiseMax(0.0).cwiseSqrt();
  return process.basis->u * amplitude.cwiseProduct(z);
}

/// Diagonal-projection estimate psd_hat[i] = mean_s (u_i^T x_s)^2.
inline Eigen::VectorXd estimate_psd(const std::vector<Eigen::VectorXd>& samples, const SpectralBasis& basis) {
  if (samples.empty()) throw Error(ErrorCode::EmptySampleSet, "PSD estimation needs at least one sample");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(basis.size());
  for (const auto& x : samples) acc += gft(basis, x).cwiseAbs2();
  return acc / static_cast<double>(samples.size());
}

/// Flat-PSD white noise. A flat PSD is diagonal in every orthonormal basis, so
/// the canonical basis is used.
inline GwssProcess gwss_noise(Eigen::Index n, double sigma2) {
  if (!(sigma2 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise variance must be nonnegative");
  auto basis = std::make_shared<SpectralBasis>();
  basis->u = Eigen::MatrixXd::Identity(n, n);
  basis->lambda = Eigen::VectorXd::Zero(n);
  return make_process(std::move(basis), Eigen::VectorXd::Constant(n, sigma2));
}

}  // namespace gwiener
