#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gwiener/error.hpp"
#include "gwiener/sampling.hpp"
#include "gwiener/spectral.hpp"
#include "gwiener/stationarity.hpp"
#include "gwiener/wiener.hpp"

namespace gwiener {

/// Signals x = A d with random coefficients d of covariance Sigma_d.
struct SubspacePrior {
  Eigen::MatrixXd a;        // N x K generator, full column rank
  Eigen::MatrixXd sigma_d;  // K x K, SPD
};

inline SubspacePrior make_subspace_prior(Eigen::MatrixXd a, Eigen::MatrixXd sigma_d) {
  if (sigma_d.rows() != a.cols() || sigma_d.cols() != a.cols())
    throw Error(ErrorCode::DimensionMismatch, "Sigma_d must be K x K with K = cols(A)");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() != a.cols()) throw Error(ErrorCode::InvalidArgument, "generator A is rank deficient");
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (sigma_d + sigma_d.transpose()));
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "Sigma_d is not positive definite");
  return {std::move(a), std::move(sigma_d)};
}

/// Generator spanned by the first k Laplacian eigenvectors, Sigma_d = I.
inline SubspacePrior first_k_eigenvectors_prior(const SpectralBasis& basis, Eigen::Index k) {
  if (k < 1 || k > basis.size()) throw Error(ErrorCode::KExceedsN, "subspace dimension out of range");
  return make_subspace_prior(basis.u.leftCols(k), Eigen::MatrixXd::Identity(k, k));
}

inline Eigen::MatrixXd subspace_covariance(const SubspacePrior& prior) {
  Eigen::MatrixXd sigma = prior.a * prior.sigma_d * prior.a.transpose();
  return 0.5 * (sigma + sigma.transpose());
}

/// H = (W^*W)^{-1} W^* A Sigma_d A^* S (S^* A Sigma_d A^* S + Gamma_eta)^{-1},
/// assembled from the K x K cross terms S^* A and W^* A.
inline CorrectionFilter subspace_correction(const SubspacePrior& prior, const SamplingOperator& s,
                                            const ReconstructionOperator& w, const Eigen::MatrixXd& gamma_eta,
                                            const WienerOptions& options = {}) {
  if (prior.a.rows() != s.cols() || w.rows() != s.cols())
    throw Error(ErrorCode::DimensionMismatch, "generator, sampler and reconstructor disagree on N");
  if (gamma_eta.rows() != s.rows() || gamma_eta.cols() != s.rows())
    throw Error(ErrorCode::DimensionMismatch, "Gamma_eta must be K x K");
  const Eigen::MatrixXd sa = s.s_star * prior.a;          // S^* A
  const Eigen::MatrixXd wa = w.w.transpose() * prior.a;   // W^* A
  Eigen::MatrixXd measured = sa * prior.sigma_d * sa.transpose() + gamma_eta;
  measured.diagonal().array() += options.regularization;
  measured = 0.5 * (measured + measured.transpose());
  const auto wtw_f = detail::factor_gram(w.w.transpose() * w.w, "W^*W", options.max_condition);
  const auto meas_f = detail::factor_gram(measured, "S^*A Sigma_d A^*S + Gamma_eta", options.max_condition);
  const Eigen::MatrixXd left = wtw_f.solve(wa * prior.sigma_d * sa.transpose());
  return {meas_f.solve(left.transpose()).transpose(), std::nullopt, CorrectionMethod::Subspace};
}

/// Noiseless reduction H = (W^*W)^{-1} W^* A (S^* A)^{-1}; independent of Sigma_d.
inline CorrectionFilter subspace_correction_noiseless(const SubspacePrior& prior, const SamplingOperator& s,
                                                      const ReconstructionOperator& w,
                                                      const WienerOptions& options = {}) {
  if (prior.a.rows() != s.cols() || w.rows() != s.cols())
    throw Error(ErrorCode::DimensionMismatch, "generator, sampler and reconstructor disagree on N");
  const Eigen::MatrixXd sa = s.s_star * prior.a;
  if (sa.rows() != sa.cols())
    throw Error(ErrorCode::SingularCrossGram, "S^*A is not square (K differs from subspace dimension)");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sa);
  const auto& sv = svd.singularValues();
  const double tiny = s.s_star.norm() * prior.a.norm() / options.max_condition;
  if (!(sv.size() > 0 && sv[sv.size() - 1] > tiny && sv[0] / sv[sv.size() - 1] < options.max_condition))
    throw Error(ErrorCode::SingularCrossGram, "S^*A is singular: the sampling misses the subspace");
  const auto wtw_f = detail::factor_gram(w.w.transpose() * w.w, "W^*W", options.max_condition);
  const Eigen::MatrixXd left = wtw_f.solve(w.w.transpose() * prior.a);  // (W^*W)^{-1} W^* A
  // left * (S^* A)^{-1}  <=>  (S^* A)^T X^T = left^T
  const Eigen::MatrixXd h = sa.transpose().partialPivLu().solve(left.transpose()).transpose();
  return {h, std::nullopt, CorrectionMethod::Subspace};
}

/// Signals with bounded high-pass energy ||V x||^2 <= rho^2, V = U V(Lambda) U^T.
struct SmoothnessPrior {
  SpectralKernel v;
  double rho = 1.0;
};

namespace detail {

inline Eigen::VectorXd smoothness_values(const SmoothnessPrior& prior, const SpectralBasis& basis) {
  if (!(prior.rho > 0.0)) throw Error(ErrorCode::InvalidArgument, "smoothness budget rho must be positive");
  Eigen::VectorXd v = kernel_values(basis, prior.v);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!(v[i] > 0.0))
      throw Error(ErrorCode::KernelNotPositive, "smoothness kernel is not positive at index " + std::to_string(i));
  return v;
}

}  // namespace detail

/// Sigma_x = (rho^2 / N) (V^* V)^{-1}
inline Covariance smoothness_covariance(const SmoothnessPrior& prior, const SpectralBasis& basis) {
  const Eigen::VectorXd v = detail::smoothness_values(prior, basis);
  const double scale = prior.rho * prior.rho / static_cast<double>(basis.size());
  return {spectral_matrix(basis, scale * v.cwiseAbs2().cwiseInverse())};
}

/// H = (W^*W)^{-1} W^* (V^*V)^{-1} S (S^* (V^*V)^{-1} S)^{-1}; rho cancels.
inline CorrectionFilter smoothness_correction(const SmoothnessPrior& prior, const SpectralBasis& basis,
                                              const SamplingOperator& s, const ReconstructionOperator& w,
                                              const WienerOptions& options = {}) {
  if (s.cols() != basis.size() || w.rows() != basis.size())
    throw Error(ErrorCode::DimensionMismatch, "operators disagree with the basis on N");
  const Eigen::VectorXd v = detail::smoothness_values(prior, basis);
  const Eigen::MatrixXd inv_vv = spectral_matrix(basis, v.cwiseAbs2().cwiseInverse());
  const Eigen::MatrixXd p_s = inv_vv * s.s_star.transpose();  // (V^*V)^{-1} S
  Eigen::MatrixXd measured = s.s_star * p_s;
  measured.diagonal().array() += options.regularization;
  measured = 0.5 * (measured + measured.transpose());
  const auto wtw_f = detail::factor_gram(w.w.transpose() * w.w, "W^*W", options.max_condition);
  const auto meas_f = detail::factor_gram(measured, "S^*(V^*V)^{-1}S", options.max_condition);
  const Eigen::MatrixXd left = wtw_f.solve(w.w.transpose() * p_s);
  return {meas_f.solve(left.transpose()).transpose(), std::nullopt, CorrectionMethod::Smoothness};
}

/// Ideal low-pass sampling with no correction and replicated low-pass reconstruction.
inline RecoveryPipeline bandlimited_baseline(const SpectralBasis& basis, Eigen::Index m_ratio,
                                             const Eigen::MatrixXd& u_reduced) {
  const Eigen::Index k = detail::fold_size(basis, m_ratio);
  const SpectralKernel band = bandlimited_sampling(k);
  return make_pipeline(spectral_sampler(basis, band, m_ratio, u_reduced), identity_correction(k),
                       spectral_reconstructor(basis, band, m_ratio, u_reduced));
}

inline RecoveryPipeline bandlimited_baseline(const SpectralBasis& basis, Eigen::Index m_ratio) {
  const Eigen::Index k = detail::fold_size(basis, m_ratio);
  return bandlimited_baseline(basis, m_ratio, Eigen::MatrixXd::Identity(k, k));
}

/// Vertex-domain counterpart: the same low-pass filter before selection and
/// after zero-filling, W = G_BL I_M^T, with no correction.
inline RecoveryPipeline bandlimited_vertex_baseline(const SpectralBasis& basis, const std::vector<Eigen::Index>& vertices) {
  const Eigen::Index k = static_cast<Eigen::Index>(vertices.size());
  const SpectralKernel band = bandlimited_sampling(k);
  return make_pipeline(vertex_sampler(basis, band, vertices), identity_correction(k),
                       vertex_reconstructor(basis, band, vertices));
}

}  // namespace gwiener
