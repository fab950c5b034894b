#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "gwiener/error.hpp"
#include "gwiener/sampling.hpp"
#include "gwiener/spectral.hpp"

namespace gwiener {

enum class CorrectionMethod { Identity, Predefined, Unconstrained, Subspace, Smoothness };

inline const char* to_string(CorrectionMethod m) {
  switch (m) {
    case CorrectionMethod::Identity: return "identity";
    case CorrectionMethod::Predefined: return "PRE";
    case CorrectionMethod::Unconstrained: return "UNC";
    case CorrectionMethod::Subspace: return "SUB";
    case CorrectionMethod::Smoothness: return "SMO";
  }
  return "?";
}

/// K x K correction between sampling and reconstruction. When the filter is
/// diagonalized by U_reduced, `spectral_response` holds that diagonal.
struct CorrectionFilter {
  Eigen::MatrixXd h;
  std::optional<Eigen::VectorXd> spectral_response;
  CorrectionMethod method = CorrectionMethod::Identity;
};

inline CorrectionFilter identity_correction(Eigen::Index k) {
  return {Eigen::MatrixXd::Identity(k, k), Eigen::VectorXd::Ones(k), CorrectionMethod::Identity};
}

/// x_tilde = W H (S^* x + eta)
struct RecoveryPipeline {
  SamplingOperator sampler;
  CorrectionFilter correction;
  ReconstructionOperator reconstructor;

  Eigen::Index signal_size() const { return sampler.cols(); }
  Eigen::Index sample_size() const { return sampler.rows(); }

  Eigen::VectorXd measure(const Eigen::VectorXd& x, const Eigen::VectorXd& eta) const {
    return sampler.s_star * x + eta;
  }
  Eigen::VectorXd recover(const Eigen::VectorXd& y) const { return reconstructor.w * (correction.h * y); }
};

inline RecoveryPipeline make_pipeline(SamplingOperator sampler, CorrectionFilter correction,
                                      ReconstructionOperator reconstructor) {
  const Eigen::Index n = sampler.cols(), k = sampler.rows();
  if (correction.h.rows() != k || correction.h.cols() != k || reconstructor.rows() != n || reconstructor.cols() != k)
    throw Error(ErrorCode::DimensionMismatch, "pipeline dimensions do not chain N -> K -> K -> N");
  return {std::move(sampler), std::move(correction), std::move(reconstructor)};
}

struct WienerOptions {
  /// Ridge added to S^* Gamma_x S + Gamma_eta; lets noiseless runs proceed when that matrix is singular.
  double regularization = 0.0;
  double max_condition = 1e12;
};

inline Eigen::MatrixXd white_noise_covariance(Eigen::Index k, double sigma2) {
  return sigma2 * Eigen::MatrixXd::Identity(k, k);
}

namespace detail {

inline Eigen::LDLT<Eigen::MatrixXd> factor_gram(const Eigen::MatrixXd& gram, const char* which, double max_condition,
                                                const char* hint = "") {
  const double cond = symmetric_condition(gram);
  if (!(cond < max_condition))
    throw Error(ErrorCode::SingularGram, std::string(which) + " is singular or ill-conditioned (cond = " +
                                             std::to_string(cond) + ")" + hint);
  return Eigen::LDLT<Eigen::MatrixXd>(gram);
}

inline void check_chain(const Eigen::MatrixXd& s_star, const Eigen::MatrixXd& w, const Eigen::MatrixXd& gamma_x,
                        const Eigen::MatrixXd& gamma_eta) {
  const Eigen::Index n = s_star.cols(), k = s_star.rows();
  if (gamma_x.rows() != n || gamma_x.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "Gamma_x must be N x N");
  if (gamma_eta.rows() != k || gamma_eta.cols() != k)
    throw Error(ErrorCode::DimensionMismatch, "Gamma_eta must be K x K");
  if (w.rows() != n || w.cols() != k) throw Error(ErrorCode::DimensionMismatch, "W must be N x K");
}

inline bool shares_reduced_basis(const OperatorMeta& a, const OperatorMeta& b) {
  return a.domain == Domain::Spectral && b.domain == Domain::Spectral && a.u_reduced.size() > 0 &&
         a.u_reduced.rows() == b.u_reduced.rows() && a.u_reduced == b.u_reduced;
}

/// Attaches diag(U_r^T H U_r) when H is diagonal in U_r to 1e-8 relative mass.
inline void attach_response(CorrectionFilter& filter, const Eigen::MatrixXd& u_reduced) {
  if (off_diagonal_ratio(filter.h, u_reduced) <= 1e-8)
    filter.spectral_response = (u_reduced.transpose() * filter.h * u_reduced).diagonal();
}

}  // namespace detail

/// Predefined-reconstruction Wiener correction
///   H = (W^* W)^{-1} W^* Gamma_x S (S^* Gamma_x S + Gamma_eta)^{-1},
/// evaluated with two symmetric solves.
inline CorrectionFilter correction_predefined(const SamplingOperator& s, const ReconstructionOperator& w,
                                              const Eigen::MatrixXd& gamma_x, const Eigen::MatrixXd& gamma_eta,
                                              const WienerOptions& options = {}) {
  detail::check_chain(s.s_star, w.w, gamma_x, gamma_eta);
  const Eigen::MatrixXd gx_s = gamma_x * s.s_star.transpose();  // N x K
  Eigen::MatrixXd measured = s.s_star * gx_s + gamma_eta;
  measured.diagonal().array() += options.regularization;
  measured = 0.5 * (measured + measured.transpose());
  const Eigen::MatrixXd wtw = w.w.transpose() * w.w;

  const auto wtw_f = detail::factor_gram(wtw, "W^*W", options.max_condition);
  const auto meas_f = detail::factor_gram(measured, "S^*Gamma_x S + Gamma_eta", options.max_condition,
                                          "; consider a regularization ridge");
  const Eigen::MatrixXd left = wtw_f.solve(w.w.transpose() * gx_s);  // (W^*W)^{-1} W^* Gamma_x S
  CorrectionFilter filter{meas_f.solve(left.transpose()).transpose(), std::nullopt, CorrectionMethod::Predefined};
  if (detail::shares_reduced_basis(s.meta, w.meta)) detail::attach_response(filter, s.meta.u_reduced);
  return filter;
}

struct UnconstrainedSolution {
  CorrectionFilter correction;
  ReconstructionOperator reconstructor;
};

/// Jointly optimal pair H = (S^* Gamma_x S + Gamma_eta)^{-1}, W = Gamma_x S.
inline UnconstrainedSolution correction_unconstrained(const SamplingOperator& s, const Eigen::MatrixXd& gamma_x,
                                                      const Eigen::MatrixXd& gamma_eta, const WienerOptions& options = {}) {
  const Eigen::Index n = s.cols(), k = s.rows();
  if (gamma_x.rows() != n || gamma_x.cols() != n) throw Error(ErrorCode::DimensionMismatch, "Gamma_x must be N x N");
  if (gamma_eta.rows() != k || gamma_eta.cols() != k)
    throw Error(ErrorCode::DimensionMismatch, "Gamma_eta must be K x K");
  const Eigen::MatrixXd gx_s = gamma_x * s.s_star.transpose();
  Eigen::MatrixXd measured = s.s_star * gx_s + gamma_eta;
  measured.diagonal().array() += options.regularization;
  measured = 0.5 * (measured + measured.transpose());
  const auto meas_f = detail::factor_gram(measured, "S^*Gamma_x S + Gamma_eta", options.max_condition,
                                          "; consider a regularization ridge");
  Eigen::MatrixXd h = meas_f.solve(Eigen::MatrixXd::Identity(k, k));
  h = 0.5 * (h + h.transpose());

  OperatorMeta meta = s.meta;
  meta.kernel = "gamma_x*" + s.meta.kernel;
  UnconstrainedSolution out{{std::move(h), std::nullopt, CorrectionMethod::Unconstrained},
                            make_reconstructor(gx_s, std::move(meta))};
  if (s.meta.domain == Domain::Spectral && s.meta.u_reduced.size() > 0)
    detail::attach_response(out.correction, s.meta.u_reduced);
  return out;
}

/// Exact expected squared error
///   tr((WHS^* - I) Gamma_x (WHS^* - I)^T) + tr(WH Gamma_eta H^T W^T).
inline double analytic_mse(const Eigen::MatrixXd& s_star, const Eigen::MatrixXd& h, const Eigen::MatrixXd& w,
                           const Eigen::MatrixXd& gamma_x, const Eigen::MatrixXd& gamma_eta) {
  detail::check_chain(s_star, w, gamma_x, gamma_eta);
  if (h.rows() != s_star.rows() || h.cols() != s_star.rows())
    throw Error(ErrorCode::DimensionMismatch, "H must be K x K");
  const Eigen::MatrixXd wh = w * h;
  Eigen::MatrixXd err = wh * s_star;
  err.diagonal().array() -= 1.0;
  const double signal_term = (err * gamma_x).cwiseProduct(err).sum();
  const double noise_term = (wh * gamma_eta).cwiseProduct(wh).sum();
  return signal_term + noise_term;
}

inline double analytic_mse(const RecoveryPipeline& p, const Eigen::MatrixXd& gamma_x, const Eigen::MatrixXd& gamma_eta) {
  return analytic_mse(p.sampler.s_star, p.correction.h, p.reconstructor.w, gamma_x, gamma_eta);
}

/// dMSE/dH = W^*W H (S^* Gamma_x S + Gamma_eta) - W^* Gamma_x S.
/// This is the conjugate (Wirtinger) derivative; the real-matrix gradient is twice it.
inline Eigen::MatrixXd mse_gradient(const Eigen::MatrixXd& s_star, const Eigen::MatrixXd& h, const Eigen::MatrixXd& w,
                                    const Eigen::MatrixXd& gamma_x, const Eigen::MatrixXd& gamma_eta) {
  detail::check_chain(s_star, w, gamma_x, gamma_eta);
  const Eigen::MatrixXd gx_s = gamma_x * s_star.transpose();
  const Eigen::MatrixXd measured = s_star * gx_s + gamma_eta;
  return (w.transpose() * w) * h * measured - w.transpose() * gx_s;
}

inline Eigen::MatrixXd mse_gradient(const RecoveryPipeline& p, const Eigen::MatrixXd& gamma_x,
                                    const Eigen::MatrixXd& gamma_eta) {
  return mse_gradient(p.sampler.s_star, p.correction.h, p.reconstructor.w, gamma_x, gamma_eta);
}

/// Closed-form graph frequency response of the predefined correction under
/// spectral-domain sampling and reconstruction:
///   H(l_i) = sum_l G_x S W / (R_W(l_i) (sum_l G_x |S|^2 + G_eta(l_i))),
/// sums over the M aliases i + K l. `psd_eta` has length K.
inline Eigen::VectorXd spectral_response_pre(const SpectralBasis& basis, const SpectralKernel& sampling,
                                             const SpectralKernel& reconstruction, const Eigen::VectorXd& psd_x,
                                             const Eigen::VectorXd& psd_eta, Eigen::Index m_ratio) {
  const Eigen::Index k = detail::fold_size(basis, m_ratio);
  if (psd_x.size() != basis.size()) throw Error(ErrorCode::DimensionMismatch, "psd_x must have length N");
  if (psd_eta.size() != k) throw Error(ErrorCode::DimensionMismatch, "psd_eta must have length K");
  const Eigen::VectorXd sv = kernel_values(basis, sampling);
  const Eigen::VectorXd wv = kernel_values(basis, reconstruction);
  Eigen::VectorXd cross = Eigen::VectorXd::Zero(k), power = Eigen::VectorXd::Zero(k), rw = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    cross[i % k] += psd_x[i] * wv[i] * sv[i];
    power[i % k] += psd_x[i] * sv[i] * sv[i];
    rw[i % k] += wv[i] * wv[i];
  }
  Eigen::VectorXd h(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double denom = rw[i] * (power[i] + psd_eta[i]);
    if (denom == 0.0) throw Error(ErrorCode::ZeroDenominator, "H_PRE denominator vanishes at index " + std::to_string(i));
    h[i] = cross[i] / denom;
  }
  return h;
}

struct UnconstrainedResponse {
  Eigen::VectorXd h;             // length K
  Eigen::VectorXd reconstruction;  // W(lambda_i) = G_x(lambda_i) S(lambda_i), length N
};

/// H(l_i) = 1 / (sum_l G_x |S|^2 + G_eta(l_i)), W(l_i) = G_x(l_i) S(l_i).
inline UnconstrainedResponse spectral_response_unc(const SpectralBasis& basis, const SpectralKernel& sampling,
                                                   const Eigen::VectorXd& psd_x, const Eigen::VectorXd& psd_eta,
                                                   Eigen::Index m_ratio) {
  const Eigen::Index k = detail::fold_size(basis, m_ratio);
  if (psd_x.size() != basis.size()) throw Error(ErrorCode::DimensionMismatch, "psd_x must have length N");
  if (psd_eta.size() != k) throw Error(ErrorCode::DimensionMismatch, "psd_eta must have length K");
  const Eigen::VectorXd sv = kernel_values(basis, sampling);
  Eigen::VectorXd power = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < basis.size(); ++i) power[i % k] += psd_x[i] * sv[i] * sv[i];
  UnconstrainedResponse out{Eigen::VectorXd(k), psd_x.cwiseProduct(sv)};
  for (Eigen::Index i = 0; i < k; ++i) {
    const double denom = power[i] + psd_eta[i];
    if (denom == 0.0) throw Error(ErrorCode::ZeroDenominator, "H_UNC denominator vanishes at index " + std::to_string(i));
    out.h[i] = 1.0 / denom;
  }
  return out;
}

}  // namespace gwiener
