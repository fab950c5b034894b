#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gwiener/error.hpp"
#include "gwiener/random.hpp"
#include "gwiener/spectral.hpp"

namespace gwiener {

enum class Domain { Vertex, Spectral, Custom };

inline const char* to_string(Domain d) {
  switch (d) {
    case Domain::Vertex: return "vertex";
    case Domain::Spectral: return "spectral";
    case Domain::Custom: return "custom";
  }
  return "?";
}

/// Provenance of a sampling or reconstruction operator.
struct OperatorMeta {
  Domain domain = Domain::Custom;
  std::vector<Eigen::Index> vertices;  // vertex domain
  Eigen::Index fold_ratio = 1;         // spectral domain
  std::string kernel;
  Eigen::MatrixXd u_reduced;           // spectral domain, K x K
};

/// K x N map c = S^* x.
struct SamplingOperator {
  Eigen::MatrixXd s_star;
  OperatorMeta meta;
  double gram_condition = 0.0;  // cond(S^* S)

  Eigen::Index rows() const { return s_star.rows(); }
  Eigen::Index cols() const { return s_star.cols(); }
  /// S = (S^*)^T, the N x K analysis frame.
  Eigen::MatrixXd s() const { return s_star.transpose(); }
};

/// N x K map x = W d.
struct ReconstructionOperator {
  Eigen::MatrixXd w;
  OperatorMeta meta;
  double gram_condition = 0.0;  // cond(W^* W)

  Eigen::Index rows() const { return w.rows(); }
  Eigen::Index cols() const { return w.cols(); }
};

/// Spectral condition number of a symmetric matrix; infinity when not positive definite.
inline double symmetric_condition(const Eigen::MatrixXd& gram) {
  if (gram.rows() == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  const double lo = solver.eigenvalues().minCoeff();
  const double hi = solver.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

inline SamplingOperator make_sampler(Eigen::MatrixXd s_star, OperatorMeta meta = {}) {
  if (s_star.rows() > s_star.cols())
    throw Error(ErrorCode::KExceedsN, "sampling operator has more rows than columns");
  SamplingOperator op{std::move(s_star), std::move(meta), 0.0};
  op.gram_condition = symmetric_condition(op.s_star * op.s_star.transpose());
  return op;
}

inline ReconstructionOperator make_reconstructor(Eigen::MatrixXd w, OperatorMeta meta = {}) {
  if (w.cols() > w.rows())
    throw Error(ErrorCode::KExceedsN, "reconstruction operator has more columns than rows");
  ReconstructionOperator op{std::move(w), std::move(meta), 0.0};
  op.gram_condition = symmetric_condition(op.w.transpose() * op.w);
  return op;
}

namespace detail {

inline void check_vertex_set(const std::vector<Eigen::Index>& vertices, Eigen::Index n) {
  if (vertices.empty()) throw Error(ErrorCode::InvalidArgument, "vertex set is empty");
  if (static_cast<Eigen::Index>(vertices.size()) > n) throw Error(ErrorCode::KExceedsN, "more vertices than N");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (Eigen::Index v : vertices) {
    if (v < 0 || v >= n) throw Error(ErrorCode::IndexOutOfRange, "vertex " + std::to_string(v) + " out of range");
    if (seen[static_cast<std::size_t>(v)])
      throw Error(ErrorCode::DuplicateVertex, "vertex " + std::to_string(v) + " listed twice");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

inline Eigen::Index fold_size(const SpectralBasis& basis, Eigen::Index m_ratio) {
  if (m_ratio < 1) throw Error(ErrorCode::InvalidArgument, "sampling ratio must be >= 1");
  if (basis.size() % m_ratio != 0)
    throw Error(ErrorCode::NotDivisible, "N = " + std::to_string(basis.size()) + " is not divisible by M = " +
                                             std::to_string(m_ratio));
  return basis.size() / m_ratio;
}

inline void check_orthogonal(const Eigen::MatrixXd& q, Eigen::Index k) {
  if (q.rows() != k || q.cols() != k)
    throw Error(ErrorCode::DimensionMismatch, "U_reduced must be K x K with K = " + std::to_string(k));
  if ((q.transpose() * q - Eigen::MatrixXd::Identity(k, k)).norm() > 1e-9)
    throw Error(ErrorCode::NonUnitaryReduced, "U_reduced is not orthogonal");
}

}  // namespace detail

/// I_M as a K x N selection matrix.
inline Eigen::MatrixXd selection_matrix(const std::vector<Eigen::Index>& vertices, Eigen::Index n) {
  detail::check_vertex_set(vertices, n);
  Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(vertices.size()), n);
  for (std::size_t r = 0; r < vertices.size(); ++r) sel(static_cast<Eigen::Index>(r), vertices[r]) = 1.0;
  return sel;
}

/// S^* = I_M G, where G is the prefilter (identity when absent).
inline SamplingOperator vertex_sampler(const SpectralBasis& basis, const std::optional<SpectralKernel>& prefilter,
                                       const std::vector<Eigen::Index>& vertices) {
  const Eigen::MatrixXd sel = selection_matrix(vertices, basis.size());
  OperatorMeta meta{Domain::Vertex, vertices, 1, prefilter ? prefilter->name : "none", {}};
  if (!prefilter) return make_sampler(sel, std::move(meta));
  return make_sampler(sel * kernel_filter_matrix(basis, *prefilter), std::move(meta));
}

/// W = G I_M^T: upsample onto the vertex set, then filter.
inline ReconstructionOperator vertex_reconstructor(const SpectralBasis& basis, const std::optional<SpectralKernel>& kernel,
                                                   const std::vector<Eigen::Index>& vertices) {
  const Eigen::MatrixXd up = selection_matrix(vertices, basis.size()).transpose();
  OperatorMeta meta{Domain::Vertex, vertices, 1, kernel ? kernel->name : "none", {}};
  if (!kernel) return make_reconstructor(up, std::move(meta));
  return make_reconstructor(kernel_filter_matrix(basis, *kernel) * up, std::move(meta));
}

/// Uniform k-subset of {0..n-1} in ascending order.
inline std::vector<Eigen::Index> random_vertex_set(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  if (k > n) throw Error(ErrorCode::KExceedsN, "cannot pick " + std::to_string(k) + " of " + std::to_string(n));
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "vertex set size must be >= 1");
  std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Eigen::Index{0});
  Rng rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(k));
  std::sort(all.begin(), all.end());
  return all;
}

/// c_hat(lambda_i) = sum_l S(lambda_{i+Kl}) x_hat(lambda_{i+Kl}), K = N / M.
inline Eigen::VectorXd spectral_fold(const SpectralBasis& basis, const SpectralKernel& kernel, Eigen::Index m_ratio,
                                     const Eigen::VectorXd& xhat) {
  const Eigen::Index k = detail::fold_size(basis, m_ratio);
  if (xhat.size() != basis.size()) throw Error(ErrorCode::DimensionMismatch, "spectrum length differs from N");
  const Eigen::VectorXd response = kernel_values(basis, kernel);
  Eigen::VectorXd folded = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < basis.size(); ++i) folded[i % k] += response[i] * xhat[i];
  return folded;
}

/// Inverse of folding: x_hat(lambda_i) = d_hat(lambda_{i mod K}) W(lambda_i).
inline Eigen::VectorXd spectral_replicate(const SpectralBasis& basis, const SpectralKernel& kernel, Eigen::Index m_ratio,
                                          const Eigen::VectorXd& dhat) {
  const Eigen::Index k = detail::fold_size(basis, m_ratio);
  if (dhat.size() != k) throw Error(ErrorCode::DimensionMismatch, "coefficient length differs from K");
  const Eigen::VectorXd response = kernel_values(basis, kernel);
  Eigen::VectorXd xhat(basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i) xhat[i] = dhat[i % k] * response[i];
  return xhat;
}

/// S^* = U_reduced D_samp S(Lambda) U^T
inline SamplingOperator spectral_sampler(const SpectralBasis& basis, const SpectralKernel& kernel, Eigen::Index m_ratio,
                                         const Eigen::MatrixXd& u_reduced) {
  const Eigen::Index k = detail::fold_size(basis, m_ratio);
  detail::check_orthogonal(u_reduced, k);
  const Eigen::VectorXd response = kernel_values(basis, kernel);
  Eigen::MatrixXd folded = Eigen::MatrixXd::Zero(k, basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i) folded.row(i % k) += response[i] * basis.u.col(i).transpose();
  SamplingOperator op =
      make_sampler(u_reduced * folded, OperatorMeta{Domain::Spectral, {}, m_ratio, kernel.name, u_reduced});

  Rng rng(0x5eed);
  for (int trial = 0; trial < 2; ++trial) {
    const Eigen::VectorXd x = standard_normal(basis.size(), rng);
    const Eigen::VectorXd via_fold = u_reduced * spectral_fold(basis, kernel, m_ratio, gft(basis, x));
    if ((op.s_star * x - via_fold).norm() > 1e-9 * std::max(1.0, via_fold.norm()))
      throw std::logic_error("spectral_sampler: matrix and fold paths disagree");
  }
  return op;
}

inline SamplingOperator spectral_sampler(const SpectralBasis& basis, const SpectralKernel& kernel, Eigen::Index m_ratio) {
  const Eigen::Index k = detail::fold_size(basis, m_ratio);
  return spectral_sampler(basis, kernel, m_ratio, Eigen::MatrixXd::Identity(k, k));
}

/// W = U W(Lambda) D_samp^T U_reduced^T
inline ReconstructionOperator spectral_reconstructor(const SpectralBasis& basis, const SpectralKernel& kernel,
                                                     Eigen::Index m_ratio, const Eigen::MatrixXd& u_reduced) {
  const Eigen::Index k = detail::fold_size(basis, m_ratio);
  detail::check_orthogonal(u_reduced, k);
  const Eigen::VectorXd response = kernel_values(basis, kernel);
  Eigen::MatrixXd lifted = Eigen::MatrixXd::Zero(basis.size(), k);
  for (Eigen::Index i = 0; i < basis.size(); ++i) lifted.col(i % k) += response[i] * basis.u.col(i);
  ReconstructionOperator op =
      make_reconstructor(lifted * u_reduced.transpose(), OperatorMeta{Domain::Spectral, {}, m_ratio, kernel.name, u_reduced});

  Rng rng(0x5eed + 1);
  for (int trial = 0; trial < 2; ++trial) {
    const Eigen::VectorXd d = standard_normal(k, rng);
    const Eigen::VectorXd via_replicate =
        igft(basis, spectral_replicate(basis, kernel, m_ratio, u_reduced.transpose() * d));
    if ((op.w * d - via_replicate).norm() > 1e-9 * std::max(1.0, via_replicate.norm()))
      throw std::logic_error("spectral_reconstructor: matrix and replication paths disagree");
  }
  return op;
}

inline ReconstructionOperator spectral_reconstructor(const SpectralBasis& basis, const SpectralKernel& kernel,
                                                     Eigen::Index m_ratio) {
  const Eigen::Index k = detail::fold_size(basis, m_ratio);
  return spectral_reconstructor(basis, kernel, m_ratio, Eigen::MatrixXd::Identity(k, k));
}

/// Haar-random K x K orthogonal matrix (QR of a Gaussian matrix with sign fix).
inline Eigen::MatrixXd random_orthogonal(Eigen::Index k, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd g(k, k);
  for (Eigen::Index j = 0; j < k; ++j) g.col(j) = standard_normal(k, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < k; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace gwiener
