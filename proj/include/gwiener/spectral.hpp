#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gwiener/error.hpp"
#include "gwiener/graph.hpp"

namespace gwiener {

/// Orthonormal Laplacian eigenbasis; columns of `u` are the graph Fourier modes.
struct SpectralBasis {
  Eigen::MatrixXd u;
  Eigen::VectorXd lambda;  // ascending, clamped at zero
  double lambda_max = 0.0;

  Eigen::Index size() const { return lambda.size(); }
};

/// Real-valued response over the spectrum. Receives the eigenvalue and its index,
/// since some responses (ideal band selection) are defined by position.
struct SpectralKernel {
  std::string name;
  std::function<double(double lambda, Eigen::Index index)> eval;

  double operator()(double lambda, Eigen::Index index) const { return eval(lambda, index); }
};

inline SpectralBasis eigendecompose(const Eigen::MatrixXd& laplacian) {
  if (laplacian.rows() != laplacian.cols() || laplacian.rows() == 0)
    throw Error(ErrorCode::DimensionMismatch, "Laplacian must be square and non-empty");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::ConvergenceFailure, "symmetric eigensolver did not converge");

  const Eigen::Index n = laplacian.rows();
  const Eigen::VectorXd& values = solver.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });

  // Eigenvalues within roundoff of zero are snapped to exactly zero, so that
  // kernels such as sqrt(lambda) see the graph's DC component cleanly.
  const double zero_tol = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, values.cwiseAbs().maxCoeff()) *
                          static_cast<double>(n);

  SpectralBasis basis;
  basis.u.resize(n, n);
  basis.lambda.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd v = solver.eigenvectors().col(order[i]);
    const double scale = v.cwiseAbs().maxCoeff();
    for (Eigen::Index m = 0; m < n; ++m) {
      if (std::abs(v[m]) > 1e-10 * scale) {
        if (v[m] < 0.0) v = -v;
        break;
      }
    }
    basis.u.col(i) = v;
    basis.lambda[i] = values[order[i]] <= zero_tol ? 0.0 : values[order[i]];
  }
  basis.lambda_max = basis.lambda[n - 1];
  return basis;
}

inline SpectralBasis eigendecompose(const DegreeLaplacian& dl) { return eigendecompose(dl.laplacian); }

/// x_hat = U^T x
inline Eigen::VectorXd gft(const SpectralBasis& basis, const Eigen::VectorXd& x) {
  if (x.size() != basis.size()) throw Error(ErrorCode::DimensionMismatch, "gft: signal length differs from N");
  return basis.u.transpose() * x;
}

/// x = U x_hat
inline Eigen::VectorXd igft(const SpectralBasis& basis, const Eigen::VectorXd& xhat) {
  if (xhat.size() != basis.size()) throw Error(ErrorCode::DimensionMismatch, "igft: spectrum length differs from N");
  return basis.u * xhat;
}

/// Kernel sampled at every (lambda_i, i).
inline Eigen::VectorXd kernel_values(const SpectralBasis& basis, const SpectralKernel& kernel) {
  Eigen::VectorXd values(basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    values[i] = kernel(basis.lambda[i], i);
    if (!std::isfinite(values[i]))
      throw Error(ErrorCode::NonFiniteKernelValue,
                  "kernel '" + kernel.name + "' is not finite at index " + std::to_string(i));
  }
  return values;
}

/// U diag(values) U^T
inline Eigen::MatrixXd spectral_matrix(const SpectralBasis& basis, const Eigen::VectorXd& values) {
  if (values.size() != basis.size()) throw Error(ErrorCode::DimensionMismatch, "spectral_matrix: length differs from N");
  Eigen::MatrixXd m = basis.u * values.asDiagonal() * basis.u.transpose();
  return 0.5 * (m + m.transpose());
}

inline Eigen::MatrixXd kernel_filter_matrix(const SpectralBasis& basis, const SpectralKernel& kernel) {
  return spectral_matrix(basis, kernel_values(basis, kernel));
}

/// Relative off-diagonal mass of Q^T A Q.
inline double off_diagonal_ratio(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q) {
  const Eigen::MatrixXd rotated = q.transpose() * a * q;
  const double total = rotated.norm();
  if (total == 0.0) return 0.0;
  double off = 0.0;
  for (Eigen::Index c = 0; c < rotated.cols(); ++c)
    for (Eigen::Index r = 0; r < rotated.rows(); ++r)
      if (r != c) off += rotated(r, c) * rotated(r, c);
  return std::sqrt(off) / total;
}

// Experiment kernel catalog.

/// 1 above lambda_max / 2, linear ramp from 2 down to 1 below it.
inline double fullband_sampling_response(double lambda, double lambda_max) {
  if (lambda >= 0.5 * lambda_max) return 1.0;
  return 2.0 - 2.0 * lambda / lambda_max;
}

inline double cosine_reconstruction_response(double lambda, double lambda_max) {
  return std::cos(0.5 * std::numbers::pi * lambda / lambda_max);
}

inline double smoothness_response(double lambda, double lambda_max, double epsilon) {
  return lambda / lambda_max + epsilon;
}

inline double gaussian_psd_response(double lambda, double lambda_max) {
  const double z = (2.0 * lambda - lambda_max) / std::sqrt(lambda_max);
  return std::exp(-z * z);
}

inline SpectralKernel constant_kernel(double value, std::string name = "constant") {
  return {std::move(name), [value](double, Eigen::Index) { return value; }};
}

inline SpectralKernel fullband_sampling(double lambda_max) {
  return {"fullband", [lambda_max](double l, Eigen::Index) { return fullband_sampling_response(l, lambda_max); }};
}

/// Ideal low-pass selecting the first `k` graph frequencies.
inline SpectralKernel bandlimited_sampling(Eigen::Index k) {
  return {"bandlimited", [k](double, Eigen::Index i) { return i < k ? 1.0 : 0.0; }};
}

inline SpectralKernel cosine_reconstruction(double lambda_max) {
  return {"cosine", [lambda_max](double l, Eigen::Index) { return cosine_reconstruction_response(l, lambda_max); }};
}

inline constexpr double kDefaultSmoothnessEpsilon = 0.1;

inline SpectralKernel smoothness_measure(double lambda_max, double epsilon = kDefaultSmoothnessEpsilon) {
  return {"smoothness",
          [lambda_max, epsilon](double l, Eigen::Index) { return smoothness_response(l, lambda_max, epsilon); }};
}

inline SpectralKernel gaussian_psd(double lambda_max) {
  return {"gaussian_psd", [lambda_max](double l, Eigen::Index) { return gaussian_psd_response(l, lambda_max); }};
}

/// Resolves a catalog kernel by its string id. `band` is the passband size used
/// by "bandlimited".
inline SpectralKernel kernel_by_name(const std::string& name, const SpectralBasis& basis, Eigen::Index band,
                                     double epsilon = kDefaultSmoothnessEpsilon) {
  if (name == "fullband") return fullband_sampling(basis.lambda_max);
  if (name == "bandlimited") return bandlimited_sampling(band);
  if (name == "cosine") return cosine_reconstruction(basis.lambda_max);
  if (name == "smoothness") return smoothness_measure(basis.lambda_max, epsilon);
  if (name == "gaussian_psd") return gaussian_psd(basis.lambda_max);
  if (name == "identity") return constant_kernel(1.0, "identity");
  throw Error(ErrorCode::UnknownKernel, "no kernel named '" + name + "'");
}

inline const std::vector<std::string>& kernel_names() {
  static const std::vector<std::string> names{"fullband", "bandlimited", "cosine", "smoothness", "gaussian_psd",
                                              "identity"};
  return names;
}

}  // namespace gwiener
