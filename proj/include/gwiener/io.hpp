#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "gwiener/error.hpp"
#include "gwiener/graph.hpp"
#include "gwiener/spectral.hpp"

namespace gwiener {

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Edge list: first line `n`, then one `u v w` line per undirected edge (u < v).
inline std::string write_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.size() << '\n';
  for (Eigen::Index u = 0; u < g.size(); ++u)
    for (Eigen::Index v = u + 1; v < g.size(); ++v)
      if (g.weights()(u, v) != 0.0) out << u << ' ' << v << ' ' << format_real(g.weights()(u, v)) << '\n';
  return out.str();
}

inline Graph read_edge_list(const std::string& text) {
  std::istringstream in(text);
  long long n = 0;
  if (!(in >> n) || n < 1) throw Error(ErrorCode::ParseError, "edge list must start with a positive vertex count");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  long long u = 0, v = 0;
  double weight = 0.0;
  while (in >> u) {
    if (!(in >> v >> weight)) throw Error(ErrorCode::ParseError, "truncated edge line");
    if (u < 0 || v < 0 || u >= n || v >= n) throw Error(ErrorCode::ParseError, "edge endpoint out of range");
    if (u == v) throw Error(ErrorCode::NonzeroDiagonal, "self loop in edge list");
    w(u, v) = w(v, u) = weight;
  }
  if (!in.eof()) throw Error(ErrorCode::ParseError, "malformed edge list");
  return build_graph(w);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << text;
}

/// `index,lambda,<column>` table, one row per graph frequency (or the first
/// values.size() frequencies when values is shorter, as for K-length responses).
inline std::string spectrum_csv(const SpectralBasis& basis, const Eigen::VectorXd& values,
                                const std::string& column = "value") {
  if (values.size() > basis.size()) throw Error(ErrorCode::DimensionMismatch, "more values than graph frequencies");
  std::ostringstream out;
  out << "index,lambda," << column << '\n';
  for (Eigen::Index i = 0; i < values.size(); ++i)
    out << i << ',' << format_real(basis.lambda[i]) << ',' << format_real(values[i]) << '\n';
  return out.str();
}

inline std::string kernel_csv(const SpectralBasis& basis, const SpectralKernel& kernel) {
  return spectrum_csv(basis, kernel_values(basis, kernel), "value");
}

inline std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::ostringstream out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << format_real(m(r, c));
    out << '\n';
  }
  return out.str();
}

}  // namespace gwiener
