#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "psg/common.hpp"
#include "psg/graph.hpp"

namespace testing {

inline Eigen::MatrixXd random_matrix(int rows, int cols, psg::Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

inline Eigen::VectorXd random_vector(int n, psg::Rng& rng) { return random_matrix(n, 1, rng); }

inline Eigen::MatrixXd random_symmetric(int n, psg::Rng& rng) {
  const Eigen::MatrixXd m = random_matrix(n, n, rng);
  return (m + m.transpose()) / 2.0;
}

/// Orthonormal Q from Gram-Schmidt on a random Gaussian matrix.
inline Eigen::MatrixXd random_orthogonal(int n, psg::Rng& rng) {
  Eigen::MatrixXd q = random_matrix(n, n, rng);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
    q.col(j).normalize();
  }
  return q;
}

inline Eigen::MatrixXd random_psd(int n, psg::Rng& rng) {
  const Eigen::MatrixXd m = random_matrix(n, n, rng);
  return m * m.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
}

/// Connected undirected graph: random spanning tree plus extra edges.
inline psg::Graph random_connected_graph(int n, double extra_p, psg::Rng& rng) {
  std::vector<psg::Edge> edges;
  for (int v = 1; v < n; ++v)
    edges.push_back({static_cast<int>(rng.below(static_cast<std::uint64_t>(v))), v, 1.0});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < extra_p) edges.push_back({i, j, 1.0});
  return psg::build_graph(n, edges, false);
}

/// gamma computed straight from its definition, without the library.
inline double gamma_oracle(const Eigen::MatrixXd& u, const Eigen::MatrixXd& c) {
  const Eigen::MatrixXd p = u.transpose() * c * u;
  double diag = 0.0, total = 0.0;
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j) {
      total += p(i, j) * p(i, j);
      if (i == j) diag += p(i, j) * p(i, j);
    }
  return std::sqrt(diag) / std::sqrt(total);
}

}  // namespace testing
