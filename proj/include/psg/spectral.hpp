#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "psg/graph.hpp"

namespace psg {

enum class ShiftKind { Adjacency, DirectedLaplacian };

std::string to_string(ShiftKind kind);
ShiftKind parse_shift_kind(const std::string& s);

/// Eigen-pairs of a symmetric shift operator S = U diag(eigenvalues) U^T.
/// Eigenvalues ascend; each column of U has its first largest-magnitude entry
/// positive, and columns sharing an eigenvalue are ordered by that entry's
/// index.
struct SpectralBasis {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  ShiftKind shift_kind = ShiftKind::DirectedLaplacian;

  Eigen::Index size() const { return eigenvalues.size(); }
};

SpectralBasis eigendecompose(const Eigen::MatrixXd& shift,
                             ShiftKind kind = ShiftKind::DirectedLaplacian);

/// Shift matrix of the requested kind for g.
Eigen::MatrixXd shift_operator(const Graph& g, ShiftKind kind);

/// Basis of g's shift. Adjacency is only valid for undirected graphs.
SpectralBasis graph_basis(const Graph& g, ShiftKind kind);

/// x_hat = U^T x, applied column-wise when x holds several signals.
Eigen::MatrixXd gft(const SpectralBasis& basis, const Eigen::MatrixXd& x);
Eigen::VectorXd gft(const SpectralBasis& basis, const Eigen::VectorXd& x);

/// x = U x_hat.
Eigen::MatrixXd igft(const SpectralBasis& basis, const Eigen::MatrixXd& x_hat);
Eigen::VectorXd igft(const SpectralBasis& basis, const Eigen::VectorXd& x_hat);

using SpectralResponse = std::function<double(double)>;

/// Dense H = U h(Lambda) U^T.
Eigen::MatrixXd filter_matrix(const SpectralBasis& basis, const SpectralResponse& h);

/// H x evaluated in the spectral domain without forming H.
Eigen::VectorXd apply_filter(const SpectralBasis& basis, const SpectralResponse& h,
                             const Eigen::VectorXd& x);

/// K = sum_i r(lambda_i) u_i u_i^T; r must be nonnegative on the spectrum.
Eigen::MatrixXd spectral_kernel(const SpectralBasis& basis, const SpectralResponse& r);

/// exp(-lambda / (2 sigma^2)).
SpectralResponse heat_response(double sigma);

/// Text export: eigenvalues as one CSV column, U as a CSV matrix whose
/// columns are the eigenvectors.
void write_basis_csv(const SpectralBasis& basis, std::ostream& eigenvalues_out,
                     std::ostream& eigenvectors_out);
SpectralBasis read_basis_csv(std::istream& eigenvalues_in, std::istream& eigenvectors_in,
                             ShiftKind kind);

}  // namespace psg
