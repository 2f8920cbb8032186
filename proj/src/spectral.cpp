#include "psg/spectral.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <vector>

namespace psg {

std::string to_string(ShiftKind kind) {
  return kind == ShiftKind::Adjacency ? "adjacency" : "laplacian";
}

ShiftKind parse_shift_kind(const std::string& s) {
  if (s == "adjacency") return ShiftKind::Adjacency;
  if (s == "laplacian" || s == "directed-laplacian") return ShiftKind::DirectedLaplacian;
  throw ValidationError("unknown shift kind '" + s + "'");
}

namespace {

Eigen::Index pivot_index(const Eigen::Ref<const Eigen::VectorXd>& u) {
  const double peak = u.cwiseAbs().maxCoeff();
  const double slack = 1e-12 * std::max(1.0, peak);
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (std::abs(u(i)) >= peak - slack) return i;
  return 0;
}

}  // namespace

SpectralBasis eigendecompose(const Eigen::MatrixXd& shift, ShiftKind kind) {
  if (shift.rows() != shift.cols()) throw ValidationError("eigendecompose: matrix not square");
  if (!shift.allFinite()) throw ValidationError("eigendecompose: non-finite entries");
  if ((shift - shift.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("eigendecompose: matrix not symmetric");

  const Eigen::Index n = shift.rows();
  SpectralBasis basis;
  basis.shift_kind = kind;
  if (n == 0) return basis;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(shift);
  if (solver.info() != Eigen::Success)
    throw ComputationError("eigendecompose: solver did not converge");

  Eigen::MatrixXd u = solver.eigenvectors();
  const Eigen::VectorXd lambda = solver.eigenvalues();
  std::vector<Eigen::Index> pivots(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    pivots[k] = pivot_index(u.col(k));
    if (u(pivots[k], k) < 0.0) u.col(k) *= -1.0;
  }

  // group numerically equal eigenvalues, then order each group by pivot
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (Eigen::Index start = 0; start < n;) {
    Eigen::Index stop = start + 1;
    while (stop < n && lambda(stop) - lambda(stop - 1) <= 1e-9 * scale) ++stop;
    std::stable_sort(order.begin() + start, order.begin() + stop,
                     [&](Eigen::Index a, Eigen::Index b) { return pivots[a] < pivots[b]; });
    start = stop;
  }

  basis.eigenvalues.resize(n);
  basis.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    basis.eigenvalues(k) = lambda(order[k]);
    basis.eigenvectors.col(k) = u.col(order[k]);
  }
  return basis;
}

Eigen::MatrixXd shift_operator(const Graph& g, ShiftKind kind) {
  if (kind == ShiftKind::DirectedLaplacian) return directed_laplacian(g);
  if (g.directed())
    throw ValidationError("adjacency shift requires an undirected graph");
  return adjacency(g);
}

SpectralBasis graph_basis(const Graph& g, ShiftKind kind) {
  return eigendecompose(shift_operator(g, kind), kind);
}

namespace {

void check_rows(const SpectralBasis& basis, Eigen::Index rows, const char* what) {
  if (rows != basis.size())
    throw ValidationError(std::string(what) + ": dimension mismatch (basis " +
                          std::to_string(basis.size()) + ", signal " +
                          std::to_string(rows) + ")");
}

Eigen::VectorXd evaluate(const SpectralBasis& basis, const SpectralResponse& h,
                         const char* what) {
  Eigen::VectorXd out(basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    out(i) = h(basis.eigenvalues(i));
    if (!std::isfinite(out(i)))
      throw ValidationError(std::string(what) + ": response not finite at eigenvalue " +
                            std::to_string(basis.eigenvalues(i)));
  }
  return out;
}

}  // namespace

Eigen::MatrixXd gft(const SpectralBasis& basis, const Eigen::MatrixXd& x) {
  check_rows(basis, x.rows(), "gft");
  return basis.eigenvectors.transpose() * x;
}

Eigen::VectorXd gft(const SpectralBasis& basis, const Eigen::VectorXd& x) {
  check_rows(basis, x.size(), "gft");
  return basis.eigenvectors.transpose() * x;
}

Eigen::MatrixXd igft(const SpectralBasis& basis, const Eigen::MatrixXd& x_hat) {
  check_rows(basis, x_hat.rows(), "igft");
  return basis.eigenvectors * x_hat;
}

Eigen::VectorXd igft(const SpectralBasis& basis, const Eigen::VectorXd& x_hat) {
  check_rows(basis, x_hat.size(), "igft");
  return basis.eigenvectors * x_hat;
}

Eigen::MatrixXd filter_matrix(const SpectralBasis& basis, const SpectralResponse& h) {
  const Eigen::VectorXd response = evaluate(basis, h, "filter_matrix");
  const auto& u = basis.eigenvectors;
  return u * response.asDiagonal() * u.transpose();
}

Eigen::VectorXd apply_filter(const SpectralBasis& basis, const SpectralResponse& h,
                             const Eigen::VectorXd& x) {
  check_rows(basis, x.size(), "apply_filter");
  const Eigen::VectorXd response = evaluate(basis, h, "apply_filter");
  return igft(basis, Eigen::VectorXd(response.cwiseProduct(gft(basis, x))));
}

Eigen::MatrixXd spectral_kernel(const SpectralBasis& basis, const SpectralResponse& r) {
  const Eigen::VectorXd response = evaluate(basis, r, "spectral_kernel");
  for (Eigen::Index i = 0; i < response.size(); ++i)
    if (response(i) < 0.0)
      throw ValidationError("spectral_kernel: negative response at eigenvalue " +
                            std::to_string(basis.eigenvalues(i)));
  const auto& u = basis.eigenvectors;
  Eigen::MatrixXd k = u * response.asDiagonal() * u.transpose();
  return 0.5 * (k + k.transpose());
}

SpectralResponse heat_response(double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("heat kernel bandwidth must be positive");
  return [sigma](double lambda) { return std::exp(-lambda / (2.0 * sigma * sigma)); };
}

void write_basis_csv(const SpectralBasis& basis, std::ostream& eigenvalues_out,
                     std::ostream& eigenvectors_out) {
  eigenvalues_out << std::setprecision(17);
  eigenvectors_out << std::setprecision(17);
  for (Eigen::Index i = 0; i < basis.size(); ++i) eigenvalues_out << basis.eigenvalues(i) << '\n';
  for (Eigen::Index r = 0; r < basis.size(); ++r) {
    for (Eigen::Index c = 0; c < basis.size(); ++c) {
      if (c) eigenvectors_out << ',';
      eigenvectors_out << basis.eigenvectors(r, c);
    }
    eigenvectors_out << '\n';
  }
}

SpectralBasis read_basis_csv(std::istream& eigenvalues_in, std::istream& eigenvectors_in,
                             ShiftKind kind) {
  std::vector<double> values;
  std::string line;
  while (std::getline(eigenvalues_in, line))
    if (!line.empty()) values.push_back(std::stod(line));
  const auto n = static_cast<Eigen::Index>(values.size());
  SpectralBasis basis;
  basis.shift_kind = kind;
  basis.eigenvalues = Eigen::Map<Eigen::VectorXd>(values.data(), n);
  basis.eigenvectors.resize(n, n);
  Eigen::Index r = 0;
  while (std::getline(eigenvectors_in, line)) {
    if (line.empty()) continue;
    if (r >= n) throw ValidationError("basis CSV: too many eigenvector rows");
    std::stringstream ss(line);
    std::string cell;
    Eigen::Index c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= n) throw ValidationError("basis CSV: row too long");
      basis.eigenvectors(r, c++) = std::stod(cell);
    }
    if (c != n) throw ValidationError("basis CSV: row too short");
    ++r;
  }
  if (r != n) throw ValidationError("basis CSV: eigenvector rows do not match eigenvalues");
  return basis;
}

}  // namespace psg
