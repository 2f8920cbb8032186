#include "psg/stationarity.hpp"

#include <algorithm>

namespace psg {

TimeSeries TimeSeries::window(Eigen::Index begin, Eigen::Index count) const {
  if (begin < 0 || count < 0 || begin + count > steps())
    throw ValidationError("time window out of range");
  return {values.middleCols(begin, count), sample_period, start + static_cast<long>(begin)};
}

TimeSeries TimeSeries::restrict_rows(std::span<const VertexId> rows) const {
  TimeSeries out{Eigen::MatrixXd(static_cast<Eigen::Index>(rows.size()), steps()),
                 sample_period, start};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= vertices()) throw ValidationError("row index out of range");
    out.values.row(static_cast<Eigen::Index>(k)) = values.row(rows[k]);
  }
  return out;
}

Covariance sample_covariance(const TimeSeries& x, int lag) {
  const Eigen::Index t = x.steps();
  if (lag < 0) throw ValidationError("sample_covariance: negative lag");
  if (t <= lag + 1)
    throw ValidationError("sample_covariance: need more than lag + 1 samples");
  if (!x.values.allFinite()) throw ValidationError("sample_covariance: non-finite samples");

  const Eigen::VectorXd mu = x.values.rowwise().mean();
  const Eigen::MatrixXd centred = x.values.colwise() - mu;
  const Eigen::Index count = t - lag;
  Covariance c;
  c.lag = lag;
  c.samples = count;
  c.matrix = centred.rightCols(count) * centred.leftCols(count).transpose() /
             static_cast<double>(t - lag - 1);
  if (lag == 0) c.matrix = 0.5 * (c.matrix + c.matrix.transpose()).eval();
  return c;
}

Covariance slice(const Covariance& c, const VertexSet& s) {
  const auto k = static_cast<Eigen::Index>(s.size());
  Covariance out{Eigen::MatrixXd(k, k), c.lag, c.samples};
  const auto m = s.members();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (m[i] < 0 || m[i] >= c.matrix.rows()) throw ValidationError("slice: vertex out of range");
    for (Eigen::Index j = 0; j < k; ++j) out.matrix(i, j) = c.matrix(m[i], m[j]);
  }
  return out;
}

Covariance load_diagonal(Covariance c, double epsilon) {
  c.matrix.diagonal().array() += epsilon;
  return c;
}

Eigen::MatrixXd spectral_projection(const SpectralBasis& basis, const Covariance& c) {
  if (c.matrix.rows() != basis.size() || c.matrix.cols() != basis.size())
    throw ValidationError("spectral_projection: dimension mismatch");
  const auto& u = basis.eigenvectors;
  return u.transpose() * c.matrix * u;
}

double stationarity_ratio(const SpectralBasis& basis, const Eigen::MatrixXd& c) {
  return stationarity_ratio(basis, Covariance{c, 0, 0});
}

double stationarity_ratio(const SpectralBasis& basis, const Covariance& c) {
  const Eigen::MatrixXd p = spectral_projection(basis, c);
  const double total = p.norm();
  if (!(total > 0.0)) throw ValidationError("stationarity_ratio: zero covariance");
  return std::min(1.0, p.diagonal().norm() / total);
}

double commutator_gap(const Eigen::MatrixXd& shift, const Eigen::MatrixXd& c) {
  if (shift.rows() != c.rows() || shift.cols() != c.cols() || shift.rows() != shift.cols())
    throw ValidationError("commutator_gap: dimension mismatch");
  const double scale = shift.norm() * c.norm();
  if (!(scale > 0.0)) throw ValidationError("commutator_gap: zero operator norm");
  return (shift * c - c * shift).norm() / scale;
}

double commutator_gap(const Eigen::MatrixXd& shift, const Covariance& c) {
  return commutator_gap(shift, c.matrix);
}

Covariance covariance_from_spectrum(const SpectralBasis& basis,
                                    const Eigen::VectorXd& spectrum) {
  if (spectrum.size() != basis.size())
    throw ValidationError("covariance_from_spectrum: spectrum length mismatch");
  if ((spectrum.array() <= 0.0).any() || !spectrum.allFinite())
    throw ValidationError("covariance_from_spectrum: spectrum must be positive");
  const auto& u = basis.eigenvectors;
  Eigen::MatrixXd c = u * spectrum.asDiagonal() * u.transpose();
  return {0.5 * (c + c.transpose()), 0, 0};
}

Covariance superstationary_covariance(const Eigen::MatrixXd& adjacency, double a, double b) {
  if (adjacency.rows() != adjacency.cols())
    throw ValidationError("superstationary_covariance: adjacency not square");
  Eigen::MatrixXd c = a * adjacency;
  c.diagonal().array() += b;
  const Eigen::MatrixXd sym = 0.5 * (c + c.transpose());
  if ((c - sym).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("superstationary_covariance: result not symmetric");
  if (c.size() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    const double floor = -1e-10 * std::max(1.0, sym.cwiseAbs().maxCoeff());
    if (solver.eigenvalues().minCoeff() < floor)
      throw ValidationError("superstationary_covariance: a A + b I is not positive semi-definite");
  }
  return {sym, 0, 0};
}

namespace {

bool strongly_connected_pattern(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return false;
  auto reaches_all = [&](bool transpose) {
    std::vector<bool> seen(n, false);
    std::vector<Eigen::Index> stack{0};
    seen[0] = true;
    Eigen::Index count = 1;
    while (!stack.empty()) {
      const Eigen::Index v = stack.back();
      stack.pop_back();
      for (Eigen::Index w = 0; w < n; ++w) {
        const double weight = transpose ? a(w, v) : a(v, w);
        if (weight != 0.0 && !seen[w]) {
          seen[w] = true;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == n;
  };
  return reaches_all(false) && reaches_all(true);
}

}  // namespace

SuperstationarityVerdict check_superstationary(const Eigen::MatrixXd& adjacency,
                                               const Covariance& c, double tol,
                                               int brute_force_limit) {
  const Eigen::Index n = adjacency.rows();
  if (adjacency.cols() != n || c.matrix.rows() != n || c.matrix.cols() != n)
    throw ValidationError("check_superstationary: dimension mismatch");
  const double c_norm = c.matrix.norm();
  if (!(c_norm > 0.0)) throw ValidationError("check_superstationary: zero covariance");

  // least squares over vec(C) = a vec(A) + b vec(I)
  Eigen::MatrixXd design(n * n, 2);
  design.col(0) = adjacency.reshaped();
  design.col(1) = Eigen::MatrixXd::Identity(n, n).reshaped();
  const Eigen::VectorXd target = c.matrix.reshaped();
  const Eigen::VectorXd coef = design.completeOrthogonalDecomposition().solve(target);

  SuperstationarityVerdict v;
  v.a = coef(0);
  v.b = coef(1);
  v.relative_residual = (target - design * coef).norm() / c_norm;
  v.strongly_connected = strongly_connected_pattern(adjacency);
  if (v.strongly_connected) {
    v.method = SuperstationarityMethod::LinearFit;
    v.superstationary = v.relative_residual <= tol;
  } else if (n <= brute_force_limit) {
    v.method = SuperstationarityMethod::BruteForce;
    v.superstationary = supercommute_bruteforce(adjacency, c, brute_force_limit);
  } else {
    v.method = SuperstationarityMethod::Inconclusive;
    v.superstationary = false;
  }
  return v;
}

bool supercommute_bruteforce(const Eigen::MatrixXd& adjacency, const Covariance& c,
                             int max_n) {
  const Eigen::Index n = adjacency.rows();
  if (adjacency.cols() != n || c.matrix.rows() != n || c.matrix.cols() != n)
    throw ValidationError("supercommute_bruteforce: dimension mismatch");
  if (n > max_n || n > 30)
    throw ValidationError("supercommute_bruteforce: n = " + std::to_string(n) +
                          " exceeds limit " + std::to_string(max_n));
  std::vector<Eigen::Index> idx;
  idx.reserve(n);
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < subsets; ++mask) {
    idx.clear();
    for (Eigen::Index i = 0; i < n; ++i)
      if (mask >> i & 1U) idx.push_back(i);
    if (idx.size() == 1) continue;
    const Eigen::MatrixXd a = adjacency(idx, idx);
    const Eigen::MatrixXd cs = c.matrix(idx, idx);
    if ((a * cs - cs * a).norm() > 1e-8) return false;
  }
  return true;
}

TimeSeries sample_gwss_process(const SpectralBasis& basis, const Eigen::VectorXd& spectrum,
                               Eigen::Index t, std::uint64_t seed) {
  if (spectrum.size() != basis.size())
    throw ValidationError("sample_gwss_process: spectrum length mismatch");
  if ((spectrum.array() <= 0.0).any())
    throw ValidationError("sample_gwss_process: spectrum must be positive");
  if (t < 0) throw ValidationError("sample_gwss_process: negative length");
  Rng rng(seed);
  Eigen::MatrixXd white(basis.size(), t);
  for (Eigen::Index col = 0; col < t; ++col)
    for (Eigen::Index row = 0; row < basis.size(); ++row) white(row, col) = rng.normal();
  const Eigen::VectorXd gain = spectrum.cwiseSqrt();
  return {basis.eigenvectors * (gain.asDiagonal() * white), 1.0, 0};
}

namespace {

long phase_of(long t, int period) {
  const long r = t % period;
  return r < 0 ? r + period : r;
}

}  // namespace

Deseasonalized deseasonalize(const TimeSeries& x, int period) {
  if (period <= 0) throw ValidationError("deseasonalize: period must be positive");
  if (x.steps() < 2 * static_cast<Eigen::Index>(period))
    throw ValidationError("deseasonalize: need at least two full periods");
  Deseasonalized out;
  out.period = period;
  out.phase_means = Eigen::MatrixXd::Zero(x.vertices(), period);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(period);
  for (Eigen::Index t = 0; t < x.steps(); ++t) {
    const long k = phase_of(x.start + t, period);
    out.phase_means.col(k) += x.values.col(t);
    counts(k) += 1.0;
  }
  for (int k = 0; k < period; ++k) out.phase_means.col(k) /= counts(k);
  out.residual = x;
  for (Eigen::Index t = 0; t < x.steps(); ++t)
    out.residual.values.col(t) -= out.phase_means.col(phase_of(x.start + t, period));
  return out;
}

Eigen::VectorXd seasonal_value(const Eigen::MatrixXd& phase_means, long t) {
  if (phase_means.cols() == 0) throw ValidationError("seasonal_value: empty profile");
  return phase_means.col(phase_of(t, static_cast<int>(phase_means.cols())));
}

TimeSeries difference(const TimeSeries& x) {
  if (x.steps() < 2) throw ValidationError("difference: need at least two samples");
  const Eigen::Index t = x.steps();
  return {x.values.rightCols(t - 1) - x.values.leftCols(t - 1), x.sample_period, x.start + 1};
}

TimeSeries impute_moving_average(TimeSeries x, int width) {
  if (width < 1) throw ValidationError("impute_moving_average: width must be positive");
  const Eigen::MatrixXd original = x.values;
  const Eigen::Index steps = x.steps();
  for (Eigen::Index i = 0; i < x.vertices(); ++i) {
    if (!original.row(i).allFinite() && !original.row(i).array().isFinite().any())
      throw ValidationError("impute_moving_average: series " + std::to_string(i) +
                            " has no finite samples");
    for (Eigen::Index t = 0; t < steps; ++t) {
      if (std::isfinite(original(i, t))) continue;
      for (Eigen::Index half = width / 2; half <= steps; ++half) {
        double sum = 0.0;
        int count = 0;
        for (Eigen::Index s = std::max<Eigen::Index>(0, t - half);
             s <= std::min<Eigen::Index>(steps - 1, t + half); ++s)
          if (std::isfinite(original(i, s))) {
            sum += original(i, s);
            ++count;
          }
        if (count > 0) {
          x.values(i, t) = sum / count;
          break;
        }
      }
    }
  }
  return x;
}

}  // namespace psg
