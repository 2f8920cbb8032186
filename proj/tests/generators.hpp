#pragma once

#include <vector>

#include "helpers.hpp"
#include "psg/forecast.hpp"
#include "psg/spectral.hpp"

namespace testing {

/// y_t = sum_i a_i y_{t-i} + sigma e_t after a burn-in.
inline std::vector<double> ar_series(const std::vector<double>& a, double sigma, int length,
                                     psg::Rng& rng, int burn_in = 200) {
  const int m = static_cast<int>(a.size());
  std::vector<double> y(static_cast<std::size_t>(length + burn_in), 0.0);
  for (int t = m; t < length + burn_in; ++t) {
    double v = sigma * rng.normal();
    for (int i = 0; i < m; ++i) v += a[i] * y[t - 1 - i];
    y[t] = v;
  }
  return {y.begin() + burn_in, y.end()};
}

/// Two-regime TAR(1) with exogenous z: regime 0 when z_t <= threshold.
struct TarData {
  std::vector<double> y;
  std::vector<double> z;
};

inline TarData tar_series(double a_low, double a_high, double c_low, double c_high,
                          double threshold, double sigma, int length, psg::Rng& rng) {
  TarData d;
  d.y.assign(length, 0.0);
  d.z.assign(length, 0.0);
  for (int t = 0; t < length; ++t) d.z[t] = rng.normal();
  for (int t = 1; t < length; ++t) {
    const bool low = d.z[t] <= threshold;
    d.y[t] = (low ? c_low + a_low * d.y[t - 1] : c_high + a_high * d.y[t - 1]) +
             sigma * rng.normal();
  }
  return d;
}

/// Raw cluster series x = U s + level with per-frequency AR(1) state s.
/// When `switching` is set the coefficient of every frequency flips sign
/// once the raw cluster sum at the previous step exceeds level * n.
struct JwssProcess {
  psg::SpectralBasis basis;
  psg::TimeSeries raw;
};

inline JwssProcess jwss_process(const psg::SpectralBasis& basis, const std::vector<double>& coeff,
                                double sigma, double level, int length, bool switching,
                                psg::Rng& rng) {
  const auto n = basis.size();
  JwssProcess p{basis, {Eigen::MatrixXd(n, length), 1.0, 0}};
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  double prev_sum = level * static_cast<double>(n);
  for (int t = 0; t < length; ++t) {
    const bool high = switching && prev_sum > level * static_cast<double>(n);
    for (Eigen::Index f = 0; f < n; ++f) {
      const double a = high ? -0.6 * coeff[f] : coeff[f];
      s(f) = a * s(f) + sigma * rng.normal();
    }
    p.raw.values.col(t) = basis.eigenvectors * s + Eigen::VectorXd::Constant(n, level);
    prev_sum = p.raw.values.col(t).sum();
  }
  return p;
}

/// Two-state process: the graph frequency whose eigenvector is constant
/// (the Laplacian's first) jumps to a congested level once the raw cluster
/// sum at the previous step exceeds the midpoint, and every frequency
/// reverts faster while congested. Regimes persist for many steps.
inline JwssProcess congestion_process(const psg::SpectralBasis& basis,
                                      const std::vector<double>& coeff, double sigma,
                                      double level, double jump, int length, psg::Rng& rng) {
  const auto n = basis.size();
  const double root_n = std::sqrt(static_cast<double>(n));
  const double sign = basis.eigenvectors.col(0).sum() >= 0.0 ? 1.0 : -1.0;
  const double threshold = level * static_cast<double>(n) + 0.5 * jump * root_n;
  JwssProcess p{basis, {Eigen::MatrixXd(n, length), 1.0, 0}};
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  double prev_sum = level * static_cast<double>(n);
  for (int t = 0; t < length; ++t) {
    const bool congested = prev_sum > threshold;
    for (Eigen::Index f = 0; f < n; ++f) {
      const double a = congested ? 0.5 * coeff[f] : coeff[f];
      const double c = congested && f == 0 ? sign * jump * (1.0 - a) : 0.0;
      s(f) = c + a * s(f) + sigma * rng.normal();
    }
    p.raw.values.col(t) = basis.eigenvectors * s + Eigen::VectorXd::Constant(n, level);
    prev_sum = p.raw.values.col(t).sum();
  }
  return p;
}

}  // namespace testing
