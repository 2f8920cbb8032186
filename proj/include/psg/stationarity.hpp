#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "psg/spectral.hpp"

namespace psg {

/// N x T observations; row i is the series on vertex i, column t the graph
/// signal at time `start + t`.
struct TimeSeries {
  Eigen::MatrixXd values;
  double sample_period = 1.0;
  long start = 0;

  Eigen::Index vertices() const { return values.rows(); }
  Eigen::Index steps() const { return values.cols(); }

  /// Columns [begin, begin + count) with `start` shifted accordingly.
  TimeSeries window(Eigen::Index begin, Eigen::Index count) const;
  /// Rows listed in `rows`, in that order.
  TimeSeries restrict_rows(std::span<const VertexId> rows) const;
};

/// Cross covariance of x^(t) and x^(t-lag) with per-row mean removal and
/// 1/(T - lag - 1) normalisation; lag 0 is symmetrised.
struct Covariance {
  Eigen::MatrixXd matrix;
  int lag = 0;
  Eigen::Index samples = 0;
};

Covariance sample_covariance(const TimeSeries& x, int lag);

/// Covariance restricted to the rows/columns in `s`.
Covariance slice(const Covariance& c, const VertexSet& s);

/// C + epsilon I.
Covariance load_diagonal(Covariance c, double epsilon);

/// P = U^T C U.
Eigen::MatrixXd spectral_projection(const SpectralBasis& basis, const Covariance& c);

/// ||diag(P)||_2 / ||P||_F with P = U^T C U; 1 exactly when P is diagonal.
double stationarity_ratio(const SpectralBasis& basis, const Covariance& c);
double stationarity_ratio(const SpectralBasis& basis, const Eigen::MatrixXd& c);

/// ||S C - C S||_F / (||S||_F ||C||_F), a basis-free GWSS test.
double commutator_gap(const Eigen::MatrixXd& shift, const Covariance& c);
double commutator_gap(const Eigen::MatrixXd& shift, const Eigen::MatrixXd& c);

Covariance covariance_from_spectrum(const SpectralBasis& basis,
                                    const Eigen::VectorXd& spectrum);

/// C = a A + b I; rejected when the result is not positive semi-definite.
Covariance superstationary_covariance(const Eigen::MatrixXd& adjacency, double a, double b);

enum class SuperstationarityMethod { LinearFit, BruteForce, Inconclusive };

struct SuperstationarityVerdict {
  bool superstationary = false;
  double a = 0.0;
  double b = 0.0;
  double relative_residual = 0.0;
  bool strongly_connected = false;
  SuperstationarityMethod method = SuperstationarityMethod::LinearFit;
};

/// Fits C ~ a A + b I by least squares. On strongly connected graphs the
/// verdict is residual/||C||_F <= tol. Otherwise the linear family does not
/// characterise superstationarity: small graphs (n <= brute_force_limit) are
/// settled by supercommute_bruteforce, larger ones are flagged Inconclusive.
SuperstationarityVerdict check_superstationary(const Eigen::MatrixXd& adjacency,
                                               const Covariance& c, double tol,
                                               int brute_force_limit = 12);

/// Checks that every principal submatrix of A commutes with the matching
/// submatrix of C (2^n - 1 subsets), commutator norms <= 1e-8.
bool supercommute_bruteforce(const Eigen::MatrixXd& adjacency, const Covariance& c,
                             int max_n = 12);

/// T columns of U diag(sqrt(spectrum)) w with w standard normal.
TimeSeries sample_gwss_process(const SpectralBasis& basis, const Eigen::VectorXd& spectrum,
                               Eigen::Index t, std::uint64_t seed);

struct Deseasonalized {
  TimeSeries residual;
  /// N x period; column k is the mean at phase k = (start + t) mod period.
  Eigen::MatrixXd phase_means;
  int period = 0;
};

Deseasonalized deseasonalize(const TimeSeries& x, int period);

/// Seasonal profile evaluated at absolute time index t.
Eigen::VectorXd seasonal_value(const Eigen::MatrixXd& phase_means, long t);

/// First difference; column t is x^(t+1) - x^(t).
TimeSeries difference(const TimeSeries& x);

/// Replaces non-finite entries by the mean of the finite values inside a
/// centred window of `width` samples, widening the window until one is found.
TimeSeries impute_moving_average(TimeSeries x, int width = 5);

}  // namespace psg
