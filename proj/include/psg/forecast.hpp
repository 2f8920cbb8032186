#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "psg/spectral.hpp"
#include "psg/stationarity.hpp"

namespace psg {

/// Travel time index: current travel time over free-flow travel time.
double tti(double travel_time, double free_flow_time);

/// y_t = intercept + sum_i coefficients(i-1) y_{t-i} + noise_scale e_t.
struct ArModel {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  double noise_scale = 0.0;

  int order() const { return static_cast<int>(coefficients.size()); }
  /// One-step prediction; `history` ends with the most recent value.
  double predict_next(std::span<const double> history) const;
};

/// Conditional least squares on (1, y_{t-1}, ..., y_{t-m}). A constant series
/// yields an intercept-only model.
ArModel fit_ar(std::span<const double> y, int order);

/// Piecewise AR switched by an exogenous variable: regime j applies when
/// thresholds[j-1] < z_t <= thresholds[j], with -inf/+inf at the ends.
struct TarModel {
  std::vector<double> thresholds;  // interior, ascending
  std::vector<ArModel> regimes;
  std::string exogenous_kind = "cluster_tti_sum";

  int regime_of(double z) const;
  double predict_next(std::span<const double> history, double z) const;
};

/// Grid search over the empirical quantiles k/grid (k = 1..grid-1) of z for
/// the interior thresholds,
/// minimising the pooled residual sum of squares with at least order + 2
/// samples per regime; regimes are then fit as in fit_ar.
TarModel fit_tar(std::span<const double> y, std::span<const double> z, int regimes, int order,
                 int grid = 20);

using FrequencyModel = std::variant<ArModel, TarModel>;

enum class ModelKind { JcmAr, JcmTar };
std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& s);

struct ModelConfig {
  ModelKind kind = ModelKind::JcmAr;
  int ar_order = 5;
  int regimes = 3;
  int grid = 20;
  /// Samples per season; 0 disables deseasonalisation.
  int seasonal_period = 0;
  bool differencing = true;
};

struct Preprocessing {
  int seasonal_period = 0;
  Eigen::MatrixXd phase_means;  // cluster size x period
  bool differenced = false;
};

struct ClusterModel {
  int cluster_id = 0;
  /// Graph vertex ids of the cluster, in basis row order.
  std::vector<VertexId> vertices;
  SpectralBasis basis;
  ModelKind kind = ModelKind::JcmAr;
  std::vector<FrequencyModel> models;
  Preprocessing preprocessing;

  int max_lag() const;
};

/// Seasonal removal and differencing as recorded in `prep`.
TimeSeries apply_preprocessing(const Preprocessing& prep, const TimeSeries& raw);

/// Fits one univariate model per graph frequency of the cluster. `x` holds the
/// raw cluster rows in basis order. For JCM-TAR the regime of step t is set by
/// the per-step sum of the raw cluster values at t-1.
ClusterModel fit_cluster_model(const TimeSeries& x, const SpectralBasis& basis,
                               const ModelConfig& cfg);

/// Iterated one-step forecasts in the graph frequency domain, mapped back to
/// the raw scale. `history` holds raw cluster rows; its `start` fixes the
/// seasonal phase. Result columns start at history.start + history.steps().
TimeSeries predict(const ClusterModel& model, const TimeSeries& history, int horizon);

/// Repeats the last observed column.
TimeSeries persistence_forecast(const TimeSeries& history, int horizon);

struct ForecastMetrics {
  double mae = 0.0;
  double rmse = 0.0;
  double mape = 0.0;  // percent
  Eigen::Index samples = 0;
  Eigen::Index mape_samples = 0;
};

using EntryMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kMapeFloor = 1e-6;

/// MAE and RMSE over all entries. MAPE skips entries flagged in `mape_exclude`
/// and those with |truth| < kMapeFloor; it is reported as 0 with
/// mape_samples = 0 when only near-zero truths remain. A mask excluding every
/// entry is an error.
ForecastMetrics evaluate(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& truth,
                         const std::optional<EntryMask>& mape_exclude = std::nullopt);

}  // namespace psg
