#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "psg/active_components.hpp"
#include "psg/forecast.hpp"
#include "psg/graph.hpp"
#include "psg/scsc.hpp"

namespace psg {

/// Flat `key = value` configuration; `#` starts a comment. Unknown keys and
/// malformed values are rejected.
///
///   alpha              activity threshold on TTI                    1.7
///   gamma_th           minimum stationarity ratio for a merge        0.9
///   theta              target cluster count                          150
///   min_ac_size        smallest active component kept                5
///   max_lag            lagged covariances checked (0 = GWSS only)    0
///   shift              laplacian | adjacency                         laplacian
///   directed           edge list is directed                         true
///   seasonal_period    samples per season, 0 disables                720
///   differencing       first-difference before fitting               true
///   diag_loading       epsilon added to the covariance diagonal      0
///   model              jcm-ar | jcm-tar                              jcm-ar
///   ar_order           AR lags per graph frequency                   5
///   order_candidates   comma list tried on validation (empty = ar_order)
///   regimes            TAR regimes                                   3
///   tar_grid           quantile grid size for TAR thresholds         20
///   train_fraction     chronological split                           0.7
///   val_fraction                                                     0.1
///   test_fraction                                                    0.2
///   horizons           comma list of forecast steps                  5,7,10
///   eval_stride        steps between forecast origins                1
///   seed               random seed (mt19937_64 + Box-Muller)         0
struct PipelineConfig {
  double alpha = 1.7;
  double gamma_th = 0.9;
  int theta = 150;
  int min_ac_size = 5;
  int max_lag = 0;
  ShiftKind shift = ShiftKind::DirectedLaplacian;
  bool directed = true;
  int seasonal_period = 720;
  bool differencing = true;
  double diag_loading = 0.0;
  ModelKind model = ModelKind::JcmAr;
  int ar_order = 5;
  std::vector<int> order_candidates;
  int regimes = 3;
  int tar_grid = 20;
  double train_fraction = 0.7;
  double val_fraction = 0.1;
  double test_fraction = 0.2;
  std::vector<int> horizons{5, 7, 10};
  int eval_stride = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::filesystem::path& path);

/// Column ranges of the chronological train/validation/test split.
struct Split {
  Eigen::Index train = 0;
  Eigen::Index validation = 0;
  Eigen::Index test = 0;
};
Split split_series(Eigen::Index steps, const PipelineConfig& cfg);

// --- synthetic stationarity experiment ---------------------------------

struct SimulationOptions {
  int n = 64;
  double p = 0.06;
  std::uint64_t seed = 1;
  /// Expansion steps after the initial neighbourhood; 0 runs to saturation.
  int depth = 0;
  double super_a = 0.5;
  double super_b = 2.0;
  double quad_scale = 2.146e-3;
  double quad_offset = 1.073e-5;
};

struct SimulationStep {
  int step = 0;
  int size = 0;
  double gamma_stationary = 0.0;
  double gamma_superstationary = 0.0;
  bool full_graph = false;
};

struct SimulationReport {
  Graph graph;
  VertexId origin = 0;
  Eigen::VectorXd adjacency_eigenvalues;
  Eigen::VectorXd stationary_spectrum;
  Eigen::VectorXd superstationary_spectrum;
  /// Nested one-hop expansions from `origin`; a final row covering the whole
  /// graph is appended when the expansion cannot reach every vertex.
  std::vector<SimulationStep> steps;
  double min_gamma_stationary = 1.0;
};

SimulationReport run_simulation(const SimulationOptions& options);
void write_simulation(const SimulationReport& report, const std::filesystem::path& out_dir);

// --- pipeline commands --------------------------------------------------

struct ExtractResult {
  std::vector<ActiveComponent> extracted;
  std::vector<ActiveComponent> kept;
};

ExtractResult run_extract(const Graph& g, const TimeSeries& tti_series, const PipelineConfig& cfg);

struct ClusterResult {
  ClusterSet clusters;
  Partition partition;
  /// Stationarity ratio of each final cluster recomputed on its final vertices.
  std::vector<double> final_gamma;
  std::vector<double> ac_gamma;
};

/// Covariances C^(0..max_lag) of the preprocessed training window.
std::vector<Covariance> training_covariances(const TimeSeries& x, const PipelineConfig& cfg);

ClusterResult run_cluster(const Graph& g, const TimeSeries& x,
                          std::span<const ActiveComponent> acs, const PipelineConfig& cfg);

/// Final clusters as read back from a cluster file.
struct ClusterAssignment {
  int cluster_id = 0;
  VertexSet vertices;
};

std::vector<ClusterModel> run_fit(const Graph& g, const TimeSeries& x,
                                  std::span<const ClusterAssignment> clusters,
                                  const PipelineConfig& cfg);

struct HorizonMetrics {
  std::string model;
  int horizon = 0;
  ForecastMetrics metrics;
};

/// Rolling-origin scoring over [begin, end): forecasts from every
/// `eval_stride`-th origin, scored at each configured horizon, for the models
/// and for a persistence baseline on the same vertices.
std::vector<HorizonMetrics> run_evaluate(const TimeSeries& x,
                                         std::span<const ClusterModel> models,
                                         Eigen::Index begin, Eigen::Index end,
                                         const PipelineConfig& cfg);

/// File-level drivers behind the CLI verbs. Each returns a one-line summary.
struct CommandPaths {
  std::filesystem::path graph;
  std::filesystem::path series;
  std::filesystem::path acs;
  std::filesystem::path clusters;
  std::filesystem::path model;
  std::filesystem::path out;
};

std::string cmd_extract(const CommandPaths& paths, const PipelineConfig& cfg);
std::string cmd_cluster(const CommandPaths& paths, const PipelineConfig& cfg);
std::string cmd_fit(const CommandPaths& paths, const PipelineConfig& cfg);
std::string cmd_predict(const CommandPaths& paths, const PipelineConfig& cfg);
std::string cmd_evaluate(const CommandPaths& paths, const PipelineConfig& cfg);

}  // namespace psg
