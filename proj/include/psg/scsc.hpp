#pragma once

#include <set>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "psg/active_components.hpp"
#include "psg/spectral.hpp"
#include "psg/stationarity.hpp"

namespace psg {

/// Pairwise set distances between active components; kUnreachable marks
/// components with no connecting path. The diagonal is zero.
Eigen::MatrixXi ac_distance_matrix(const Graph& g, std::span<const ActiveComponent> acs);

struct ScscOptions {
  double gamma_th = 0.9;
  int theta = 150;
  /// Largest lag whose cross covariance must also pass; 0 gives the GWSS test.
  int max_lag = 0;
  ShiftKind shift = ShiftKind::DirectedLaplacian;
};

/// Stationarity ratios of the process restricted to `s`, one per supplied
/// covariance (lag 0 first), using the spectrum of the induced subgraph's
/// shift. A sliced covariance that is identically zero counts as diagonal.
std::vector<double> subgraph_stationarity(const Graph& g, std::span<const Covariance> lagged,
                                          const VertexSet& s, ShiftKind shift);

struct Cluster {
  int id = 0;
  VertexSet vertices;
  /// Smallest ratio over the checked lags.
  double gamma = 1.0;
  std::vector<double> lag_gammas;
};

struct MergeEvent {
  bool accepted = false;
  int left = 0;
  int right = 0;
  int merged = -1;
  int d_min = 0;
  double gamma = 0.0;
  std::vector<double> lag_gammas;
};

struct ClusterSet {
  std::vector<Cluster> clusters;
  /// Distances between `clusters`, same ordering.
  Eigen::MatrixXi distances;
  /// Rejected pairs of live cluster ids (smaller id first).
  std::set<std::pair<int, int>> no_merge;
  std::vector<MergeEvent> log;
  int lags_checked = 0;
};

/// Greedy single-linkage merging of active components gated by stationarity.
/// `lagged` holds C^(0..max_lag) over the whole graph. Input components get
/// ids 0..|acs|-1 and every merge mints the next id.
ClusterSet scsc(const Graph& g, std::span<const Covariance> lagged,
                std::span<const ActiveComponent> acs, const ScscOptions& options);

struct PartitionCluster {
  int id = 0;
  int source_id = 0;
  VertexSet vertices;
  double source_gamma = 1.0;
};

struct Partition {
  /// Final cluster index per vertex, -1 when unassigned.
  std::vector<int> assignment;
  std::vector<PartitionCluster> clusters;
  std::vector<VertexId> unassigned;
};

/// Resolves overlaps (highest gamma wins, then the larger cluster, then the
/// smaller id) and splits clusters left disconnected by the removals.
Partition finalize_partition(const Graph& g, const ClusterSet& cs);

}  // namespace psg
