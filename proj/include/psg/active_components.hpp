#pragma once

#include <vector>

#include <Eigen/Dense>

#include "psg/graph.hpp"
#include "psg/stationarity.hpp"

namespace psg {

/// Vertices reached by one spatio-temporal activity pattern, together with
/// the first and last time steps at which any of them was active.
struct ActiveComponent {
  VertexSet vertices;
  long birth = 0;
  long death = 0;
};

using ActivityMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// (i, t) is active iff y(i, t) >= alpha.
ActivityMask active_mask(const TimeSeries& y, double alpha);

/// Sweeps time once, tracking the open components: the connected components
/// of the active subgraph at step t join every open component whose active
/// frontier at t-1 lies within one hop of them. Components with no successor
/// are emitted; components still open at the last step are flushed. Output is
/// ordered by (death, birth, vertices).
std::vector<ActiveComponent> extract_active_components(const Graph& g, const TimeSeries& y,
                                                       double alpha);

/// Reference construction: weakly connected components of the strong product
/// of g with the time path, after dropping inactive (i, t) nodes, projected
/// onto their spatial vertices. Refuses N*T above `max_nodes`.
std::vector<ActiveComponent> strong_product_oracle(const Graph& g, const TimeSeries& y,
                                                   double alpha, long max_nodes = 1'000'000);

std::vector<ActiveComponent> filter_min_size(std::vector<ActiveComponent> acs, std::size_t k);

}  // namespace psg
