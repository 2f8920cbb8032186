#include "psg/scsc.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace psg {

Eigen::MatrixXi ac_distance_matrix(const Graph& g, std::span<const ActiveComponent> acs) {
  const auto k = static_cast<Eigen::Index>(acs.size());
  Eigen::MatrixXi d = Eigen::MatrixXi::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (acs[i].vertices.empty()) throw ValidationError("ac_distance_matrix: empty component");
    const std::vector<int> hops = hop_distances(g, acs[i].vertices);
    for (Eigen::Index j = i + 1; j < k; ++j) {
      int best = kUnreachable;
      for (VertexId v : acs[j].vertices) {
        if (!g.valid(v)) throw ValidationError("ac_distance_matrix: invalid vertex");
        best = std::min(best, hops[v]);
      }
      d(i, j) = d(j, i) = best;
    }
  }
  return d;
}

std::vector<double> subgraph_stationarity(const Graph& g, std::span<const Covariance> lagged,
                                          const VertexSet& s, ShiftKind shift) {
  const Subgraph sub = induced_subgraph(g, s);
  const SpectralBasis basis = graph_basis(sub.graph, shift);
  std::vector<double> gammas;
  gammas.reserve(lagged.size());
  for (const Covariance& c : lagged) {
    const Covariance part = slice(c, s);
    gammas.push_back(part.matrix.norm() > 0.0 ? stationarity_ratio(basis, part) : 1.0);
  }
  return gammas;
}

namespace {

double min_of(const std::vector<double>& v) {
  return v.empty() ? 1.0 : *std::min_element(v.begin(), v.end());
}

}  // namespace

ClusterSet scsc(const Graph& g, std::span<const Covariance> lagged,
                std::span<const ActiveComponent> acs, const ScscOptions& options) {
  if (acs.empty()) throw ValidationError("scsc: no active components");
  if (!(options.gamma_th > 0.0 && options.gamma_th <= 1.0))
    throw ValidationError("scsc: gamma_th must lie in (0, 1]");
  if (options.theta < 1) throw ValidationError("scsc: theta must be at least 1");
  if (options.max_lag < 0) throw ValidationError("scsc: negative max_lag");
  if (lagged.size() < static_cast<std::size_t>(options.max_lag) + 1)
    throw ValidationError("scsc: missing lagged covariances");
  for (int l = 0; l <= options.max_lag; ++l)
    if (lagged[l].matrix.rows() != g.order() || lagged[l].matrix.cols() != g.order())
      throw ValidationError("scsc: covariance dimensions do not match the graph");
  const auto checked = lagged.first(static_cast<std::size_t>(options.max_lag) + 1);

  // slot k starts as component k; a merge reuses the lower slot
  std::vector<Cluster> slots;
  slots.reserve(acs.size());
  for (std::size_t k = 0; k < acs.size(); ++k) {
    Cluster c;
    c.id = static_cast<int>(k);
    c.vertices = acs[k].vertices;
    c.lag_gammas = subgraph_stationarity(g, checked, c.vertices, options.shift);
    c.gamma = min_of(c.lag_gammas);
    slots.push_back(std::move(c));
  }
  Eigen::MatrixXi dist = ac_distance_matrix(g, acs);
  const auto count = static_cast<int>(slots.size());
  std::vector<bool> alive(count, true);
  int live = count;
  int next_id = count;

  ClusterSet out;
  out.lags_checked = options.max_lag;

  // admissible pairs ordered by (distance, slot, slot)
  std::set<std::tuple<int, int, int>> frontier;
  for (int i = 0; i < count; ++i)
    for (int j = i + 1; j < count; ++j)
      if (dist(i, j) < 2) frontier.emplace(dist(i, j), i, j);

  while (live > options.theta && !frontier.empty()) {
    const auto [d_min, i, j] = *frontier.begin();
    frontier.erase(frontier.begin());

    const VertexSet candidate = set_union(slots[i].vertices, slots[j].vertices);
    MergeEvent event;
    event.left = slots[i].id;
    event.right = slots[j].id;
    event.d_min = d_min;
    event.lag_gammas = subgraph_stationarity(g, checked, candidate, options.shift);
    event.gamma = min_of(event.lag_gammas);

    if (event.gamma < options.gamma_th) {
      out.no_merge.emplace(std::min(event.left, event.right), std::max(event.left, event.right));
      out.log.push_back(std::move(event));
      continue;
    }

    event.accepted = true;
    event.merged = next_id;
    std::erase_if(out.no_merge, [&](const std::pair<int, int>& p) {
      return p.first == event.left || p.second == event.left || p.first == event.right ||
             p.second == event.right;
    });
    std::erase_if(frontier, [i, j](const std::tuple<int, int, int>& t) {
      const int a = std::get<1>(t), b = std::get<2>(t);
      return a == i || b == i || a == j || b == j;
    });

    slots[i] = Cluster{next_id++, candidate, event.gamma, event.lag_gammas};
    alive[j] = false;
    --live;
    for (int k = 0; k < count; ++k) {
      if (!alive[k] || k == i) continue;
      const int merged = std::min(dist(i, k), dist(j, k));
      dist(i, k) = dist(k, i) = merged;
      if (merged < 2) frontier.emplace(merged, std::min(i, k), std::max(i, k));
    }
    out.log.push_back(std::move(event));
  }

  std::vector<int> kept;
  for (int k = 0; k < count; ++k)
    if (alive[k]) kept.push_back(k);
  out.distances.resize(static_cast<Eigen::Index>(kept.size()),
                       static_cast<Eigen::Index>(kept.size()));
  for (std::size_t a = 0; a < kept.size(); ++a) {
    for (std::size_t b = 0; b < kept.size(); ++b)
      out.distances(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          a == b ? 0 : dist(kept[a], kept[b]);
    out.clusters.push_back(std::move(slots[kept[a]]));
  }
  return out;
}

Partition finalize_partition(const Graph& g, const ClusterSet& cs) {
  const int n = g.order();
  std::vector<int> owner(n, -1);  // index into cs.clusters
  auto better = [&](int a, int b) {
    const Cluster& x = cs.clusters[a];
    const Cluster& y = cs.clusters[b];
    if (x.gamma != y.gamma) return x.gamma > y.gamma;
    if (x.vertices.size() != y.vertices.size()) return x.vertices.size() > y.vertices.size();
    return x.id < y.id;
  };
  for (int c = 0; c < static_cast<int>(cs.clusters.size()); ++c)
    for (VertexId v : cs.clusters[c].vertices) {
      if (!g.valid(v)) throw ValidationError("finalize_partition: invalid vertex");
      if (owner[v] < 0 || better(c, owner[v])) owner[v] = c;
    }

  Partition p;
  p.assignment.assign(n, -1);
  for (int c = 0; c < static_cast<int>(cs.clusters.size()); ++c) {
    std::vector<bool> keep(n, false);
    bool any = false;
    for (VertexId v : cs.clusters[c].vertices)
      if (owner[v] == c) keep[v] = any = true;
    if (!any) continue;
    for (VertexSet& piece : weakly_connected_components(g, keep)) {
      const int id = static_cast<int>(p.clusters.size());
      for (VertexId v : piece) p.assignment[v] = id;
      p.clusters.push_back({id, cs.clusters[c].id, std::move(piece), cs.clusters[c].gamma});
    }
  }
  for (VertexId v = 0; v < n; ++v)
    if (p.assignment[v] < 0) p.unassigned.push_back(v);
  return p;
}

}  // namespace psg
