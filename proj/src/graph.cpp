#include "psg/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <utility>

namespace psg {

VertexSet::VertexSet(std::vector<VertexId> ids) : members_(std::move(ids)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool VertexSet::contains(VertexId v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  out.members_.reserve(a.size() + b.size());
  std::set_union(a.members_.begin(), a.members_.end(), b.members_.begin(),
                 b.members_.end(), std::back_inserter(out.members_));
  return out;
}

bool intersects(const VertexSet& a, const VertexSet& b) {
  auto i = a.members_.begin();
  auto j = b.members_.begin();
  while (i != a.members_.end() && j != b.members_.end()) {
    if (*i == *j) return true;
    if (*i < *j)
      ++i;
    else
      ++j;
  }
  return false;
}

std::string Graph::label(VertexId v) const {
  if (static_cast<std::size_t>(v) < labels_.size()) return labels_[v];
  return std::to_string(v);
}

void Graph::set_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != static_cast<std::size_t>(n_))
    throw ValidationError("label count does not match vertex count");
  labels_ = std::move(labels);
}

Graph build_graph(int n, std::span<const Edge> edges, bool directed,
                  bool allow_self_loops) {
  if (n < 0) throw ValidationError("negative vertex count");
  std::map<std::pair<VertexId, VertexId>, double> merged;
  for (const Edge& e : edges) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n)
      throw ValidationError("edge endpoint out of range: (" +
                            std::to_string(e.src) + "," +
                            std::to_string(e.dst) + ")");
    if (std::isnan(e.weight)) throw ValidationError("NaN edge weight");
    if (!std::isfinite(e.weight)) throw ValidationError("infinite edge weight");
    if (e.weight < 0.0) throw ValidationError("negative edge weight");
    if (e.src == e.dst && !allow_self_loops)
      throw ValidationError("self-loop on vertex " + std::to_string(e.src));
    auto key = std::make_pair(e.src, e.dst);
    if (!directed && key.first > key.second) std::swap(key.first, key.second);
    merged[key] += e.weight;
  }

  Graph g;
  g.n_ = n;
  g.directed_ = directed;
  g.edges_.reserve(merged.size());
  std::vector<std::vector<VertexId>> adj(n);
  for (const auto& [key, w] : merged) {
    g.edges_.push_back({key.first, key.second, w});
    if (key.first != key.second) {
      adj[key.first].push_back(key.second);
      adj[key.second].push_back(key.first);
    }
  }
  g.offsets_.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) {
    auto& a = adj[v];
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    g.offsets_[v + 1] = g.offsets_[v] + a.size();
  }
  g.skeleton_.reserve(g.offsets_[n]);
  for (const auto& a : adj) g.skeleton_.insert(g.skeleton_.end(), a.begin(), a.end());
  return g;
}

Eigen::MatrixXd adjacency(const Graph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.order(), g.order());
  for (const Edge& e : g.edges()) {
    a(e.src, e.dst) += e.weight;
    if (!g.directed() && e.src != e.dst) a(e.dst, e.src) += e.weight;
  }
  return a;
}

Eigen::MatrixXd directed_laplacian(const Graph& g) {
  const Eigen::MatrixXd a = adjacency(g);
  Eigen::MatrixXd l = -0.5 * (a + a.transpose());
  const Eigen::VectorXd out_deg = a.rowwise().sum();
  const Eigen::VectorXd in_deg = a.colwise().sum().transpose();
  l.diagonal() += 0.5 * (out_deg + in_deg);
  return l;
}

Subgraph induced_subgraph(const Graph& g, const VertexSet& s) {
  if (s.empty()) throw ValidationError("induced_subgraph: empty vertex set");
  std::vector<int> local(g.order(), -1);
  Subgraph out;
  out.origin.assign(s.begin(), s.end());
  for (std::size_t k = 0; k < out.origin.size(); ++k) {
    const VertexId v = out.origin[k];
    if (!g.valid(v))
      throw ValidationError("induced_subgraph: invalid vertex " + std::to_string(v));
    local[v] = static_cast<int>(k);
  }
  std::vector<Edge> kept;
  for (const Edge& e : g.edges())
    if (local[e.src] >= 0 && local[e.dst] >= 0)
      kept.push_back({local[e.src], local[e.dst], e.weight});
  out.graph = build_graph(static_cast<int>(s.size()), kept, g.directed(), true);
  if (!g.labels().empty()) {
    std::vector<std::string> labels;
    labels.reserve(s.size());
    for (VertexId v : out.origin) labels.push_back(g.labels()[v]);
    out.graph.set_labels(std::move(labels));
  }
  return out;
}

std::vector<VertexSet> weakly_connected_components(const Graph& g,
                                                   const std::vector<bool>& keep) {
  const int n = g.order();
  std::vector<bool> seen(n, false);
  std::vector<VertexSet> comps;
  std::vector<VertexId> stack;
  for (VertexId root = 0; root < n; ++root) {
    if (seen[root] || !keep[root]) continue;
    std::vector<VertexId> members;
    stack.push_back(root);
    seen[root] = true;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (VertexId w : g.neighbours(v)) {
        if (!seen[w] && keep[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    comps.emplace_back(std::move(members));
  }
  return comps;
}

std::vector<VertexSet> weakly_connected_components(const Graph& g) {
  return weakly_connected_components(g, std::vector<bool>(g.order(), true));
}

bool is_weakly_connected(const Graph& g, const VertexSet& s) {
  if (s.empty()) return false;
  std::vector<bool> keep(g.order(), false);
  for (VertexId v : s) keep[v] = true;
  return weakly_connected_components(g, keep).size() == 1;
}

bool is_strongly_connected(const Graph& g) {
  const int n = g.order();
  if (n == 0) return false;
  if (!g.directed()) return weakly_connected_components(g).size() == 1;
  std::vector<std::vector<VertexId>> fwd(n), bwd(n);
  for (const Edge& e : g.edges()) {
    if (e.weight <= 0.0) continue;
    fwd[e.src].push_back(e.dst);
    bwd[e.dst].push_back(e.src);
  }
  auto reaches_all = [n](const std::vector<std::vector<VertexId>>& adj) {
    std::vector<bool> seen(n, false);
    std::vector<VertexId> stack{0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (VertexId w : adj[v])
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          stack.push_back(w);
        }
    }
    return count == n;
  };
  return reaches_all(fwd) && reaches_all(bwd);
}

std::vector<int> hop_distances(const Graph& g, const VertexSet& sources) {
  std::vector<int> dist(g.order(), kUnreachable);
  std::deque<VertexId> queue;
  for (VertexId v : sources) {
    if (!g.valid(v)) throw ValidationError("hop_distances: invalid vertex");
    dist[v] = 0;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (VertexId w : g.neighbours(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

int set_distance(const Graph& g, const VertexSet& s1, const VertexSet& s2) {
  if (s1.empty() || s2.empty()) throw ValidationError("set_distance: empty vertex set");
  for (VertexId v : s2)
    if (!g.valid(v)) throw ValidationError("set_distance: invalid vertex");
  const std::vector<int> dist = hop_distances(g, s1);
  int best = kUnreachable;
  for (VertexId v : s2) best = std::min(best, dist[v]);
  return best;
}

Graph erdos_renyi(int n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("edge probability outside [0,1]");
  if (n < 0) throw ValidationError("negative vertex count");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < p) edges.push_back({i, j, 1.0});
  return build_graph(n, edges, false);
}

std::uint64_t graph_hash(const Graph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  auto mix_str = [&mix](const std::string& s) {
    mix(s.data(), s.size());
    const char sep = '\x1f';
    mix(&sep, 1);
  };
  const std::int64_t n = g.order();
  const unsigned char directed = g.directed() ? 1 : 0;
  mix(&n, sizeof n);
  mix(&directed, 1);
  for (VertexId v = 0; v < g.order(); ++v) mix_str(g.label(v));
  for (const Edge& e : g.edges()) {
    const std::int64_t ends[2] = {e.src, e.dst};
    mix(ends, sizeof ends);
    mix(&e.weight, sizeof e.weight);
  }
  return h;
}

}  // namespace psg
