#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psg/common.hpp"

namespace psg {

using VertexId = int;

struct Edge {
  VertexId src = 0;
  VertexId dst = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Sorted, duplicate-free collection of vertex ids.
class VertexSet {
 public:
  VertexSet() = default;
  /// Sorts and removes duplicates.
  VertexSet(std::vector<VertexId> ids);
  VertexSet(std::initializer_list<VertexId> ids)
      : VertexSet(std::vector<VertexId>(ids)) {}

  std::span<const VertexId> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(VertexId v) const;
  VertexId front() const { return members_.front(); }

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  friend VertexSet set_union(const VertexSet& a, const VertexSet& b);
  friend bool intersects(const VertexSet& a, const VertexSet& b);
  friend bool operator==(const VertexSet&, const VertexSet&) = default;
  friend auto operator<=>(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<VertexId> members_;
};

VertexSet set_union(const VertexSet& a, const VertexSet& b);
bool intersects(const VertexSet& a, const VertexSet& b);

/// Weighted graph on vertices 0..n-1. Edges are stored once; for undirected
/// graphs each edge is kept with src < dst.
class Graph {
 public:
  Graph() = default;

  int order() const { return n_; }
  bool directed() const { return directed_; }
  std::span<const Edge> edges() const { return edges_; }

  const std::vector<std::string>& labels() const { return labels_; }
  /// External label of vertex v; falls back to its decimal id.
  std::string label(VertexId v) const;
  void set_labels(std::vector<std::string> labels);

  /// Neighbours of v with edge direction ignored, ascending, no repeats.
  std::span<const VertexId> neighbours(VertexId v) const {
    return {skeleton_.data() + offsets_[v], skeleton_.data() + offsets_[v + 1]};
  }

  bool valid(VertexId v) const { return v >= 0 && v < n_; }

 private:
  friend Graph build_graph(int, std::span<const Edge>, bool, bool);

  int n_ = 0;
  bool directed_ = false;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  // CSR of the undirected skeleton
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> skeleton_;
};

/// Validates and assembles a graph. Duplicate edges are collapsed by summing
/// their weights; for undirected graphs (u,v) and (v,u) are the same edge.
Graph build_graph(int n, std::span<const Edge> edges, bool directed,
                  bool allow_self_loops = false);

Eigen::MatrixXd adjacency(const Graph& g);

/// Combinatorial Laplacian of a directed graph,
/// L = (D_out + D_in - A - A^T) / 2. Reduces to D - A when undirected.
Eigen::MatrixXd directed_laplacian(const Graph& g);

/// Induced subgraph with vertices relabelled 0..|s|-1 in ascending order of
/// their original ids; `origin[k]` is the original id of new vertex k.
struct Subgraph {
  Graph graph;
  std::vector<VertexId> origin;
};

Subgraph induced_subgraph(const Graph& g, const VertexSet& s);

/// Components of the undirected skeleton, ordered by smallest member.
std::vector<VertexSet> weakly_connected_components(const Graph& g);

/// Components of the skeleton restricted to the vertices where `keep` is true.
std::vector<VertexSet> weakly_connected_components(const Graph& g,
                                                   const std::vector<bool>& keep);

bool is_weakly_connected(const Graph& g, const VertexSet& s);
bool is_strongly_connected(const Graph& g);

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// Hop distance from every vertex to the nearest member of `sources` on the
/// undirected skeleton; kUnreachable where no path exists.
std::vector<int> hop_distances(const Graph& g, const VertexSet& sources);

/// Minimum hop distance between members of s1 and s2 on the undirected
/// skeleton (0 when they intersect, kUnreachable when disconnected).
int set_distance(const Graph& g, const VertexSet& s1, const VertexSet& s2);

/// G(n, p): each unordered pair joined independently with probability p.
Graph erdos_renyi(int n, double p, std::uint64_t seed);

/// Deterministic 64-bit FNV-1a digest of the labelled edge list.
std::uint64_t graph_hash(const Graph& g);

}  // namespace psg
