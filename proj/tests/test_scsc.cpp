#include <doctest.h>

#include "helpers.hpp"
#include "psg/scsc.hpp"

using namespace psg;

namespace {

std::vector<ActiveComponent> singletons(int n) {
  std::vector<ActiveComponent> acs;
  for (int v = 0; v < n; ++v) acs.push_back({VertexSet{v}, 0, 0});
  return acs;
}

double recomputed_gamma(const Graph& g, const Covariance& c, const VertexSet& s, ShiftKind kind) {
  const Subgraph sub = induced_subgraph(g, s);
  const SpectralBasis basis = graph_basis(sub.graph, kind);
  Eigen::MatrixXd part(s.size(), s.size());
  const auto m = s.members();
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b) part(a, b) = c.matrix(m[a], m[b]);
  return testing::gamma_oracle(basis.eigenvectors, part);
}

}  // namespace

TEST_CASE("ac distance matrix") {
  const std::vector<Edge> e{{0, 1, 1}, {1, 2, 1}, {3, 4, 1}};
  const Graph g = build_graph(5, e, false);
  const std::vector<ActiveComponent> acs{{VertexSet{0, 1}, 0, 0},
                                         {VertexSet{1, 2}, 0, 0},
                                         {VertexSet{0, 1}, 0, 0},
                                         {VertexSet{3}, 0, 0},
                                         {VertexSet{2}, 0, 0}};
  const Eigen::MatrixXi d = ac_distance_matrix(g, acs);
  CHECK(d(0, 1) == 0);
  CHECK(d(0, 2) == 0);
  CHECK(d(0, 3) == kUnreachable);
  CHECK(d(0, 4) == 1);
  CHECK(d == d.transpose());
  CHECK(d.diagonal().isZero());
}

TEST_CASE("impossible threshold keeps the input") {
  Rng rng(1);
  const Graph g = testing::random_connected_graph(12, 0.2, rng);
  const std::vector<Covariance> cov{{testing::random_psd(12, rng)}};
  const auto acs = singletons(12);
  std::vector<ActiveComponent> pairs;
  for (const auto& e : g.edges()) pairs.push_back({VertexSet{e.src, e.dst}, 0, 0});
  const ClusterSet cs = scsc(g, cov, pairs, {1.0, 1, 0, ShiftKind::DirectedLaplacian});
  REQUIRE(cs.clusters.size() == pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    CHECK(cs.clusters[k].vertices == pairs[k].vertices);
    CHECK(cs.clusters[k].id == static_cast<int>(k));
  }
  for (const auto& ev : cs.log) CHECK_FALSE(ev.accepted);
  CHECK(!cs.no_merge.empty());
  CHECK_THROWS_AS(scsc(g, cov, {}, {}), ValidationError);
  const std::vector<Covariance> wrong{{Eigen::MatrixXd::Identity(3, 3)}};
  CHECK_THROWS_AS(scsc(g, wrong, acs, {}), ValidationError);
}

TEST_CASE("superstationary input merges down to theta") {
  Rng rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const Graph g = testing::random_connected_graph(30, 0.05, rng);
    const std::vector<Covariance> cov{superstationary_covariance(adjacency(g), 0.5, 8.0)};
    for (int theta : {1, 5, 12}) {
      const ClusterSet cs = scsc(g, cov, singletons(30), {0.9, theta, 0, ShiftKind::Adjacency});
      CHECK(static_cast<int>(cs.clusters.size()) == theta);
      for (const auto& ev : cs.log) {
        CHECK(ev.accepted);
        CHECK(std::abs(ev.gamma - 1.0) <= 1e-9);
      }
    }
  }
}

TEST_CASE("merge gate matches recomputed gamma on a block-diagonal covariance") {
  // path 0-1-2-3 split into two components {0,1} and {2,3}
  const std::vector<Edge> e{{0, 1, 1}, {1, 2, 1}, {2, 3, 1}};
  const Graph g = build_graph(4, e, false);
  Rng rng(3);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 4);
  const Eigen::MatrixXd q1 = testing::random_orthogonal(2, rng);
  const Eigen::MatrixXd q2 = testing::random_orthogonal(2, rng);
  c.topLeftCorner(2, 2) = q1 * Eigen::Vector2d(1.0, 3.0).asDiagonal() * q1.transpose();
  c.bottomRightCorner(2, 2) = q2 * Eigen::Vector2d(2.0, 0.5).asDiagonal() * q2.transpose();
  const std::vector<Covariance> cov{{c}};
  const std::vector<ActiveComponent> acs{{VertexSet{0, 1}, 0, 0}, {VertexSet{2, 3}, 0, 0}};
  const double joint = recomputed_gamma(g, cov[0], VertexSet{0, 1, 2, 3}, ShiftKind::DirectedLaplacian);
  REQUIRE(joint < 1.0);

  const ClusterSet below = scsc(g, cov, acs, {joint - 1e-6, 1, 0, ShiftKind::DirectedLaplacian});
  REQUIRE(below.log.size() == 1);
  CHECK(below.log[0].accepted);
  CHECK(std::abs(below.log[0].gamma - joint) <= 1e-12);
  CHECK(below.clusters.size() == 1);

  const ClusterSet above = scsc(g, cov, acs, {joint + 1e-6, 1, 0, ShiftKind::DirectedLaplacian});
  REQUIRE(above.log.size() == 1);
  CHECK_FALSE(above.log[0].accepted);
  CHECK(above.clusters.size() == 2);
  CHECK(above.no_merge.count({0, 1}) == 1);
}

TEST_CASE("lagged gate") {
  Rng rng(4);
  const Graph g = testing::random_connected_graph(10, 0.2, rng);
  const SpectralBasis b = graph_basis(g, ShiftKind::DirectedLaplacian);
  Eigen::VectorXd spec(10);
  for (int i = 0; i < 10; ++i) spec(i) = 1.0 + i;
  const Covariance c0 = covariance_from_spectrum(b, spec);
  const Covariance c1{testing::random_matrix(10, 10, rng), 1, 100};
  const std::vector<Covariance> cov{c0, c1};
  const std::vector<ActiveComponent> whole{{VertexSet{0, 1, 2, 3, 4}, 0, 0},
                                           {VertexSet{5, 6, 7, 8, 9}, 0, 0}};
  // only the full vertex set is jointly diagonal at lag 0
  const ScscOptions gwss{0.999999, 1, 0, ShiftKind::DirectedLaplacian};
  ScscOptions jwss = gwss;
  jwss.max_lag = 1;
  const auto d = ac_distance_matrix(g, whole);
  REQUIRE(d(0, 1) < 2);
  CHECK(scsc(g, cov, whole, gwss).clusters.size() == 1);
  const ClusterSet lagged = scsc(g, cov, whole, jwss);
  CHECK(lagged.clusters.size() == 2);
  REQUIRE(lagged.log.size() == 1);
  CHECK(lagged.log[0].lag_gammas.size() == 2);
  // max_lag = 0 ignores any extra covariances
  const std::vector<Covariance> only{c0};
  const ClusterSet a = scsc(g, cov, singletons(10), {0.5, 3, 0, ShiftKind::DirectedLaplacian});
  const ClusterSet b0 = scsc(g, only, singletons(10), {0.5, 3, 0, ShiftKind::DirectedLaplacian});
  REQUIRE(a.clusters.size() == b0.clusters.size());
  for (std::size_t k = 0; k < a.clusters.size(); ++k)
    CHECK(a.clusters[k].vertices == b0.clusters[k].vertices);
}

TEST_CASE("recorded merges are reproducible and distances single-linkage") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = testing::random_connected_graph(25, 0.06, rng);
    const std::vector<Covariance> cov{{testing::random_psd(25, rng)}};
    std::vector<ActiveComponent> acs;
    for (int k = 0; k < 12; ++k) {
      const int v = static_cast<int>(rng.below(25));
      std::vector<VertexId> s{v};
      for (VertexId u : g.neighbours(v)) s.push_back(u);
      acs.push_back({VertexSet(s), 0, 0});
    }
    const double th = 0.3 + 0.4 * rng.uniform();
    const ClusterSet cs = scsc(g, cov, acs, {th, 2, 0, ShiftKind::DirectedLaplacian});
    for (const auto& ev : cs.log) {
      if (!ev.accepted) continue;
      CHECK(ev.gamma >= th);
    }
    for (const auto& c : cs.clusters)
      CHECK(std::abs(c.gamma - recomputed_gamma(g, cov[0], c.vertices, ShiftKind::DirectedLaplacian)) <= 1e-12);
    for (Eigen::Index a = 0; a < cs.distances.rows(); ++a)
      for (Eigen::Index b = 0; b < cs.distances.cols(); ++b) {
        const int truth = set_distance(g, cs.clusters[a].vertices, cs.clusters[b].vertices);
        const int stored = cs.distances(a, b);
        if (truth <= 1 || stored <= 1) CHECK(stored == truth);
        CHECK(stored >= truth);
      }
    const Partition p = finalize_partition(g, cs);
    std::vector<int> hits(25, 0);
    for (const auto& c : p.clusters) {
      CHECK(is_weakly_connected(g, c.vertices));
      for (VertexId v : c.vertices) ++hits[v];
    }
    for (int v = 0; v < 25; ++v) CHECK(hits[v] == (p.assignment[v] >= 0 ? 1 : 0));
  }
}

TEST_CASE("finalize partition") {
  const std::vector<Edge> e{{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 5, 1}};
  const Graph g = build_graph(7, e, false);

  ClusterSet disjoint;
  disjoint.clusters = {{0, VertexSet{0, 1}, 0.9, {}}, {1, VertexSet{3, 4}, 0.95, {}}};
  const Partition d = finalize_partition(g, disjoint);
  REQUIRE(d.clusters.size() == 2);
  CHECK(d.clusters[0].vertices == VertexSet{0, 1});
  CHECK(d.clusters[1].vertices == VertexSet{3, 4});
  CHECK(d.unassigned == std::vector<VertexId>{2, 5, 6});

  ClusterSet shared;
  shared.clusters = {{0, VertexSet{0, 1, 2}, 0.92, {}}, {1, VertexSet{2, 3}, 0.95, {}}};
  const Partition s = finalize_partition(g, shared);
  CHECK(s.assignment[2] == s.assignment[3]);
  CHECK(s.clusters[s.assignment[2]].source_id == 1);

  ClusterSet tie;
  tie.clusters = {{4, VertexSet{1, 2}, 0.9, {}}, {2, VertexSet{2, 3}, 0.9, {}},
                  {3, VertexSet{2, 3, 4}, 0.9, {}}};
  const Partition t = finalize_partition(g, tie);
  CHECK(t.clusters[t.assignment[2]].source_id == 3);
  CHECK(t.clusters[t.assignment[1]].source_id == 4);

  ClusterSet same_size;
  same_size.clusters = {{5, VertexSet{1, 2}, 0.9, {}}, {2, VertexSet{2, 3}, 0.9, {}}};
  CHECK(finalize_partition(g, same_size).clusters[0].source_id == 5);
  const Partition ss = finalize_partition(g, same_size);
  CHECK(ss.clusters[ss.assignment[2]].source_id == 2);

  // removing vertex 2 splits {0..4} into {0,1} and {3,4}
  ClusterSet split;
  split.clusters = {{0, VertexSet{0, 1, 2, 3, 4}, 0.91, {}}, {1, VertexSet{2}, 0.99, {}}};
  const Partition sp = finalize_partition(g, split);
  REQUIRE(sp.clusters.size() == 3);
  CHECK(sp.clusters[0].vertices == VertexSet{0, 1});
  CHECK(sp.clusters[1].vertices == VertexSet{3, 4});
  CHECK(sp.clusters[2].vertices == VertexSet{2});
}
