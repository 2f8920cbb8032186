#include <doctest.h>

#include "helpers.hpp"
#include "psg/graph.hpp"

using namespace psg;

TEST_CASE("build_graph basics") {
  const std::vector<Edge> one{{0, 1, 1.0}};
  const Graph g = build_graph(2, one, false);
  Eigen::Matrix2d expected;
  expected << 0, 1, 1, 0;
  CHECK(adjacency(g) == expected);

  const std::vector<Edge> dup{{0, 1, 1.0}, {0, 1, 1.0}};
  const Graph d = build_graph(3, dup, false);
  REQUIRE(d.edges().size() == 1);
  CHECK(d.edges()[0].weight == 2.0);

  const std::vector<Edge> reversed{{0, 1, 1.0}, {1, 0, 0.5}};
  CHECK(build_graph(2, reversed, false).edges().size() == 1);
  CHECK(build_graph(2, reversed, true).edges().size() == 2);
}

TEST_CASE("build_graph validation") {
  const std::vector<Edge> out_of_range{{0, 5, 1.0}};
  CHECK_THROWS_AS(build_graph(2, out_of_range, false), ValidationError);
  const std::vector<Edge> negative{{0, 1, -1.0}};
  CHECK_THROWS_AS(build_graph(2, negative, false), ValidationError);
  const std::vector<Edge> nan{{0, 1, std::nan("")}};
  CHECK_THROWS_AS(build_graph(2, nan, false), ValidationError);
  const std::vector<Edge> loop{{1, 1, 1.0}};
  CHECK_THROWS_AS(build_graph(2, loop, false), ValidationError);
}

TEST_CASE("adjacency") {
  const std::vector<Edge> e{{0, 1, 3.0}};
  Eigen::Matrix2d expected;
  expected << 0, 3, 0, 0;
  CHECK(adjacency(build_graph(2, e, true)) == expected);
  CHECK(adjacency(build_graph(2, {}, false)).isZero());
}

TEST_CASE("directed laplacian") {
  const std::vector<Edge> e{{0, 1, 1.0}};
  Eigen::Matrix2d half;
  half << 0.5, -0.5, -0.5, 0.5;
  CHECK((directed_laplacian(build_graph(2, e, true)) - half).norm() < 1e-15);
  Eigen::Matrix2d full;
  full << 1, -1, -1, 1;
  CHECK((directed_laplacian(build_graph(2, e, false)) - full).norm() < 1e-15);
  CHECK(directed_laplacian(build_graph(3, {}, true)).isZero());

  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Edge> edges;
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j)
        if (i != j && rng.uniform() < 0.2) edges.push_back({i, j, 0.5 + rng.uniform()});
    const Eigen::MatrixXd l = directed_laplacian(build_graph(12, edges, true));
    CHECK((l - l.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(l.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("induced subgraph") {
  const std::vector<Edge> tri{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
  const Graph t = build_graph(3, tri, false);
  const Subgraph s = induced_subgraph(t, VertexSet{0, 1});
  CHECK(s.graph.order() == 2);
  CHECK(s.graph.edges().size() == 1);
  CHECK(induced_subgraph(t, VertexSet{0, 1, 2}).graph.edges().size() == 3);
  CHECK(adjacency(induced_subgraph(t, VertexSet{0, 1, 2}).graph) == adjacency(t));

  const std::vector<Edge> star{{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}};
  const Subgraph leaves = induced_subgraph(build_graph(4, star, false), VertexSet{1, 2});
  CHECK(leaves.graph.order() == 2);
  CHECK(leaves.graph.edges().empty());
  CHECK(leaves.origin == std::vector<VertexId>{1, 2});

  CHECK_THROWS_AS(induced_subgraph(t, VertexSet{}), ValidationError);
  CHECK_THROWS_AS(induced_subgraph(t, VertexSet{0, 7}), ValidationError);
}

TEST_CASE("weakly connected components") {
  const std::vector<Edge> two{{0, 1, 1.0}, {2, 3, 1.0}};
  CHECK(weakly_connected_components(build_graph(4, two, false)) ==
        std::vector<VertexSet>{VertexSet{0, 1}, VertexSet{2, 3}});
  const std::vector<Edge> path{{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}};
  CHECK(weakly_connected_components(build_graph(4, path, false)).size() == 1);
  const std::vector<Edge> chain{{0, 1, 1.0}, {1, 2, 1.0}};
  const Graph c = build_graph(3, chain, true);
  CHECK(weakly_connected_components(c) == std::vector<VertexSet>{VertexSet{0, 1, 2}});
  CHECK_FALSE(is_strongly_connected(c));

  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = erdos_renyi(30, 0.05, rng.next_u64());
    const auto comps = weakly_connected_components(g);
    std::vector<int> seen(30, 0);
    for (const auto& s : comps)
      for (VertexId v : s) ++seen[v];
    CHECK(std::all_of(seen.begin(), seen.end(), [](int k) { return k == 1; }));
  }
}

TEST_CASE("set distance") {
  const std::vector<Edge> path{{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}};
  const Graph g = build_graph(5, path, false);
  CHECK(set_distance(g, VertexSet{0, 1}, VertexSet{1, 2}) == 0);
  CHECK(set_distance(g, VertexSet{0}, VertexSet{1}) == 1);
  CHECK(set_distance(g, VertexSet{0}, VertexSet{2}) == 2);
  CHECK(set_distance(g, VertexSet{0}, VertexSet{4}) == kUnreachable);
  CHECK_THROWS_AS(set_distance(g, VertexSet{}, VertexSet{1}), ValidationError);

  const std::vector<Edge> directed{{0, 1, 1.0}, {2, 1, 1.0}};
  const Graph d = build_graph(3, directed, true);
  CHECK(set_distance(d, VertexSet{0}, VertexSet{2}) == 2);
  CHECK(set_distance(d, VertexSet{2}, VertexSet{0}) == 2);

  Rng rng(5);
  const Graph er = erdos_renyi(25, 0.1, 17);
  for (int trial = 0; trial < 30; ++trial) {
    const VertexSet a{static_cast<int>(rng.below(25)), static_cast<int>(rng.below(25))};
    const VertexSet b{static_cast<int>(rng.below(25))};
    CHECK(set_distance(er, a, b) == set_distance(er, b, a));
    CHECK(set_distance(er, a, a) == 0);
  }
}

TEST_CASE("erdos renyi") {
  CHECK(erdos_renyi(10, 0.0, 1).edges().empty());
  CHECK(erdos_renyi(10, 1.0, 1).edges().size() == 45);
  CHECK_THROWS_AS(erdos_renyi(10, 1.5, 1), ValidationError);
  CHECK(graph_hash(erdos_renyi(64, 0.06, 9)) == graph_hash(erdos_renyi(64, 0.06, 9)));

  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed)
    total += static_cast<double>(erdos_renyi(64, 0.06, seed).edges().size());
  const double mean = total / 1000.0;
  const double expected = 0.06 * 2016.0;
  CHECK(std::abs(mean - expected) <= 0.1 * expected);
}
