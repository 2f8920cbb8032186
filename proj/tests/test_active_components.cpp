#include <doctest.h>

#include "oracles.hpp"
#include "psg/active_components.hpp"

using namespace psg;

TEST_CASE("active mask") {
  Eigen::MatrixXd v(2, 2);
  v << 1.0, 1.7, 2.0, 0.5;
  const TimeSeries y{v};
  CHECK(active_mask(y, -1.0).all());
  CHECK_FALSE(active_mask(y, 3.0).any());
  const ActivityMask m = active_mask(y, 1.7);
  CHECK(m(0, 1));
  CHECK_FALSE(m(0, 0));
  CHECK(m(1, 0));
}

TEST_CASE("spreading activity fixture") {
  const auto inst = testing::spread_instance();
  const auto acs = extract_active_components(inst.graph, inst.series, inst.alpha);
  REQUIRE(acs.size() == 1);
  CHECK(acs[0].vertices == VertexSet{1, 3, 4, 5, 6, 7});
  CHECK(acs[0].birth == 0);
  CHECK(acs[0].death == 3);
  const auto oracle = strong_product_oracle(inst.graph, inst.series, inst.alpha);
  REQUIRE(oracle.size() == 1);
  CHECK(oracle[0].vertices == VertexSet{1, 3, 4, 5, 6, 7});
}

TEST_CASE("small cases") {
  const std::vector<Edge> path{{0, 1, 1}, {1, 2, 1}, {3, 4, 1}, {4, 5, 1}};
  const Graph g = build_graph(6, path, false);
  CHECK(extract_active_components(g, TimeSeries{Eigen::MatrixXd::Zero(6, 5)}, 1.0).empty());

  // two bursts on disjoint parts, separated in time
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(6, 5);
  v(0, 0) = v(1, 0) = v(1, 1) = 1.0;
  v(4, 3) = v(5, 3) = v(5, 4) = 1.0;
  const auto two = extract_active_components(g, TimeSeries{v}, 1.0);
  REQUIRE(two.size() == 2);
  CHECK(two[0].vertices == VertexSet{0, 1});
  CHECK(two[1].vertices == VertexSet{4, 5});
  CHECK(two[1].death == 4);

  // i active at t, neighbour j only at t+1
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(6, 3);
  w(0, 0) = 1.0;
  w(1, 1) = 1.0;
  const auto hop = extract_active_components(g, TimeSeries{w}, 1.0);
  REQUIRE(hop.size() == 1);
  CHECK(hop[0].vertices == VertexSet{0, 1});

  // the same vertex reactivating after a gap starts a new component
  Eigen::MatrixXd gap = Eigen::MatrixXd::Zero(6, 4);
  gap(2, 0) = gap(2, 2) = 1.0;
  CHECK(extract_active_components(g, TimeSeries{gap}, 1.0).size() == 2);

  Eigen::MatrixXd single = Eigen::MatrixXd::Zero(6, 1);
  single(3, 0) = 5.0;
  const auto one = strong_product_oracle(g, TimeSeries{single}, 1.0);
  REQUIRE(one.size() == 1);
  CHECK(one[0].vertices == VertexSet{3});

  CHECK_THROWS_AS(extract_active_components(g, TimeSeries{Eigen::MatrixXd::Zero(5, 3)}, 1.0),
                  ValidationError);
  CHECK_THROWS_AS(strong_product_oracle(g, TimeSeries{Eigen::MatrixXd::Zero(6, 3)}, 1.0, 10),
                  ValidationError);
}

TEST_CASE("random instances against both oracles") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = testing::random_ac_instance(rng);
    const auto acs = extract_active_components(inst.graph, inst.series, inst.alpha);
    const auto fam = testing::vertex_families(acs);
    CHECK(fam == testing::vertex_families(strong_product_oracle(inst.graph, inst.series, inst.alpha)));
    CHECK(fam == testing::flood_fill_components(inst.graph, inst.series.values, inst.alpha));
    for (const auto& a : acs) {
      CHECK(is_weakly_connected(inst.graph, a.vertices));
      CHECK(a.birth <= a.death);
    }
  }
}

TEST_CASE("lowering alpha grows the covered vertex set") {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = testing::random_ac_instance(rng);
    std::set<int> previous;
    for (double alpha = 1.0; alpha >= 0.0; alpha -= 0.1) {
      std::set<int> covered;
      for (const auto& a : extract_active_components(inst.graph, inst.series, alpha))
        covered.insert(a.vertices.begin(), a.vertices.end());
      CHECK(std::includes(covered.begin(), covered.end(), previous.begin(), previous.end()));
      previous = covered;
    }
  }
}

TEST_CASE("filter min size") {
  std::vector<ActiveComponent> acs{{VertexSet{1, 2, 3}, 0, 0},
                                   {VertexSet{1, 2, 3, 4, 5}, 0, 1},
                                   {VertexSet{0, 1, 2, 3, 4, 5, 6}, 1, 2}};
  CHECK(filter_min_size(acs, 1).size() == 3);
  const auto kept = filter_min_size(acs, 5);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].vertices.size() == 5);
  CHECK(kept[1].vertices.size() == 7);
  CHECK(filter_min_size(acs, 8).empty());
}
