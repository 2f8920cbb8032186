#include "psg/active_components.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

namespace psg {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

void check_shapes(const Graph& g, const TimeSeries& y) {
  if (y.vertices() != g.order())
    throw ValidationError("time series has " + std::to_string(y.vertices()) +
                          " rows but the graph has " + std::to_string(g.order()) +
                          " vertices");
  if (!y.values.allFinite()) throw ValidationError("time series contains non-finite values");
}

void sort_components(std::vector<ActiveComponent>& acs) {
  std::sort(acs.begin(), acs.end(), [](const ActiveComponent& a, const ActiveComponent& b) {
    return std::tie(a.death, a.birth, a.vertices) < std::tie(b.death, b.birth, b.vertices);
  });
}

}  // namespace

ActivityMask active_mask(const TimeSeries& y, double alpha) {
  return y.values.array() >= alpha;
}

std::vector<ActiveComponent> extract_active_components(const Graph& g, const TimeSeries& y,
                                                       double alpha) {
  check_shapes(g, y);
  const ActivityMask mask = active_mask(y, alpha);

  struct Open {
    VertexSet vertices;
    VertexSet frontier;
    long birth;
  };
  std::vector<Open> open;
  std::vector<ActiveComponent> done;
  std::vector<int> owner(g.order(), -1);  // open component holding v in its frontier

  for (Eigen::Index col = 0; col < y.steps(); ++col) {
    const long now = y.start + static_cast<long>(col);
    std::vector<bool> keep(g.order());
    for (VertexId v = 0; v < g.order(); ++v) keep[v] = mask(v, col);
    const std::vector<VertexSet> comps = weakly_connected_components(g, keep);

    const std::size_t fresh = comps.size();
    DisjointSets sets(fresh + open.size());
    for (std::size_t k = 0; k < fresh; ++k) {
      // one-hop expansion of the component tested against previous frontiers
      for (VertexId v : comps[k]) {
        if (owner[v] >= 0) sets.unite(k, fresh + owner[v]);
        for (VertexId w : g.neighbours(v))
          if (owner[w] >= 0) sets.unite(k, fresh + owner[w]);
      }
    }

    std::map<std::size_t, Open> grown;
    std::vector<bool> continued(open.size(), false);
    for (std::size_t k = 0; k < fresh; ++k) {
      auto [it, inserted] = grown.try_emplace(sets.find(k), Open{comps[k], comps[k], now});
      if (!inserted) {
        it->second.vertices = set_union(it->second.vertices, comps[k]);
        it->second.frontier = set_union(it->second.frontier, comps[k]);
      }
    }
    for (std::size_t j = 0; j < open.size(); ++j) {
      auto it = grown.find(sets.find(fresh + j));
      if (it == grown.end()) {
        done.push_back({open[j].vertices, open[j].birth, now - 1});
        continue;
      }
      it->second.vertices = set_union(it->second.vertices, open[j].vertices);
      it->second.birth = std::min(it->second.birth, open[j].birth);
    }

    for (const Open& o : open)
      for (VertexId v : o.frontier) owner[v] = -1;
    open.clear();
    for (auto& [root, o] : grown) {
      for (VertexId v : o.frontier) owner[v] = static_cast<int>(open.size());
      open.push_back(std::move(o));
    }
  }
  const long last = y.start + static_cast<long>(y.steps()) - 1;
  for (Open& o : open) done.push_back({std::move(o.vertices), o.birth, last});

  sort_components(done);
  return done;
}

std::vector<ActiveComponent> strong_product_oracle(const Graph& g, const TimeSeries& y,
                                                   double alpha, long max_nodes) {
  check_shapes(g, y);
  const long n = g.order();
  const long steps = static_cast<long>(y.steps());
  if (n * steps > max_nodes)
    throw ValidationError("strong_product_oracle: " + std::to_string(n * steps) +
                          " spatio-temporal nodes exceed the limit");
  const ActivityMask mask = active_mask(y, alpha);
  auto node = [n](long i, long t) { return static_cast<std::size_t>(t * n + i); };

  DisjointSets sets(static_cast<std::size_t>(n * steps));
  for (long t = 0; t < steps; ++t) {
    for (long i = 0; i < n; ++i) {
      if (!mask(i, t)) continue;
      if (t + 1 < steps && mask(i, t + 1)) sets.unite(node(i, t), node(i, t + 1));
      for (VertexId j : g.neighbours(static_cast<VertexId>(i))) {
        if (mask(j, t)) sets.unite(node(i, t), node(j, t));
        if (t + 1 < steps && mask(j, t + 1)) sets.unite(node(i, t), node(j, t + 1));
      }
    }
  }

  struct Acc {
    std::vector<VertexId> members;
    long birth;
    long death;
  };
  std::map<std::size_t, Acc> groups;
  for (long t = 0; t < steps; ++t)
    for (long i = 0; i < n; ++i) {
      if (!mask(i, t)) continue;
      const long when = y.start + t;
      auto [it, inserted] = groups.try_emplace(sets.find(node(i, t)), Acc{{}, when, when});
      it->second.members.push_back(static_cast<VertexId>(i));
      it->second.birth = std::min(it->second.birth, when);
      it->second.death = std::max(it->second.death, when);
    }

  std::vector<ActiveComponent> out;
  out.reserve(groups.size());
  for (auto& [root, acc] : groups)
    out.push_back({VertexSet(std::move(acc.members)), acc.birth, acc.death});
  sort_components(out);
  return out;
}

std::vector<ActiveComponent> filter_min_size(std::vector<ActiveComponent> acs, std::size_t k) {
  if (k < 1) throw ValidationError("filter_min_size: k must be at least 1");
  std::erase_if(acs, [k](const ActiveComponent& ac) { return ac.vertices.size() < k; });
  return acs;
}

}  // namespace psg
