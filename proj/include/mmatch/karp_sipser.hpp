#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "mmatch/graph.hpp"
#include "mmatch/random.hpp"

namespace mmatch {

/// Outcome of one Karp-Sipser run.
///
/// The core is the subgraph left when leaf removal first runs out of
/// pendant edges (minimum degree >= 2). `leaf_phase_edges` counts the edges
/// matched before that moment; `core_exposed_count` counts core vertices the
/// final matching leaves exposed.
struct KarpSipserReport {
  Matching matching;
  std::size_t leaf_phase_edges = 0;
  std::size_t core_vertex_count = 0;
  std::size_t core_exposed_count = 0;
};

namespace detail {

/// Set of small integers with O(1) insert, erase and uniform draw.
class IndexedSet {
 public:
  explicit IndexedSet(std::size_t universe) : pos_(universe, absent) {}

  bool contains(std::size_t x) const { return pos_[x] != absent; }
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }

  void insert(std::size_t x) {
    if (contains(x)) return;
    pos_[x] = items_.size();
    items_.push_back(x);
  }

  void erase(std::size_t x) {
    if (!contains(x)) return;
    std::size_t i = pos_[x];
    items_[i] = items_.back();
    pos_[items_[i]] = i;
    items_.pop_back();
    pos_[x] = absent;
  }

  std::size_t draw(Rng& rng) const { return items_[uniform_index(rng, items_.size())]; }

 private:
  static constexpr std::size_t absent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> pos_;
  std::vector<std::size_t> items_;
};

}  // namespace detail

/// Karp-Sipser greedy matching.
///
/// While a pendant edge exists, match one chosen uniformly among the current
/// pendant edges and delete both endpoints; otherwise match a uniformly
/// chosen remaining edge. Leaf removal restarts after every such core
/// selection. The result is always a maximal matching, and it is maximum
/// on forests.
inline KarpSipserReport karp_sipser(const Graph& g, std::uint64_t seed) {
  const std::size_t n = g.vertex_count();
  Rng rng = make_rng(seed);

  // Edge ids follow g.edges(); incidence lists map vertex -> edge ids.
  auto edges = g.edges();
  std::vector<std::size_t> inc_off(n + 1, 0);
  for (const Edge& e : edges) ++inc_off[e.u + 1], ++inc_off[e.v + 1];
  for (std::size_t i = 0; i < n; ++i) inc_off[i + 1] += inc_off[i];
  std::vector<std::size_t> inc(inc_off[n]);
  {
    std::vector<std::size_t> fill(inc_off.begin(), inc_off.end() - 1);
    for (std::size_t id = 0; id < edges.size(); ++id) {
      inc[fill[edges[id].u]++] = id;
      inc[fill[edges[id].v]++] = id;
    }
  }

  std::vector<std::size_t> deg(n);
  for (Vertex v = 0; v < n; ++v) deg[v] = g.degree(v);
  std::vector<std::uint8_t> removed(n, 0);
  detail::IndexedSet alive_edges(edges.size()), leaves(n);
  for (std::size_t id = 0; id < edges.size(); ++id) alive_edges.insert(id);
  for (Vertex v = 0; v < n; ++v)
    if (deg[v] == 1) leaves.insert(v);

  KarpSipserReport report;
  bool in_core_phase = false;
  std::vector<std::uint8_t> in_core(n, 0);

  auto delete_vertex = [&](Vertex v) {
    removed[v] = 1;
    leaves.erase(v);
    for (std::size_t k = inc_off[v]; k < inc_off[v + 1]; ++k) {
      std::size_t id = inc[k];
      if (!alive_edges.contains(id)) continue;
      alive_edges.erase(id);
      Vertex w = edges[id].other(v);
      --deg[w];
      if (deg[w] == 1) leaves.insert(w);
      else if (deg[w] == 0) leaves.erase(w);
    }
    deg[v] = 0;
  };

  auto live_edge_of = [&](Vertex v) {
    for (std::size_t k = inc_off[v]; k < inc_off[v + 1]; ++k)
      if (alive_edges.contains(inc[k])) return inc[k];
    return static_cast<std::size_t>(-1);
  };

  auto take = [&](std::size_t id) {
    const Edge e = edges[id];
    report.matching.edges.push_back(e);
    delete_vertex(e.u);
    delete_vertex(e.v);
  };

  while (!alive_edges.empty()) {
    if (!leaves.empty()) {
      // Uniform over pendant edges: an isolated edge has two leaf endpoints,
      // so it is accepted with probability 1/2 when drawn.
      Vertex v = static_cast<Vertex>(leaves.draw(rng));
      std::size_t id = live_edge_of(v);
      Vertex w = edges[id].other(v);
      if (deg[w] == 1 && uniform01(rng) < 0.5) continue;
      take(id);
      if (!in_core_phase) ++report.leaf_phase_edges;
    } else {
      if (!in_core_phase) {
        in_core_phase = true;
        for (Vertex v = 0; v < n; ++v)
          if (!removed[v] && deg[v] > 0) in_core[v] = 1, ++report.core_vertex_count;
      }
      take(alive_edges.draw(rng));
    }
  }

  auto mate = report.matching.mates(n);
  for (Vertex v = 0; v < n; ++v)
    if (in_core[v] && mate[v] == Matching::unmatched) ++report.core_exposed_count;
  std::sort(report.matching.edges.begin(), report.matching.edges.end());
  return report;
}

}  // namespace mmatch
