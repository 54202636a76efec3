#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmatch/errors.hpp"

namespace mmatch {

using Vertex = std::uint32_t;

/// Undirected edge stored with `u < v`.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {}

  Vertex other(Vertex x) const { return x == u ? v : u; }

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Vertex class in a bipartite graph.
enum class Side : std::uint8_t { a, b };

/// Finite simple undirected graph, immutable once built.
///
/// Adjacency is stored in compressed rows; neighbour lists are sorted.
/// Consumers that need deletions work with masks on top of this.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an explicit edge list. Throws InvalidInput on a
  /// loop, a duplicate edge, an out-of-range index, or a type-violating
  /// edge when `sides` is given.
  Graph(std::size_t n, std::vector<Edge> edges,
        std::optional<std::vector<Side>> sides = std::nullopt)
      : n_(n), edges_(std::move(edges)), sides_(std::move(sides)) {
    if (sides_ && sides_->size() != n_)
      throw InvalidInput("vertex type vector has wrong length");
    for (const Edge& e : edges_) {
      if (e.u == e.v) throw InvalidInput("loop at vertex " + std::to_string(e.u));
      if (e.v >= n_) throw InvalidInput("edge endpoint out of range");
      if (sides_ && (*sides_)[e.u] == (*sides_)[e.v])
        throw InvalidInput("edge joins two vertices of the same type");
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw InvalidInput("duplicate edge");
    build_adjacency();
  }

  /// Same as the constructor but silently erases loops and repeated edges.
  /// Used by the random generators (erased configuration model).
  static Graph simplified(std::size_t n, std::vector<Edge> edges,
                          std::optional<std::vector<Side>> sides = std::nullopt) {
    std::erase_if(edges, [](const Edge& e) { return e.u == e.v; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Graph(n, std::move(edges), std::move(sides));
  }

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adj_.data() + offset_[v], adj_.data() + offset_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offset_[v + 1] - offset_[v]; }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (Vertex v = 0; v < n_; ++v) d = std::max(d, degree(v));
    return d;
  }

  bool has_edge(Vertex a, Vertex b) const {
    auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  bool is_bipartite_tagged() const { return sides_.has_value(); }
  Side side(Vertex v) const { return (*sides_)[v]; }
  const std::optional<std::vector<Side>>& sides() const { return sides_; }

  std::size_t count_side(Side s) const {
    if (!sides_) return 0;
    return static_cast<std::size_t>(std::count(sides_->begin(), sides_->end(), s));
  }

  friend bool operator==(const Graph& x, const Graph& y) {
    return x.n_ == y.n_ && x.edges_ == y.edges_ && x.sides_ == y.sides_;
  }

 private:
  void build_adjacency() {
    offset_.assign(n_ + 1, 0);
    for (const Edge& e : edges_) {
      ++offset_[e.u + 1];
      ++offset_[e.v + 1];
    }
    for (std::size_t i = 0; i < n_; ++i) offset_[i + 1] += offset_[i];
    adj_.resize(2 * edges_.size());
    std::vector<std::size_t> fill(offset_.begin(), offset_.end() - 1);
    // Edges are sorted, so every row ends up sorted too.
    for (const Edge& e : edges_) adj_[fill[e.u]++] = e.v;
    for (const Edge& e : edges_) adj_[fill[e.v]++] = e.u;
    for (std::size_t v = 0; v < n_; ++v)
      std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(offset_[v]),
                adj_.begin() + static_cast<std::ptrdiff_t>(offset_[v + 1]));
  }

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::optional<std::vector<Side>> sides_;
  std::vector<std::size_t> offset_{0};
  std::vector<Vertex> adj_;
};

/// A graph together with a distinguished vertex.
struct RootedGraph {
  Graph graph;
  Vertex root = 0;

  RootedGraph() = default;
  RootedGraph(Graph g, Vertex r) : graph(std::move(g)), root(r) {
    if (r >= graph.vertex_count()) throw InvalidParameter("root out of range");
  }
};

/// Set of pairwise disjoint edges of some host graph.
struct Matching {
  std::vector<Edge> edges;

  std::size_t size() const { return edges.size(); }

  /// Partner of every vertex, or `unmatched`.
  static constexpr Vertex unmatched = static_cast<Vertex>(-1);

  std::vector<Vertex> mates(std::size_t n) const {
    std::vector<Vertex> mate(n, unmatched);
    for (const Edge& e : edges) {
      mate[e.u] = e.v;
      mate[e.v] = e.u;
    }
    return mate;
  }

  static Matching from_mates(std::span<const Vertex> mate) {
    Matching m;
    for (Vertex v = 0; v < mate.size(); ++v)
      if (mate[v] != unmatched && v < mate[v]) m.edges.emplace_back(v, mate[v]);
    return m;
  }
};

/// True when every edge of `m` is in `g` and no two edges share a vertex.
inline bool is_matching(const Graph& g, const Matching& m) {
  std::vector<bool> used(g.vertex_count(), false);
  for (const Edge& e : m.edges) {
    if (e.v >= g.vertex_count() || e.u == e.v || !g.has_edge(e.u, e.v)) return false;
    if (used[e.u] || used[e.v]) return false;
    used[e.u] = used[e.v] = true;
  }
  return true;
}

/// True when `m` is a matching that no edge of `g` can extend.
inline bool is_maximal_matching(const Graph& g, const Matching& m) {
  if (!is_matching(g, m)) return false;
  auto mate = m.mates(g.vertex_count());
  for (const Edge& e : g.edges())
    if (mate[e.u] == Matching::unmatched && mate[e.v] == Matching::unmatched) return false;
  return true;
}

/// Removes every edge incident to a vertex whose degree exceeds `cap`.
/// The vertex set is unchanged, so high-degree vertices become isolated.
inline Graph truncate_degree(const Graph& g, std::size_t cap) {
  std::vector<Edge> kept;
  kept.reserve(g.edge_count());
  for (const Edge& e : g.edges())
    if (g.degree(e.u) <= cap && g.degree(e.v) <= cap) kept.push_back(e);
  return Graph(g.vertex_count(), std::move(kept), g.sides());
}

/// Induced subgraph on `keep` (listed in the order they get renumbered).
inline Graph induced_subgraph(const Graph& g, std::span<const Vertex> keep) {
  constexpr Vertex absent = static_cast<Vertex>(-1);
  std::vector<Vertex> index(g.vertex_count(), absent);
  for (Vertex i = 0; i < keep.size(); ++i) index[keep[i]] = i;
  std::vector<Edge> edges;
  for (Vertex i = 0; i < keep.size(); ++i)
    for (Vertex w : g.neighbors(keep[i]))
      if (index[w] != absent && i < index[w]) edges.emplace_back(i, index[w]);
  std::optional<std::vector<Side>> sides;
  if (g.is_bipartite_tagged()) {
    sides.emplace();
    for (Vertex v : keep) sides->push_back(g.side(v));
  }
  return Graph(keep.size(), std::move(edges), std::move(sides));
}

/// Graph with the vertices in `removed` deleted; survivors keep their order.
inline Graph remove_vertices(const Graph& g, std::span<const Vertex> removed) {
  std::vector<bool> drop(g.vertex_count(), false);
  for (Vertex v : removed) drop[v] = true;
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (!drop[v]) keep.push_back(v);
  return induced_subgraph(g, keep);
}

/// Rooted subgraph induced by the vertices within graph distance `radius`
/// of the root. The root becomes vertex 0; the rest are numbered in BFS order.
inline RootedGraph ball(const RootedGraph& rg, std::size_t radius) {
  const Graph& g = rg.graph;
  constexpr std::size_t unseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(g.vertex_count(), unseen);
  std::vector<Vertex> order{rg.root};
  dist[rg.root] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    Vertex v = order[head];
    if (dist[v] == radius) continue;
    for (Vertex w : g.neighbors(v)) {
      if (dist[w] != unseen) continue;
      dist[w] = dist[v] + 1;
      order.push_back(w);
    }
  }
  return RootedGraph(induced_subgraph(g, order), 0);
}

/// Connected component labels, numbered from 0 in order of first vertex.
inline std::vector<std::size_t> component_labels(const Graph& g) {
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(g.vertex_count(), none);
  std::size_t next = 0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (label[s] != none) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(v))
        if (label[w] == none) {
          label[w] = next;
          stack.push_back(w);
        }
    }
    ++next;
  }
  return label;
}

/// Named small graphs used throughout the tests and examples.
namespace named {

inline Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, std::move(e));
}

inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, std::move(e));
}

inline Graph cycle(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  if (n >= 3) e.emplace_back(0, static_cast<Vertex>(n - 1));
  return Graph(n, std::move(e));
}

/// Star with center 0 and `leaves` leaves.
inline Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (Vertex i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph(leaves + 1, std::move(e));
}

inline Graph petersen() {
  std::vector<Edge> e;
  for (Vertex i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);          // outer cycle
    e.emplace_back(i, i + 5);                // spokes
    e.emplace_back(i + 5, (i + 2) % 5 + 5);  // inner pentagram
  }
  return Graph(10, std::move(e));
}

inline Graph edgeless(std::size_t n) { return Graph(n, {}); }

}  // namespace named

}  // namespace mmatch
