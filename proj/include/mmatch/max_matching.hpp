#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "mmatch/errors.hpp"
#include "mmatch/graph.hpp"

namespace mmatch {

namespace detail {

constexpr Vertex none = Matching::unmatched;

/// Greedy start: scan vertices by increasing degree and match each free
/// vertex to its free neighbour of smallest degree.
inline std::vector<Vertex> greedy_matching(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<Vertex> order(n), mate(n, none);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return g.degree(a) < g.degree(b); });
  for (Vertex v : order) {
    if (mate[v] != none) continue;
    Vertex best = none;
    for (Vertex w : g.neighbors(v))
      if (mate[w] == none && (best == none || g.degree(w) < g.degree(best))) best = w;
    if (best != none) mate[v] = best, mate[best] = v;
  }
  return mate;
}

/// Edmonds' blossom algorithm, one alternating-tree search per free vertex.
///
/// Per-search state is reset only on the vertices the search touched, and
/// blossom relabelling walks that list instead of the whole vertex set, so
/// a search costs about the size of the tree it grows. A search that fails
/// leaves a Hungarian tree whose vertices can never lie on an augmenting
/// path again; they are retired for the rest of the run.
class Blossom {
 public:
  explicit Blossom(const Graph& g)
      : g_(g),
        n_(g.vertex_count()),
        mate_(greedy_matching(g)),
        parent_(n_, none),
        base_(n_),
        in_tree_(n_, 0),
        queued_(n_, 0),
        dead_(n_, 0),
        lca_mark_(n_, 0),
        blossom_mark_(n_, 0) {
    std::iota(base_.begin(), base_.end(), Vertex{0});
  }

  std::vector<Vertex> run() {
    for (Vertex r = 0; r < n_; ++r) {
      if (mate_[r] != none || dead_[r] || g_.degree(r) == 0) continue;
      Vertex end = search(r);
      if (end != none) {
        augment(end);
        reset();
      } else {
        for (Vertex v : touched_) dead_[v] = 1;
        reset();
      }
    }
    return mate_;
  }

 private:
  void touch(Vertex v) {
    if (!in_tree_[v]) {
      in_tree_[v] = 1;
      touched_.push_back(v);
    }
  }

  void reset() {
    for (Vertex v : touched_) {
      in_tree_[v] = 0;
      queued_[v] = 0;
      parent_[v] = none;
      base_[v] = v;
    }
    touched_.clear();
    queue_.clear();
  }

  bool even(Vertex v, Vertex root) const {
    return v == root || (mate_[v] != none && parent_[mate_[v]] != none);
  }

  Vertex lca(Vertex a, Vertex b) {
    ++stamp_;
    for (;;) {
      a = base_[a];
      lca_mark_[a] = stamp_;
      if (mate_[a] == none) break;
      a = parent_[mate_[a]];
    }
    for (;;) {
      b = base_[b];
      if (lca_mark_[b] == stamp_) return b;
      b = parent_[mate_[b]];
    }
  }

  void mark_path(Vertex v, Vertex b, Vertex child) {
    while (base_[v] != b) {
      blossom_mark_[base_[v]] = blossom_mark_[base_[mate_[v]]] = stamp_;
      parent_[v] = child;
      child = mate_[v];
      v = parent_[mate_[v]];
    }
  }

  Vertex search(Vertex root) {
    enqueue(root);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const Vertex v = queue_[head];
      for (Vertex to : g_.neighbors(v)) {
        if (dead_[to] || base_[v] == base_[to] || mate_[v] == to) continue;
        if (in_tree_[to] && even(to, root)) {
          const Vertex cur = lca(v, to);
          ++stamp_;
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          const std::size_t count = touched_.size();
          for (std::size_t i = 0; i < count; ++i) {
            Vertex x = touched_[i];
            if (blossom_mark_[base_[x]] == stamp_) {
              base_[x] = cur;
              if (!queued(x)) enqueue(x);
            }
          }
        } else if (parent_[to] == none && to != root) {
          parent_[to] = v;
          touch(to);
          if (mate_[to] == none) return to;
          enqueue(mate_[to]);
        }
      }
    }
    return none;
  }

  // A vertex is queued exactly once, when it first becomes even; odd
  // vertices that turn even inside a blossom get queued on relabelling.
  bool queued(Vertex x) const { return queued_[x] != 0; }

  void enqueue(Vertex x) {
    touch(x);
    queued_[x] = 1;
    queue_.push_back(x);
  }

  void augment(Vertex v) {
    while (v != none) {
      Vertex pv = parent_[v];
      Vertex ppv = mate_[pv];
      mate_[v] = pv;
      mate_[pv] = v;
      v = ppv;
    }
  }

  const Graph& g_;
  std::size_t n_;
  std::vector<Vertex> mate_, parent_, base_;
  std::vector<std::uint8_t> in_tree_, queued_, dead_;
  std::vector<std::uint64_t> lca_mark_, blossom_mark_;
  std::uint64_t stamp_ = 0;
  std::vector<Vertex> touched_, queue_;
};

}  // namespace detail

/// Maximum matching of a general graph (Edmonds' blossom algorithm).
inline Matching maximum_matching_blossom(const Graph& g) {
  auto mate = detail::Blossom(g).run();
  return Matching::from_mates(mate);
}

/// Maximum matching of a bipartite-tagged graph (Hopcroft-Karp).
inline Matching maximum_matching_bipartite(const Graph& g) {
  if (!g.is_bipartite_tagged()) throw InvalidInput("Hopcroft-Karp needs a bipartite-tagged graph");
  using detail::none;
  const std::size_t n = g.vertex_count();
  constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();
  std::vector<Vertex> left;
  for (Vertex v = 0; v < n; ++v)
    if (g.side(v) == Side::a) left.push_back(v);
  std::vector<Vertex> mate = detail::greedy_matching(g);
  std::vector<std::size_t> dist(n, inf);
  std::vector<std::size_t> it(n, 0);
  std::vector<Vertex> queue, stack;

  auto bfs = [&] {
    queue.clear();
    bool found = false;
    for (Vertex a : left) {
      dist[a] = mate[a] == none ? 0 : inf;
      if (mate[a] == none) queue.push_back(a);
    }
    for (std::size_t h = 0; h < queue.size(); ++h) {
      Vertex a = queue[h];
      for (Vertex b : g.neighbors(a)) {
        Vertex a2 = mate[b];
        if (a2 == none) {
          found = true;
        } else if (dist[a2] == inf) {
          dist[a2] = dist[a] + 1;
          queue.push_back(a2);
        }
      }
    }
    return found;
  };

  // Iterative layered DFS from free left vertex `root`.
  auto dfs = [&](Vertex root) {
    stack.assign(1, root);
    while (!stack.empty()) {
      Vertex a = stack.back();
      auto nb = g.neighbors(a);
      bool advanced = false;
      for (; it[a] < nb.size(); ++it[a]) {
        Vertex b = nb[it[a]];
        Vertex a2 = mate[b];
        if (a2 == none) {
          // Flip the path root .. a, b.
          Vertex cur_b = b;
          for (std::size_t i = stack.size(); i-- > 0;) {
            Vertex ai = stack[i];
            Vertex prev_b = mate[ai];
            mate[ai] = cur_b;
            mate[cur_b] = ai;
            cur_b = prev_b;
          }
          return true;
        }
        if (dist[a2] == dist[a] + 1) {
          ++it[a];
          stack.push_back(a2);
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        dist[a] = inf;
        stack.pop_back();
      }
    }
    return false;
  };

  while (bfs()) {
    for (Vertex a : left) it[a] = 0;
    for (Vertex a : left)
      if (mate[a] == none) dfs(a);
  }
  return Matching::from_mates(mate);
}

/// Maximum matching: Hopcroft-Karp when bipartite-tagged, blossom otherwise.
inline Matching maximum_matching(const Graph& g) {
  return g.is_bipartite_tagged() ? maximum_matching_bipartite(g) : maximum_matching_blossom(g);
}

/// Matching number nu(G).
inline std::size_t matching_number(const Graph& g) { return maximum_matching(g).size(); }

/// Independence number of a bipartite graph, |V| - nu(G) by Konig's theorem.
inline std::size_t independence_number_bipartite(const Graph& g) {
  if (!g.is_bipartite_tagged()) throw InvalidInput("independence number via Konig needs a bipartite-tagged graph");
  return g.vertex_count() - maximum_matching_bipartite(g).size();
}

}  // namespace mmatch
