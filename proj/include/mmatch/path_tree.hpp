#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "mmatch/errors.hpp"
#include "mmatch/graph.hpp"

namespace mmatch {

/// Godsil path-tree of a rooted graph, cut at a depth cap.
///
/// Node i stands for a simple path starting at the root; `vertex` is the
/// path's last vertex and `parent` the path with that vertex dropped. Nodes
/// are stored in DFS preorder, so every descendant of a node follows it.
/// A node sitting at the cap whose path could still be extended in the
/// graph is flagged `truncated`; solvers give such nodes a boundary value.
class PathTree {
 public:
  static constexpr std::uint32_t no_parent = std::numeric_limits<std::uint32_t>::max();
  static constexpr std::size_t default_node_limit = 10'000'000;
  static constexpr std::size_t unlimited_depth = std::numeric_limits<std::size_t>::max();

  struct Node {
    Vertex vertex;
    std::uint32_t parent;
    std::uint32_t depth;
    bool truncated;
  };

  std::size_t size() const { return nodes_.size(); }
  const Node& operator[](std::size_t i) const { return nodes_[i]; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t depth_cap() const { return cap_; }
  bool is_truncated() const { return truncated_count_ > 0; }

  /// Number of children of every node.
  std::vector<std::size_t> child_counts() const {
    std::vector<std::size_t> c(nodes_.size(), 0);
    for (const Node& nd : nodes_)
      if (nd.parent != no_parent) ++c[nd.parent];
    return c;
  }

  /// Vertex sequence of the path represented by node i, root first.
  std::vector<Vertex> path(std::size_t i) const {
    std::vector<Vertex> p;
    for (auto j = static_cast<std::uint32_t>(i); j != no_parent; j = nodes_[j].parent) p.push_back(nodes_[j].vertex);
    return {p.rbegin(), p.rend()};
  }

  friend PathTree build_path_tree(const RootedGraph& rg, std::size_t depth, std::size_t node_limit);

 private:
  std::vector<Node> nodes_;
  std::size_t cap_ = 0;
  std::size_t truncated_count_ = 0;
};

/// All simple paths from the root with at most `depth` edges, as a tree.
/// Throws BudgetExceeded once more than `node_limit` paths are produced.
inline PathTree build_path_tree(const RootedGraph& rg, std::size_t depth,
                                std::size_t node_limit = PathTree::default_node_limit) {
  const Graph& g = rg.graph;
  PathTree t;
  t.cap_ = depth;
  std::vector<std::uint8_t> on_path(g.vertex_count(), 0);
  struct Frame {
    std::uint32_t node;
    std::size_t next;
  };
  std::vector<Frame> stack;

  auto extendable = [&](Vertex v) {
    for (Vertex w : g.neighbors(v))
      if (!on_path[w]) return true;
    return false;
  };
  auto open = [&](Vertex v, std::uint32_t parent, std::uint32_t d) {
    if (t.nodes_.size() >= node_limit)
      throw BudgetExceeded("path-tree exceeds " + std::to_string(node_limit) + " nodes");
    on_path[v] = 1;
    bool cut = d >= depth && extendable(v);
    t.nodes_.push_back({v, parent, d, cut});
    if (cut) ++t.truncated_count_;
    stack.push_back({static_cast<std::uint32_t>(t.nodes_.size() - 1), 0});
  };

  open(rg.root, PathTree::no_parent, 0);
  while (!stack.empty()) {
    Frame& f = stack.back();
    const auto& nd = t.nodes_[f.node];
    auto nb = g.neighbors(nd.vertex);
    if (nd.depth >= depth || f.next >= nb.size()) {
      on_path[nd.vertex] = 0;
      stack.pop_back();
      continue;
    }
    Vertex w = nb[f.next++];
    if (on_path[w]) continue;
    open(w, f.node, nd.depth + 1);
  }
  return t;
}

/// Root-exposure probability at temperature z > 0 on a path-tree, one
/// leaf-to-root pass of y_v = z^2 / (z^2 + sum_{children u} y_u) with
/// y = 1 at leaves. Truncated nodes take `boundary` instead. On an
/// untruncated path-tree the result equals the REP of the source graph.
inline double solve_rep_z(const PathTree& t, double z, double boundary = 1.0) {
  if (!(z > 0.0)) throw InvalidParameter("temperature must be > 0");
  const double z2 = z * z;
  std::vector<double> sum(t.size(), 0.0);
  double root = 1.0;
  for (std::size_t i = t.size(); i-- > 0;) {
    const auto& nd = t[i];
    double y = nd.truncated ? boundary : z2 / (z2 + sum[i]);
    if (nd.parent == PathTree::no_parent) root = y;
    else sum[nd.parent] += y;
  }
  return root;
}

/// Per-node variant of `solve_rep_z`; entry i is the REP of the subtree
/// rooted at node i.
inline std::vector<double> solve_rep_z_field(const PathTree& t, double z, double boundary = 1.0) {
  if (!(z > 0.0)) throw InvalidParameter("temperature must be > 0");
  const double z2 = z * z;
  std::vector<double> sum(t.size(), 0.0), y(t.size());
  for (std::size_t i = t.size(); i-- > 0;) {
    const auto& nd = t[i];
    y[i] = nd.truncated ? boundary : z2 / (z2 + sum[i]);
    if (nd.parent != PathTree::no_parent) sum[nd.parent] += y[i];
  }
  return y;
}

struct ZeroTemperatureBounds {
  double lower;
  double upper;
};

namespace detail {

/// Zero-temperature recursion in its two-level form,
///   x_v = 1 / (1 + sum_{u child of v} (sum_{w child of u} x_w)^(-1)),
/// where an empty or all-zero inner sum contributes an infinite term and
/// forces x_v = 0. Truncated nodes take `boundary`.
inline double solve_zero(const PathTree& t, double boundary) {
  std::vector<double> inner(t.size(), 0.0);    // sum of children's x
  std::vector<double> outer(t.size(), 0.0);    // sum of finite reciprocals
  std::vector<std::uint8_t> blocked(t.size(), 0);  // some reciprocal is infinite
  double root = 1.0;
  for (std::size_t i = t.size(); i-- > 0;) {
    const auto& nd = t[i];
    double x = nd.truncated ? boundary : (blocked[i] ? 0.0 : 1.0 / (1.0 + outer[i]));
    if (nd.parent == PathTree::no_parent) {
      root = x;
      continue;
    }
    inner[nd.parent] += x;
    if (inner[i] > 0.0) outer[nd.parent] += 1.0 / inner[i];
    else blocked[nd.parent] = 1;
  }
  return root;
}

}  // namespace detail

/// Bounds on the zero-temperature REP from a path-tree cut at an even
/// depth: boundary value 1 at truncated nodes gives the upper bound (which
/// decreases with depth towards the largest solution of the recursion),
/// boundary 0 the lower bound. When nothing is truncated both are exact.
inline ZeroTemperatureBounds rep_zero_bounds(const PathTree& t) {
  if (t.is_truncated() && t.depth_cap() % 2 != 0)
    throw InvalidParameter("zero-temperature bounds need a path-tree cut at even depth");
  return {detail::solve_zero(t, 0.0), detail::solve_zero(t, 1.0)};
}

}  // namespace mmatch
