#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "mmatch/errors.hpp"
#include "mmatch/exact.hpp"
#include "mmatch/graph.hpp"
#include "mmatch/path_tree.hpp"
#include "mmatch/random.hpp"

namespace mmatch {

/// REP of `root` at each temperature in `zs`, evaluated on the path-tree
/// cut at `depth` without materialising it. Truncated paths take
/// `boundary`. Matches `solve_rep_z(build_path_tree(...))` exactly.
/// Throws BudgetExceeded after visiting `node_limit` path-tree nodes.
inline std::vector<double> local_rep(const Graph& g, Vertex root, std::size_t depth, std::span<const double> zs,
                                     double boundary = 1.0, std::size_t node_limit = PathTree::default_node_limit) {
  const std::size_t k = zs.size();
  std::vector<double> z2(k);
  for (std::size_t j = 0; j < k; ++j) {
    if (!(zs[j] > 0.0)) throw InvalidParameter("temperature must be > 0");
    z2[j] = zs[j] * zs[j];
  }
  std::vector<std::uint8_t> on_path(g.vertex_count(), 0);
  std::vector<double> sums((depth + 2) * k, 0.0);
  struct Frame {
    Vertex v;
    std::size_t next;
    bool any_child;
  };
  std::vector<Frame> stack;
  stack.push_back({root, 0, false});
  on_path[root] = 1;
  std::vector<double> result(k, 1.0);
  std::size_t visited = 1;

  while (!stack.empty()) {
    Frame& f = stack.back();
    const std::size_t d = stack.size() - 1;
    auto nb = g.neighbors(f.v);
    bool pushed = false;
    while (f.next < nb.size()) {
      Vertex w = nb[f.next++];
      if (on_path[w]) continue;
      f.any_child = true;
      if (d >= depth) break;  // truncated: one extension is enough to know
      if (++visited > node_limit) throw BudgetExceeded("path-tree exceeds the node limit; lower the depth");
      on_path[w] = 1;
      std::fill_n(sums.begin() + static_cast<std::ptrdiff_t>((d + 1) * k), k, 0.0);
      stack.push_back({w, 0, false});
      pushed = true;
      break;
    }
    if (pushed) continue;
    // Frame complete.
    const bool truncated = d >= depth && f.any_child;
    double* own = sums.data() + d * k;
    on_path[f.v] = 0;
    stack.pop_back();
    for (std::size_t j = 0; j < k; ++j) {
      double y = truncated ? boundary : z2[j] / (z2[j] + own[j]);
      if (d == 0) result[j] = y;
      else sums[(d - 1) * k + j] += y;
    }
  }
  return result;
}

/// One row of the sandwich table.
struct SandwichRow {
  double z;
  double mean_rep;    ///< estimate of E[R_z] over uniform roots
  double std_error;   ///< 0 when computed exactly
  double lower;       ///< mean_rep + (|E|/|V|) log 2 / log z
};

/// Bracket on E[R_*] = 1 - 2 nu(G)/|V| from the uniform-continuity bound
///   E[R_z] + (|E|/|V|) log 2 / log z <= E[R_*] <= E[R_z],   0 < z < 1.
struct SandwichEstimate {
  double lower;
  double upper;
  std::vector<SandwichRow> rows;
  bool exact;
  std::size_t roots;

  /// Implied bracket on nu(G)/|V|.
  double matching_ratio_lower() const { return (1.0 - upper) / 2.0; }
  double matching_ratio_upper() const { return (1.0 - lower) / 2.0; }
};

struct SandwichOptions {
  /// Path-tree cut. Must be even: boundary value 1 at an even cut bounds
  /// the REP from above.
  std::size_t depth = 20;
  std::size_t roots = 2000;
  std::uint64_t seed = 1;
  std::size_t node_limit = PathTree::default_node_limit;  ///< per root
  /// Use the exact polynomial oracle when the graph is small enough.
  bool exact_when_small = true;
};

/// Estimates the sandwich over a grid of temperatures in (0, 1).
///
/// For graphs within the exact budget E[R_z] is computed exactly; otherwise
/// it is averaged over `roots` distinct uniformly drawn roots (every vertex
/// when `roots >= |V|`), each evaluated on its path-tree cut at `depth` with
/// boundary value 1. The reported bracket is the best one over the grid.
inline SandwichEstimate estimate_mean_rep_star(const Graph& g, std::span<const double> z_grid,
                                               const SandwichOptions& opt = {}) {
  if (g.vertex_count() == 0) throw InvalidInput("empty graph");
  if (z_grid.empty()) throw InvalidParameter("empty temperature grid");
  if (opt.depth % 2 != 0) throw InvalidParameter("sandwich depth must be even");
  for (double z : z_grid)
    if (!(z > 0.0 && z < 1.0)) throw InvalidParameter("sandwich temperatures must lie in (0, 1)");

  const std::size_t n = g.vertex_count();
  const double edge_ratio = static_cast<double>(g.edge_count()) / static_cast<double>(n);
  SandwichEstimate est{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), {}, false, 0};

  std::vector<double> mean(z_grid.size(), 0.0), se(z_grid.size(), 0.0);
  if (opt.exact_when_small && n <= exact_vertex_budget) {
    est.exact = true;
    est.roots = n;
    for (std::size_t j = 0; j < z_grid.size(); ++j) {
      auto reps = rep_exact_all(g, z_grid[j]);
      mean[j] = std::accumulate(reps.begin(), reps.end(), 0.0) / static_cast<double>(n);
    }
  } else {
    std::vector<Vertex> roots(n);
    std::iota(roots.begin(), roots.end(), Vertex{0});
    if (opt.roots < n) {
      Rng rng = make_rng(opt.seed);
      for (std::size_t i = 0; i < opt.roots; ++i)
        std::swap(roots[i], roots[i + uniform_index(rng, n - i)]);
      roots.resize(opt.roots);
    }
    est.roots = roots.size();
    std::vector<double> sq(z_grid.size(), 0.0);
    for (Vertex r : roots) {
      auto v = local_rep(g, r, opt.depth, z_grid, 1.0, opt.node_limit);
      for (std::size_t j = 0; j < v.size(); ++j) mean[j] += v[j], sq[j] += v[j] * v[j];
    }
    const auto m = static_cast<double>(roots.size());
    for (std::size_t j = 0; j < z_grid.size(); ++j) {
      mean[j] /= m;
      double var = m > 1 ? std::max(0.0, (sq[j] - m * mean[j] * mean[j]) / (m - 1)) : 0.0;
      // Finite-population correction when sampling without replacement.
      double fpc = m < static_cast<double>(n) ? (static_cast<double>(n) - m) / (static_cast<double>(n) - 1) : 0.0;
      se[j] = std::sqrt(var / m * fpc);
    }
  }

  for (std::size_t j = 0; j < z_grid.size(); ++j) {
    const double z = z_grid[j];
    const double low = mean[j] + edge_ratio * std::log(2.0) / std::log(z);
    est.rows.push_back({z, mean[j], se[j], low});
    est.lower = std::max(est.lower, low);
    est.upper = std::min(est.upper, mean[j]);
  }
  return est;
}

}  // namespace mmatch
