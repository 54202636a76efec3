#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mmatch/degree_distribution.hpp"
#include "mmatch/errors.hpp"
#include "mmatch/graph.hpp"
#include "mmatch/random.hpp"

namespace mmatch {

/// G(n, c/n): every pair is an edge independently with probability c/n.
/// Pairs are visited with geometric skips, so the cost is O(n + |E|).
inline Graph gen_erdos_renyi(std::size_t n, double c, std::uint64_t seed) {
  if (n < 1) throw InvalidParameter("erdos-renyi needs n >= 1");
  if (!(c >= 0.0)) throw InvalidParameter("mean degree must be >= 0");
  const double p = c / static_cast<double>(n);
  if (p > 1.0) throw InvalidParameter("edge probability c/n exceeds 1");
  std::vector<Edge> edges;
  if (p == 0.0 || n < 2) return Graph(n, {});
  if (p == 1.0) return named::complete(n);

  Rng rng = make_rng(seed);
  edges.reserve(static_cast<std::size_t>(c * static_cast<double>(n) / 2.0 * 1.1) + 16);
  const double log_q = std::log1p(-p);
  // Walk the strictly-lower triangle row by row (Batagelj-Brandes).
  std::int64_t v = 1, w = -1;
  const auto nn = static_cast<std::int64_t>(n);
  while (v < nn) {
    double r = uniform01(rng);
    w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn) edges.emplace_back(static_cast<Vertex>(w), static_cast<Vertex>(v));
  }
  return Graph(n, std::move(edges));
}

namespace detail {

/// Uniformly pairs the given stubs and returns the resulting edge multiset.
inline std::vector<Edge> pair_stubs(std::vector<Vertex>& stubs, Rng& rng) {
  std::shuffle(stubs.begin(), stubs.end(), rng);
  std::vector<Edge> edges;
  edges.reserve(stubs.size() / 2);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) edges.emplace_back(stubs[i], stubs[i + 1]);
  return edges;
}

}  // namespace detail

/// Erased configuration model with i.i.d. degrees drawn from `law`.
///
/// An odd degree total is fixed by redrawing the degree of one uniformly
/// chosen vertex until the parity is even. Loops and repeated edges from
/// the uniform stub pairing are erased.
inline Graph gen_configuration(std::size_t n, const DegreeDistribution& law, std::uint64_t seed) {
  if (n < 1) throw InvalidParameter("configuration model needs n >= 1");
  if (law.support_max() > n - 1) throw InvalidParameter("degree support exceeds n - 1");
  Rng rng = make_rng(seed);
  DegreeSampler draw(law);
  std::vector<std::size_t> deg(n);
  std::size_t total = 0;
  for (auto& d : deg) {
    d = std::min(draw(rng), n - 1);
    total += d;
  }
  for (int attempt = 0; total % 2 == 1; ++attempt) {
    if (attempt == 10000) throw InvalidParameter("cannot reach an even degree total with this law");
    auto v = uniform_index(rng, n);
    total -= deg[v];
    deg[v] = std::min(draw(rng), n - 1);
    total += deg[v];
  }
  std::vector<Vertex> stubs;
  stubs.reserve(total);
  for (Vertex v = 0; v < n; ++v) stubs.insert(stubs.end(), deg[v], v);
  return Graph::simplified(n, detail::pair_stubs(stubs, rng));
}

/// Bipartite erased configuration model. The b side has `m` vertices and the
/// a side floor(alpha * m) with alpha = mean(b) / mean(a), which balances the
/// expected stub counts. Vertices 0..|A|-1 are type a, the rest type b.
/// Whatever surplus of stubs one side ends up with is discarded uniformly.
inline Graph gen_bipartite(std::size_t m, const DegreeDistribution& law_a,
                           const DegreeDistribution& law_b, std::uint64_t seed) {
  if (!(law_a.mean() > 0.0) || !(law_b.mean() > 0.0)) throw InvalidParameter("both degree laws need positive mean");
  const double alpha = law_b.mean() / law_a.mean();
  const auto na = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(m)));
  if (na < 1 || m < 1) throw InvalidParameter("both sides must be nonempty");
  Rng rng = make_rng(seed);
  std::vector<Vertex> stubs_a, stubs_b;
  DegreeSampler draw_a(law_a), draw_b(law_b);
  for (Vertex v = 0; v < na; ++v) stubs_a.insert(stubs_a.end(), std::min(draw_a(rng), m), v);
  for (Vertex v = 0; v < m; ++v)
    stubs_b.insert(stubs_b.end(), std::min(draw_b(rng), na), static_cast<Vertex>(na + v));
  std::shuffle(stubs_a.begin(), stubs_a.end(), rng);
  std::shuffle(stubs_b.begin(), stubs_b.end(), rng);
  const std::size_t pairs = std::min(stubs_a.size(), stubs_b.size());
  std::vector<Edge> edges;
  edges.reserve(pairs);
  for (std::size_t i = 0; i < pairs; ++i) edges.emplace_back(stubs_a[i], stubs_b[i]);
  std::vector<Side> sides(na + m, Side::b);
  std::fill(sides.begin(), sides.begin() + static_cast<std::ptrdiff_t>(na), Side::a);
  return Graph::simplified(na + m, std::move(edges), std::move(sides));
}

/// Cuckoo-hashing graph: floor(alpha * m) items (type a), m locations
/// (type b), each item joined to k distinct locations chosen uniformly.
inline Graph gen_left_regular(std::size_t m, double alpha, std::size_t k, std::uint64_t seed) {
  if (k < 1) throw InvalidParameter("left degree k must be >= 1");
  if (k > m) throw InvalidParameter("left degree k exceeds the number of locations");
  if (!(alpha > 0.0)) throw InvalidParameter("load alpha must be > 0");
  const auto na = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(m)));
  if (na < 1) throw InvalidParameter("floor(alpha * m) must be >= 1");
  Rng rng = make_rng(seed);
  std::vector<Edge> edges;
  edges.reserve(na * k);
  std::vector<Vertex> pick;
  for (Vertex a = 0; a < na; ++a) {
    pick.clear();
    while (pick.size() < k) {
      auto b = static_cast<Vertex>(uniform_index(rng, m));
      if (std::find(pick.begin(), pick.end(), b) == pick.end()) pick.push_back(b);
    }
    for (Vertex b : pick) edges.emplace_back(a, static_cast<Vertex>(na + b));
  }
  std::vector<Side> sides(na + m, Side::b);
  std::fill(sides.begin(), sides.begin() + static_cast<std::ptrdiff_t>(na), Side::a);
  return Graph(na + m, std::move(edges), std::move(sides));
}

/// Two-colouring of `g` if one exists (BFS from each component).
inline std::optional<std::vector<Side>> bipartition(const Graph& g) {
  constexpr std::uint8_t unset = 2;
  std::vector<std::uint8_t> colour(g.vertex_count(), unset);
  std::vector<Vertex> queue;
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (colour[s] != unset) continue;
    colour[s] = 0;
    queue.assign(1, s);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      Vertex v = queue[h];
      for (Vertex w : g.neighbors(v)) {
        if (colour[w] == unset) {
          colour[w] = static_cast<std::uint8_t>(1 - colour[v]);
          queue.push_back(w);
        } else if (colour[w] == colour[v]) {
          return std::nullopt;
        }
      }
    }
  }
  std::vector<Side> sides(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) sides[v] = colour[v] == 0 ? Side::a : Side::b;
  return sides;
}

/// Copy of `g` carrying a two-colouring; throws InvalidInput if `g` has an
/// odd cycle.
inline Graph tag_bipartite(const Graph& g) {
  auto sides = bipartition(g);
  if (!sides) throw InvalidInput("graph is not bipartite");
  return Graph(g.vertex_count(), std::vector<Edge>(g.edges().begin(), g.edges().end()), std::move(sides));
}

}  // namespace mmatch
