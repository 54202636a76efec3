#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mmatch/errors.hpp"
#include "mmatch/graph.hpp"
#include "mmatch/matching_polynomial.hpp"
#include "mmatch/random.hpp"

namespace mmatch {

// Exact small-graph quantities of the monomer-dimer model, all derived from
// the matching polynomial. Every function here is limited to
// `exact_vertex_budget` vertices and throws BudgetExceeded beyond it.

/// Probability that the root is exposed in a uniformly random maximum
/// matching: (#max matchings of G - root) / (#max matchings of G) when
/// removing the root keeps nu unchanged, otherwise 0.
inline double exposure_prob_max(const RootedGraph& rg) {
  PolynomialOracle oracle(rg.graph);
  const auto full = oracle.full();
  const auto p = oracle.polynomial(full);
  const auto q = oracle.polynomial(full & ~oracle.bit(rg.root));
  // z * P_{G-root} has its lowest term one index higher than P_{G-root}.
  const std::size_t low_p = p.lowest_index();
  const std::size_t low_q = q.lowest_index() + 1;
  if (low_q != low_p) return 0.0;
  return static_cast<double>(static_cast<long double>(q.coeff[low_q - 1]) / static_cast<long double>(p.coeff[low_p]));
}

namespace detail {

inline long double rep_from_oracle(const PolynomialOracle& oracle, PolynomialOracle::Mask mask, Vertex root,
                                   long double z) {
  return z * oracle.evaluate(mask & ~oracle.bit(root), z) / oracle.evaluate(mask, z);
}

}  // namespace detail

/// Root-exposure probability at temperature z: z P_{G-root}(z) / P_G(z).
/// At z = 0 this is the continuous extension, `exposure_prob_max`.
inline double rep_exact(const RootedGraph& rg, double z) {
  if (!(z >= 0.0)) throw InvalidParameter("temperature must be >= 0");
  if (z == 0.0) return exposure_prob_max(rg);
  PolynomialOracle oracle(rg.graph);
  return static_cast<double>(detail::rep_from_oracle(oracle, oracle.full(), rg.root, z));
}

/// REP of every vertex at temperature z > 0, sharing one polynomial memo.
inline std::vector<double> rep_exact_all(const Graph& g, double z) {
  if (!(z > 0.0)) throw InvalidParameter("temperature must be > 0");
  PolynomialOracle oracle(g);
  std::vector<double> out(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    out[v] = static_cast<double>(detail::rep_from_oracle(oracle, oracle.full(), v, z));
  return out;
}

/// Probability under the Boltzmann law at temperature z that the random
/// matching contains every edge of `m`, computed as
///   z^(-2|M|) prod_k R_z[G - {v_1..v_{k-1}}, v_k]
/// over the spanned vertices in the given order (default: sorted). The
/// value does not depend on the order.
inline double cylinder_marginal(const Graph& g, const Matching& m, double z,
                                std::span<const Vertex> order = {}) {
  if (!(z > 0.0)) throw InvalidParameter("temperature must be > 0");
  if (!is_matching(g, m)) throw InvalidInput("cylinder set must be a matching of the graph");
  PolynomialOracle oracle(g);
  std::vector<Vertex> spanned;
  if (order.empty()) {
    for (const Edge& e : m.edges) spanned.push_back(e.u), spanned.push_back(e.v);
    std::sort(spanned.begin(), spanned.end());
  } else {
    spanned.assign(order.begin(), order.end());
    std::vector<Vertex> a = spanned, b;
    for (const Edge& e : m.edges) b.push_back(e.u), b.push_back(e.v);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw InvalidInput("ordering must list exactly the vertices spanned by the matching");
  }
  long double value = 1;
  auto mask = oracle.full();
  const long double zz = z;
  for (Vertex v : spanned) {
    value *= detail::rep_from_oracle(oracle, mask, v, zz) / zz;
    mask &= ~oracle.bit(v);
  }
  return static_cast<double>(value);
}

/// Exact draw from the Boltzmann law mu_G^z(M) = z^(|V|-2|M|) / P_G(z).
///
/// Vertices are visited in index order. A vertex still present in the
/// residual graph R stays exposed with probability z P_{R-v}(z) / P_R(z);
/// otherwise it is matched to neighbour w with probability proportional to
/// P_{R-v-w}(z). Both endpoints then leave R.
inline Matching sample_boltzmann(const Graph& g, double z, std::uint64_t seed) {
  if (!(z > 0.0)) throw InvalidParameter("temperature must be > 0");
  PolynomialOracle oracle(g);
  Rng rng = make_rng(seed);
  auto mask = oracle.full();
  const long double zz = z;
  Matching m;
  std::vector<long double> weight;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (!(mask & oracle.bit(v))) continue;
    const auto rest = mask & ~oracle.bit(v);
    auto nbrs = oracle.neighbors_in(v, rest);
    weight.assign(1, zz * oracle.evaluate(rest, zz));
    for (Vertex w : nbrs) weight.push_back(oracle.evaluate(rest & ~oracle.bit(w), zz));
    long double total = 0;
    for (auto x : weight) total += x;
    long double r = static_cast<long double>(uniform01(rng)) * total;
    std::size_t pick = 0;
    for (; pick + 1 < weight.size(); ++pick) {
      if (r < weight[pick]) break;
      r -= weight[pick];
    }
    mask = rest;
    if (pick > 0) {
      Vertex w = nbrs[pick - 1];
      m.edges.emplace_back(v, w);
      mask &= ~oracle.bit(w);
    }
  }
  std::sort(m.edges.begin(), m.edges.end());
  return m;
}

/// Free energy relative to z = 1: (1/|V|) log(P_G(z) / P_G(1)).
inline double free_energy(const Graph& g, double z) {
  if (!(z > 0.0)) throw InvalidParameter("temperature must be > 0");
  if (g.vertex_count() == 0) throw InvalidInput("free energy of the empty graph is undefined");
  const auto p = matching_polynomial(g);
  return static_cast<double>(std::log(p(z) / p(1.0L)) / static_cast<long double>(g.vertex_count()));
}

/// (log P_G)'(z) from exact polynomial differentiation.
inline double log_derivative(const Graph& g, double z) {
  if (!(z > 0.0)) throw InvalidParameter("temperature must be > 0");
  const auto p = matching_polynomial(g);
  return static_cast<double>(p.derivative(z) / p(z));
}

}  // namespace mmatch
