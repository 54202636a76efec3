#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "mmatch/errors.hpp"
#include "mmatch/graph.hpp"

namespace mmatch {

/// Largest vertex count handled by the polynomial-based exact oracles.
inline constexpr std::size_t exact_vertex_budget = 24;

/// Matching polynomial P_G(z) = sum over matchings M of z^(|V| - 2|M|),
/// stored by exposed-vertex count: coeff[u] counts matchings leaving u
/// vertices exposed. With |V| <= 24 every count fits in 64 bits (the
/// complete graph K24 has about 1.3e13 matchings).
struct MatchingPolynomial {
  std::vector<std::uint64_t> coeff;

  std::size_t vertex_count() const { return coeff.empty() ? 0 : coeff.size() - 1; }

  /// Smallest exposed count with a nonzero coefficient, i.e. |V| - 2 nu(G).
  std::size_t lowest_index() const {
    for (std::size_t u = 0; u < coeff.size(); ++u)
      if (coeff[u] != 0) return u;
    return coeff.size();
  }

  std::uint64_t total_matchings() const {
    std::uint64_t s = 0;
    for (auto c : coeff) s += c;
    return s;
  }

  std::size_t matching_number() const { return (vertex_count() - lowest_index()) / 2; }

  long double operator()(long double z) const {
    long double acc = 0;
    for (std::size_t u = coeff.size(); u-- > 0;) acc = acc * z + static_cast<long double>(coeff[u]);
    return acc;
  }

  long double derivative(long double z) const {
    long double acc = 0;
    for (std::size_t u = coeff.size(); u-- > 1;)
      acc = acc * z + static_cast<long double>(u) * static_cast<long double>(coeff[u]);
    return acc;
  }

  friend bool operator==(const MatchingPolynomial&, const MatchingPolynomial&) = default;
};

/// Memoised matching-polynomial evaluator over induced subgraphs of one
/// host graph, addressed by vertex bitmask in the host's labelling.
///
/// Splits on the lowest remaining vertex v (in an internal BFS order, which
/// keeps the frontier and hence the memo small):
///   P_S = z P_{S-v} + sum_{w ~ v, w in S} P_{S-v-w}.
class PolynomialOracle {
 public:
  using Mask = std::uint32_t;

  /// Memo entries allowed before giving up; bounds memory on dense inputs.
  static constexpr std::size_t state_budget = 4'000'000;

  explicit PolynomialOracle(const Graph& g) : n_(g.vertex_count()) {
    if (n_ > exact_vertex_budget)
      throw BudgetExceeded("exact matching polynomial limited to " + std::to_string(exact_vertex_budget) +
                           " vertices; use the sampling estimators for larger graphs");
    // BFS order from each component.
    to_internal_.assign(n_, 0);
    std::vector<bool> seen(n_, false);
    std::vector<Vertex> order;
    for (Vertex s = 0; s < n_; ++s) {
      if (seen[s]) continue;
      seen[s] = true;
      std::size_t head = order.size();
      order.push_back(s);
      for (; head < order.size(); ++head)
        for (Vertex w : g.neighbors(order[head]))
          if (!seen[w]) seen[w] = true, order.push_back(w);
    }
    for (Vertex i = 0; i < n_; ++i) to_internal_[order[i]] = i;
    adj_.assign(n_, 0);
    for (const Edge& e : g.edges()) {
      adj_[to_internal_[e.u]] |= Mask{1} << to_internal_[e.v];
      adj_[to_internal_[e.v]] |= Mask{1} << to_internal_[e.u];
    }
  }

  std::size_t vertex_count() const { return n_; }

  /// Mask of all vertices.
  Mask full() const { return n_ == 32 ? ~Mask{0} : ((Mask{1} << n_) - 1); }

  /// Bit for host vertex v.
  Mask bit(Vertex v) const { return Mask{1} << to_internal_[v]; }

  /// Host-labelled neighbours of v inside `mask`.
  std::vector<Vertex> neighbors_in(Vertex v, Mask mask) const {
    std::vector<Vertex> out;
    for (Vertex w = 0; w < n_; ++w)
      if ((adj_[to_internal_[v]] & bit(w)) && (mask & bit(w))) out.push_back(w);
    return out;
  }

  /// Matching polynomial of the subgraph induced by `mask`, indexed by
  /// exposed count (length popcount(mask) + 1).
  MatchingPolynomial polynomial(Mask mask) const {
    auto span = coefficients(mask);
    return MatchingPolynomial{std::vector<std::uint64_t>(span.begin(), span.end())};
  }

  long double evaluate(Mask mask, long double z) const {
    auto c = coefficients(mask);
    long double acc = 0;
    for (std::size_t u = c.size(); u-- > 0;) acc = acc * z + static_cast<long double>(c[u]);
    return acc;
  }

 private:
  std::span<const std::uint64_t> coefficients(Mask mask) const {
    auto [offset, len] = solve(mask);
    return {pool_.data() + offset, len};
  }

  // Returns (offset, length) into pool_.
  std::pair<std::size_t, std::size_t> solve(Mask mask) const {
    const std::size_t len = static_cast<std::size_t>(std::popcount(mask)) + 1;
    if (mask == 0) {
      if (empty_offset_ == npos) {
        empty_offset_ = pool_.size();
        pool_.push_back(1);
      }
      return {empty_offset_, 1};
    }
    if (auto it = memo_.find(mask); it != memo_.end()) return {it->second, len};
    if (memo_.size() >= state_budget)
      throw BudgetExceeded("matching polynomial state budget exhausted; graph too dense for the exact oracle");

    std::vector<std::uint64_t> acc(len, 0);
    const int v = std::countr_zero(mask);
    const Mask rest = mask & ~(Mask{1} << v);
    {
      auto [off, l] = solve(rest);
      for (std::size_t u = 0; u < l; ++u) acc[u + 1] += pool_[off + u];
    }
    for (Mask nb = adj_[v] & rest; nb; nb &= nb - 1) {
      const int w = std::countr_zero(nb);
      auto [off, l] = solve(rest & ~(Mask{1} << w));
      for (std::size_t u = 0; u < l; ++u) acc[u] += pool_[off + u];
    }
    const std::size_t offset = pool_.size();
    pool_.insert(pool_.end(), acc.begin(), acc.end());
    memo_.emplace(mask, offset);
    return {offset, len};
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t n_;
  std::vector<Vertex> to_internal_;
  std::vector<Mask> adj_;
  mutable std::vector<std::uint64_t> pool_;
  mutable std::unordered_map<Mask, std::size_t> memo_;
  mutable std::size_t empty_offset_ = npos;
};

inline MatchingPolynomial matching_polynomial(const Graph& g) {
  PolynomialOracle oracle(g);
  return oracle.polynomial(oracle.full());
}

}  // namespace mmatch
