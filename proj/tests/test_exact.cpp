#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "mmatch/exact.hpp"
#include "mmatch/generators.hpp"
#include "mmatch/karp_sipser.hpp"
#include "mmatch/limit_formulas.hpp"
#include "mmatch/matching_polynomial.hpp"
#include "mmatch/max_matching.hpp"
#include "oracles.hpp"

using namespace mmatch;

namespace {

std::vector<std::uint64_t> coeffs(const Graph& g) { return matching_polynomial(g).coeff; }

// Upper tail of chi-square with k degrees of freedom, by series for the
// regularized lower incomplete gamma.
double chi2_pvalue(double x, int k) {
  const double a = k / 2.0, y = x / 2.0;
  double term = 1.0 / a, sum = term;
  for (int n = 1; n < 2000; ++n) {
    term *= y / (a + n);
    sum += term;
  }
  double lower = sum * std::exp(-y + a * std::log(y) - std::lgamma(a));
  return 1.0 - lower;
}

}  // namespace

TEST(PolynomialTest, Examples) {
  EXPECT_EQ(coeffs(named::complete(2)), (std::vector<std::uint64_t>{1, 0, 1}));
  EXPECT_EQ(coeffs(named::complete(3)), (std::vector<std::uint64_t>{0, 3, 0, 1}));
  EXPECT_EQ(coeffs(named::path(4)), (std::vector<std::uint64_t>{1, 0, 3, 0, 1}));
  EXPECT_EQ(matching_polynomial(named::complete(4)).total_matchings(), 10u);
}

TEST(PolynomialTest, StructuralInvariants) {
  for (const auto& g : oracle::small_suite(100)) {
    auto p = matching_polynomial(g);
    const std::size_t n = g.vertex_count();
    ASSERT_EQ(p.coeff.size(), n + 1);
    EXPECT_EQ(p.coeff[n], 1u);
    for (std::size_t u = 0; u <= n; ++u)
      if ((n - u) % 2 == 1) {
        EXPECT_EQ(p.coeff[u], 0u);
      }
    EXPECT_EQ(p.lowest_index(), n - 2 * oracle::nu(g));
  }
}

TEST(PolynomialTest, MatchesBruteForceOnSuite) {
  for (const auto& g : oracle::small_suite()) EXPECT_EQ(coeffs(g), oracle::polynomial(g));
}

TEST(PolynomialTest, BudgetExceeded) {
  EXPECT_THROW(matching_polynomial(named::path(25)), BudgetExceeded);
  EXPECT_NO_THROW(matching_polynomial(named::path(24)));
}

TEST(PolynomialTest, LargestBudgetGraph) {
  // Telephone-number style count for K_n: sum_k n! / (k! (n-2k)! 2^k).
  auto p = matching_polynomial(named::complete(16));
  EXPECT_EQ(p.total_matchings(), 46206736u);
}

TEST(MatchingNumberTest, Examples) {
  EXPECT_EQ(matching_number(named::complete(3)), 1u);
  EXPECT_EQ(matching_number(named::path(4)), 2u);
  EXPECT_EQ(matching_number(named::petersen()), 5u);
  EXPECT_EQ(matching_polynomial(named::petersen()).lowest_index(), 0u);
}

TEST(MatchingNumberTest, BlossomAgreesWithPolynomial) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 300; ++i) {
    std::size_t n = 1 + i % 24;
    auto g = oracle::random_graph(n, std::uniform_real_distribution<double>(0.05, 0.5)(rng), rng);
    auto m = maximum_matching_blossom(g);
    EXPECT_TRUE(is_matching(g, m));
    EXPECT_EQ(2 * m.size(), n - matching_polynomial(g).lowest_index());
  }
}

TEST(MatchingNumberTest, HopcroftKarpAgreesWithBlossom) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto g = gen_left_regular(40 + s, 0.6 + 0.004 * static_cast<double>(s), 1 + s % 4, s);
    auto hk = maximum_matching_bipartite(g);
    EXPECT_TRUE(is_matching(g, hk));
    Graph untagged(g.vertex_count(), std::vector<Edge>(g.edges().begin(), g.edges().end()));
    EXPECT_EQ(hk.size(), maximum_matching_blossom(untagged).size());
  }
}

TEST(MatchingNumberTest, BlossomLargeRandom) {
  // Blossom never loses to a maximal greedy matching and returns a valid
  // matching with no augmenting path of length 1 (maximality).
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto g = gen_erdos_renyi(3000, 3.0, s);
    auto m = maximum_matching_blossom(g);
    EXPECT_TRUE(is_maximal_matching(g, m));
    EXPECT_GE(m.size(), karp_sipser(g, s).matching.size());
  }
}

TEST(IndependenceTest, Examples) {
  auto tag = [](const Graph& g) { return tag_bipartite(g); };
  EXPECT_EQ(independence_number_bipartite(tag(named::complete(2))), 1u);
  EXPECT_EQ(independence_number_bipartite(tag(named::cycle(4))), 2u);
  EXPECT_EQ(independence_number_bipartite(tag(named::star(9))), 9u);
  EXPECT_THROW(independence_number_bipartite(named::cycle(4)), InvalidInput);
}

TEST(ExposureTest, Examples) {
  EXPECT_EQ(exposure_prob_max(RootedGraph(named::complete(2), 0)), 0.0);
  EXPECT_DOUBLE_EQ(exposure_prob_max(RootedGraph(named::path(3), 0)), 0.5);
  EXPECT_EQ(exposure_prob_max(RootedGraph(named::path(3), 1)), 0.0);
  EXPECT_EQ(exposure_prob_max(RootedGraph(named::star(3), 0)), 0.0);
  EXPECT_DOUBLE_EQ(exposure_prob_max(RootedGraph(named::star(3), 1)), 2.0 / 3.0);
}

TEST(ExposureTest, MatchesBruteForceOnSuite) {
  for (const auto& g : oracle::small_suite(200))
    for (Vertex v = 0; v < g.vertex_count(); ++v)
      EXPECT_NEAR(exposure_prob_max(RootedGraph(g, v)), oracle::exposure_max(g, v), 1e-15);
}

TEST(RepTest, Examples) {
  EXPECT_DOUBLE_EQ(rep_exact(RootedGraph(named::complete(2), 0), 1.0), 0.5);
  EXPECT_NEAR(rep_exact(RootedGraph(named::path(3), 1), 1.0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(rep_exact(RootedGraph(named::complete(3), 0), 1e-4), 1.0 / 3.0, 1e-6);
  EXPECT_EQ(rep_exact(RootedGraph(named::path(3), 0), 0.0), 0.5);
  EXPECT_THROW(rep_exact(RootedGraph(named::path(3), 0), -1.0), InvalidParameter);
}

TEST(RepTest, MatchesBruteForceOnSuite) {
  for (const auto& g : oracle::small_suite(150))
    for (double z : {0.1, 0.5, 1.0, 2.0})
      for (Vertex v = 0; v < g.vertex_count(); ++v)
        EXPECT_NEAR(rep_exact(RootedGraph(g, v), z), oracle::rep(g, v, z), 1e-12);
}

TEST(RepTest, NondecreasingInZ) {
  const std::vector<double> grid{1e-3, 0.01, 0.05, 0.1, 0.2, 0.5, 1, 2, 5, 10};
  for (const auto& g : oracle::small_suite()) {
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      double prev = 0.0;
      for (double z : grid) {
        double r = rep_exact(RootedGraph(g, v), z);
        EXPECT_GE(r, prev - 1e-15);
        EXPECT_GT(r, 0.0);
        EXPECT_LE(r, 1.0);
        prev = r;
      }
    }
  }
}

TEST(RepTest, TendsToExposureAtZeroTemperature) {
  for (const auto& g : oracle::small_suite(200)) {
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      RootedGraph rg(g, v);
      const double target = exposure_prob_max(rg);
      const double r3 = rep_exact(rg, 1e-3), r4 = rep_exact(rg, 1e-4);
      // Monotone bracketing: the limit lies below, and convergence is O(z^2).
      EXPECT_LE(target, r4 + 1e-15);
      EXPECT_LE(r4, r3 + 1e-15);
      EXPECT_NEAR(r4, target, 1e-4);
    }
  }
}

TEST(CylinderTest, Examples) {
  auto k2 = named::complete(2);
  EXPECT_NEAR(cylinder_marginal(k2, Matching{{Edge(0, 1)}}, 1.0), 0.5, 1e-15);
  auto k3 = named::complete(3);
  EXPECT_NEAR(cylinder_marginal(k3, Matching{{Edge(0, 2)}}, 1.0), 0.25, 1e-15);
  EXPECT_EQ(cylinder_marginal(named::petersen(), Matching{}, 0.7), 1.0);
  EXPECT_THROW(cylinder_marginal(k3, Matching{{Edge(0, 1), Edge(1, 2)}}, 1.0), InvalidInput);
}

TEST(CylinderTest, OrderInvarianceAndBruteForce) {
  std::mt19937_64 rng(17);
  for (const auto& g : oracle::small_suite(120)) {
    if (g.edge_count() == 0) continue;
    auto m = maximum_matching(g);
    // Random sub-matching.
    std::vector<Edge> sub;
    for (const Edge& e : m.edges)
      if (rng() % 2) sub.push_back(e);
    Matching sm{sub};
    std::vector<Vertex> order;
    for (const Edge& e : sub) order.push_back(e.u), order.push_back(e.v);
    for (double z : {0.3, 1.0, 2.5}) {
      const double base = cylinder_marginal(g, sm, z);
      EXPECT_NEAR(base, oracle::cylinder(g, sub, z), 1e-12);
      for (int p = 0; p < 4; ++p) {
        std::shuffle(order.begin(), order.end(), rng);
        EXPECT_NEAR(cylinder_marginal(g, sm, z, order), base, 1e-13);
      }
    }
  }
}

TEST(BoltzmannTest, EdgelessAlwaysEmpty) {
  for (std::uint64_t s = 0; s < 20; ++s) EXPECT_TRUE(sample_boltzmann(named::edgeless(5), 0.3, s).edges.empty());
}

TEST(BoltzmannTest, HotLimitEmpty) {
  std::size_t empty = 0;
  for (std::uint64_t s = 0; s < 2000; ++s) empty += sample_boltzmann(named::complete(2), 1e3, s).edges.empty();
  EXPECT_GE(empty, 1995u);
}

TEST(BoltzmannTest, TriangleUniformChiSquare) {
  std::map<std::vector<Edge>, double> count;
  const int samples = 100'000;
  for (int s = 0; s < samples; ++s) count[sample_boltzmann(named::complete(3), 1.0, s).edges] += 1;
  ASSERT_EQ(count.size(), 4u);
  double chi = 0;
  for (auto& [m, c] : count) chi += (c - samples / 4.0) * (c - samples / 4.0) / (samples / 4.0);
  EXPECT_GT(chi2_pvalue(chi, 3), 1e-3);
}

TEST(BoltzmannTest, SmallGraphsChiSquare) {
  std::mt19937_64 rng(4);
  const int samples = 100'000;
  for (int trial = 0; trial < 6; ++trial) {
    auto g = oracle::random_graph(3 + trial % 4, 0.6, rng);
    const double z = 0.5 + 0.3 * trial;
    // Expected law by enumeration.
    std::map<std::vector<Edge>, double> expect;
    double total = 0;
    oracle::for_each_matching(g, [&](const auto& idx) {
      std::vector<Edge> m;
      for (auto i : idx) m.push_back(g.edges()[i]);
      std::sort(m.begin(), m.end());
      double w = std::pow(z, static_cast<double>(g.vertex_count() - 2 * m.size()));
      expect[m] += w;
      total += w;
    });
    std::map<std::vector<Edge>, double> seen;
    for (int s = 0; s < samples; ++s) seen[sample_boltzmann(g, z, 1000 * trial + s).edges] += 1;
    double chi = 0;
    for (auto& [m, w] : expect) {
      double e = samples * w / total;
      chi += (seen[m] - e) * (seen[m] - e) / e;
    }
    EXPECT_EQ(seen.size(), expect.size());
    if (expect.size() > 1) {
      EXPECT_GT(chi2_pvalue(chi, static_cast<int>(expect.size()) - 1), 1e-3);
    }
  }
}

TEST(FreeEnergyTest, Examples) {
  EXPECT_NEAR(free_energy(named::complete(2), 1.0), 0.0, 1e-15);
  EXPECT_NEAR(free_energy(named::complete(2), 2.0), 0.5 * std::log(2.5), 1e-15);
  EXPECT_NEAR(free_energy(named::edgeless(7), 0.3), std::log(0.3), 1e-15);
}

TEST(FreeEnergyTest, LogDerivativeIdentity) {
  for (const auto& g : oracle::small_suite(200)) {
    for (double z : {0.3, 0.5, 1.0, 2.0}) {
      auto reps = rep_exact_all(g, z);
      double avg = std::accumulate(reps.begin(), reps.end(), 0.0) / static_cast<double>(g.vertex_count());
      EXPECT_NEAR(log_derivative(g, z), static_cast<double>(g.vertex_count()) * avg / z, 1e-10);
    }
  }
}

TEST(KarpSipserTest, Triangle) {
  auto r = karp_sipser(named::complete(3), 1);
  EXPECT_EQ(r.matching.size(), 1u);
  EXPECT_EQ(r.core_vertex_count, 3u);
  EXPECT_EQ(r.leaf_phase_edges, 0u);
  EXPECT_EQ(r.core_exposed_count, 1u);
}

TEST(KarpSipserTest, OptimalOnForests) {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 100; ++i) {
    std::size_t n = 2 + i % 49;
    auto t = oracle::random_tree(n, rng);
    auto r = karp_sipser(t, i);
    EXPECT_EQ(r.matching.size(), matching_number(t));
    EXPECT_EQ(r.core_vertex_count, 0u);
    EXPECT_EQ(r.leaf_phase_edges, r.matching.size());
  }
}

TEST(KarpSipserTest, MaximalAndBoundedByNu) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 300; ++i) {
    auto g = oracle::random_graph(5 + i % 40, 0.15, rng);
    auto r = karp_sipser(g, i);
    EXPECT_TRUE(is_maximal_matching(g, r.matching));
    EXPECT_LE(r.matching.size(), matching_number(g));
    EXPECT_LE(r.core_exposed_count, r.core_vertex_count);
    EXPECT_LE(r.leaf_phase_edges, r.matching.size());
  }
}

TEST(KarpSipserTest, ErdosRenyiLimit) {
  auto g = gen_erdos_renyi(100'000, 2.0, 21);
  auto r = karp_sipser(g, 21);
  EXPECT_NEAR(static_cast<double>(r.matching.size()) / 1e5, oracle::er_gamma(2.0), 1e-2);
}
