#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mmatch/cuckoo.hpp"
#include "mmatch/degree_distribution.hpp"
#include "mmatch/generators.hpp"
#include "mmatch/limit_formulas.hpp"
#include "mmatch/max_matching.hpp"
#include "mmatch/population.hpp"
#include "mmatch/sandwich.hpp"
#include "oracles.hpp"

using namespace mmatch;

namespace {

const char* appendix_a = "pmf 3:3/4 15:1/4";
const char* appendix_b = "pmf 3:50/101 20:50/101 700:1/101";

std::vector<DegreeDistribution> zoo() {
  return {DegreeDistribution::dirac(1),
          DegreeDistribution::dirac(2),
          DegreeDistribution::dirac(3),
          DegreeDistribution::dirac(5),
          DegreeDistribution::poisson(1.0),
          DegreeDistribution::poisson(2.0),
          DegreeDistribution::poisson(std::numbers::e),
          DegreeDistribution::poisson(3.0),
          parse_distribution(appendix_a),
          parse_distribution(appendix_b),
          DegreeDistribution::from_pmf({0.2, 0.3, 0.1, 0.4}),
          DegreeDistribution::from_pmf({0.5, 0.0, 0.5})};
}

}  // namespace

TEST(DistributionTest, ParseForms) {
  EXPECT_EQ(parse_distribution("dirac 3").dirac_value(), 3);
  EXPECT_TRUE(parse_distribution("poisson 2.5").is_poisson());
  auto d = parse_distribution("pmf 0 0 0 0.75 0 0 0 0 0 0 0 0 0 0 0 0.25");
  auto s = parse_distribution(appendix_a);
  for (std::size_t k = 0; k < 20; ++k) EXPECT_NEAR(d.probability(k), s.probability(k), 1e-15);
  EXPECT_NEAR(parse_distribution(appendix_b).probability(700), 1.0 / 101, 1e-15);
}

TEST(DistributionTest, ParseErrorsCarryPosition) {
  auto pos = [](const char* text) -> std::size_t {
    try {
      parse_distribution(text);
    } catch (const ParseError& e) {
      return e.where();
    }
    return 0;
  };
  EXPECT_EQ(pos("binomial 3"), 1u);
  EXPECT_EQ(pos("poisson x"), 2u);
  EXPECT_EQ(pos("pmf 0.5 abc"), 3u);
  EXPECT_EQ(pos("pmf 0.5 0.6"), 3u);  // reported at the last entry
  EXPECT_EQ(pos("dirac"), 2u);
}

TEST(DistributionTest, Invariants) {
  for (const auto& d : zoo()) {
    double total = 0;
    for (double p : d.pmf()) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
  auto p = DegreeDistribution::poisson(3.0);
  double tail = 0;
  for (std::size_t k = p.support_max() + 1; k < 200; ++k) tail += p.probability(k);
  EXPECT_LT(tail, 1e-12);
}

TEST(SizeBiasTest, Examples) {
  EXPECT_EQ(DegreeDistribution::dirac(4).size_biased().dirac_value(), 3);
  auto p = DegreeDistribution::poisson(2.0).size_biased();
  EXPECT_TRUE(p.is_poisson());
  EXPECT_EQ(p.poisson_mean(), 2.0);
  auto h = DegreeDistribution::from_pmf({0.5, 0.0, 0.5}).size_biased();
  EXPECT_NEAR(h.probability(1), 1.0, 1e-15);
  EXPECT_THROW(DegreeDistribution::dirac(0).size_biased(), InvalidInput);
}

TEST(SizeBiasTest, GeneratingFunctionIdentity) {
  for (const auto& d : zoo()) {
    auto h = d.size_biased();
    double total = 0;
    for (double p : h.pmf()) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
    for (int i = 0; i <= 100; ++i) {
      double t = i / 100.0;
      EXPECT_NEAR(h.pgf(t) * d.mean(), d.pgf_d1(t), 1e-12 * std::max(1.0, d.mean()));
    }
  }
}

TEST(FormulaTest, TrivialF) {
  for (int i = 0; i <= 50; ++i) {
    double t = i / 50.0;
    EXPECT_NEAR(eval_F(DegreeDistribution::dirac(2), t), 0.0, 1e-15);
    EXPECT_NEAR(eval_F(DegreeDistribution::dirac(1), t), 0.0, 1e-15);
    auto both = eval_F_bipartite(DegreeDistribution::dirac(2), DegreeDistribution::dirac(2), t);
    EXPECT_NEAR(both.a, 0.0, 1e-15);
    EXPECT_NEAR(both.b, 0.0, 1e-15);
  }
}

TEST(FormulaTest, FAtZeroIsMassAtZero) {
  for (const auto& d : zoo()) EXPECT_NEAR(eval_F(d, 0.0), d.probability(0), 1e-14);
}

TEST(FormulaTest, TwoTypeReducesToSingleType) {
  for (const auto& d : zoo())
    for (double t : {0.0, 0.1, 0.37, 0.8, 1.0}) EXPECT_NEAR(eval_F_two_type(d, d, t), eval_F(d, t), 1e-14);
}

TEST(FormulaTest, PoissonStationaryPoint) {
  auto d = DegreeDistribution::poisson(2.0);
  const double t = oracle::er_fixed_point(2.0);
  const double h = 1e-5;
  double dF = (eval_F(d, t + h) - eval_F(d, t - h)) / (2 * h);
  EXPECT_LT(std::abs(dF), 1e-8);
  EXPECT_LT(std::abs(stationarity_residual(d, t)), 1e-12);
}

TEST(FormulaTest, CuckooFa) {
  const int k = 3;
  for (double alpha : {0.5, 0.95, 1.2}) {
    auto a = DegreeDistribution::dirac(k);
    auto b = DegreeDistribution::poisson(k * alpha);
    for (double x : {0.1, 0.4, 0.9}) {
      double e = std::exp(-k * alpha * x);
      double expect = std::pow(1 - e, k) - (1 / alpha) * (1 - e - k * alpha * x * e);
      EXPECT_NEAR(eval_F_two_type(a, b, x), expect, 1e-13);
    }
  }
}

TEST(FormulaTest, GIdentity) {
  for (const auto& d : zoo()) {
    for (int i = 0; i <= 1000; ++i) {
      double t = i / 1000.0;
      EXPECT_NEAR(eval_g(d, 1.0 - t), (1.0 - eval_F(d, t)) / 2.0, 1e-12);
    }
  }
  for (double x : {0.0, 0.3, 1.0}) EXPECT_NEAR(eval_g(DegreeDistribution::dirac(2), x), 0.5, 1e-15);
}

TEST(RecordsTest, PoissonSingleRecord) {
  for (double c : {2.0, std::numbers::e, 3.0})
    EXPECT_EQ(historical_records(DegreeDistribution::poisson(c)).records.size(), 1u) << c;
}

TEST(RecordsTest, AppendixMultipleRecords) {
  for (const char* s : {appendix_a, appendix_b}) {
    auto rec = historical_records(parse_distribution(s));
    EXPECT_GE(rec.records.size(), 2u) << s;
  }
}

TEST(RecordsTest, Dirac2PlateauRecordAtZero) {
  auto rec = historical_records(DegreeDistribution::dirac(2));
  ASSERT_EQ(rec.records.size(), 1u);
  EXPECT_EQ(rec.records[0].location, 0.0);
}

TEST(RecordsTest, FrozenLocations) {
  auto a = historical_records(parse_distribution(appendix_a));
  ASSERT_EQ(a.records.size(), 2u);
  EXPECT_EQ(a.records[0].location, 0.0);
  EXPECT_NEAR(a.records[1].location, 0.234541, 1e-6);
  EXPECT_NEAR(a.records[1].F, 0.0118861, 1e-7);
  auto p = historical_records(DegreeDistribution::poisson(2.0));
  EXPECT_NEAR(p.records[0].location, oracle::er_fixed_point(2.0), 1e-10);
}

TEST(RecordsTest, RecordInvariants) {
  std::vector<std::pair<DegreeDistribution, DegreeDistribution>> pairs;
  for (const auto& d : zoo()) pairs.emplace_back(d, d);
  pairs.emplace_back(DegreeDistribution::dirac(3), DegreeDistribution::poisson(2.85));
  pairs.emplace_back(DegreeDistribution::poisson(2.85), DegreeDistribution::dirac(3));
  pairs.emplace_back(DegreeDistribution::dirac(2), DegreeDistribution::poisson(1.0));
  pairs.emplace_back(DegreeDistribution::from_pmf({0.1, 0.4, 0.5}), DegreeDistribution::poisson(4.0));
  for (auto& [a, b] : pairs) {
    auto rec = historical_records(a, b);
    for (std::size_t i = 0; i < rec.records.size(); ++i) {
      EXPECT_LE(std::abs(rec.records[i].residual), 1e-9);
      if (i) {
        EXPECT_GT(rec.records[i].F, rec.records[i - 1].F);
      }
    }
  }
}

TEST(GammaTest, Examples) {
  EXPECT_NEAR(gamma_ugw(DegreeDistribution::dirac(2)).gamma, 0.5, 1e-15);
  EXPECT_NEAR(gamma_ugw(DegreeDistribution::dirac(1)).gamma, 0.5, 1e-15);
  EXPECT_NEAR(gamma_ugw(DegreeDistribution::poisson(2.0)).gamma, oracle::er_gamma(2.0), 1e-12);
  EXPECT_NEAR(gamma_ugw(DegreeDistribution::poisson(2.0)).gamma, 0.39196321347711804, 1e-10);
  EXPECT_EQ(gamma_ugw(DegreeDistribution::dirac(0)).gamma, 0.0);
}

TEST(GammaTest, PoissonClosedFormAcrossC) {
  for (double c : {0.5, 1.0, 1.5, 2.5, 3.0, 4.0, 6.0})
    EXPECT_NEAR(gamma_ugw(DegreeDistribution::poisson(c)).gamma, oracle::er_gamma(c), 1e-9) << c;
}

TEST(GammaTest, RangeAndMinG) {
  for (const auto& d : zoo()) {
    auto r = gamma_ugw(d);
    EXPECT_GE(r.gamma, 0.0);
    EXPECT_LE(r.gamma, 0.5);
    double mg = 1.0;
    for (int i = 0; i <= 20000; ++i) mg = std::min(mg, eval_g(d, i / 20000.0));
    EXPECT_NEAR(mg, r.gamma, 1e-9);
  }
}

TEST(GammaTest, TwoTypeAgreesWithSingleType) {
  for (const auto& d : zoo()) EXPECT_NEAR(gamma_uhgw(d, d).gamma, gamma_ugw(d).gamma * 1.0, 1e-12);
  EXPECT_NEAR(gamma_uhgw(DegreeDistribution::dirac(1), DegreeDistribution::dirac(1)).gamma, 0.5, 1e-15);
  EXPECT_THROW(gamma_uhgw(DegreeDistribution::dirac(0), DegreeDistribution::dirac(1)), InvalidInput);
}

TEST(GammaTest, SymmetricFormsAgree) {
  std::vector<std::pair<DegreeDistribution, DegreeDistribution>> pairs{
      {DegreeDistribution::dirac(3), DegreeDistribution::poisson(3 * 0.95)},
      {DegreeDistribution::dirac(3), DegreeDistribution::poisson(3 * 0.5)},
      {DegreeDistribution::dirac(4), DegreeDistribution::poisson(4 * 1.1)},
      {DegreeDistribution::dirac(2), DegreeDistribution::poisson(1.0)},
      {DegreeDistribution::poisson(2.0), DegreeDistribution::poisson(3.0)},
      {parse_distribution(appendix_a), DegreeDistribution::poisson(2.0)},
      {DegreeDistribution::from_pmf({0.1, 0.4, 0.5}), DegreeDistribution::dirac(2)}};
  for (auto& [a, b] : pairs) {
    auto r = gamma_uhgw(a, b);
    const double l = r.lambda;
    EXPECT_NEAR(l * (1 - r.max_Fa.value), (1 - l) * (1 - r.max_Fb.value), 1e-9);
    EXPECT_NEAR(r.gamma, r.gamma_symmetric, 1e-9);
  }
}

TEST(GammaTest, ConjugateRecords) {
  auto a = DegreeDistribution::dirac(3), b = DegreeDistribution::poisson(3 * 0.95);
  auto r = gamma_uhgw(a, b);
  for (const auto& rec : r.records_a.records) {
    const double x = rec.location;
    const double y = b.pgf_d1(1.0 - x) / b.mean();
    EXPECT_NEAR(r.lambda * (1 - rec.F), (1 - r.lambda) * (1 - eval_F_two_type(b, a, y)), 1e-9);
  }
}

TEST(GammaTest, TruncationContinuity) {
  auto p = DegreeDistribution::poisson(3.0);
  double prev_gap = 1.0;
  for (std::size_t d : {3, 6, 9, 12, 15, 18}) {
    double gap = std::abs(gamma_ugw(p.truncated(d)).gamma - gamma_ugw(p.truncated(d + 10)).gamma);
    EXPECT_LE(gap, prev_gap + 1e-12);
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap, 1e-9);
}

TEST(CuckooTest, Thresholds) {
  auto t3 = cuckoo_threshold(3);
  EXPECT_NEAR(t3.xi, static_cast<double>(oracle::cuckoo_xi(3)), 1e-10);
  EXPECT_NEAR(t3.alpha_c, 0.917935276658086, 1e-10);
  EXPECT_NEAR(cuckoo_threshold(4).alpha_c, 0.976770164878046, 1e-10);
  auto sec = cuckoo_threshold_secant(3);
  EXPECT_NEAR(sec.alpha_c, t3.alpha_c, 1e-10);
  EXPECT_THROW(cuckoo_threshold(2), UnsupportedParameter);
  double prev = 0;
  for (int k = 3; k <= 8; ++k) {
    double a = cuckoo_threshold(k).alpha_c;
    EXPECT_GT(a, prev);
    EXPECT_LT(a, 1.0);
    prev = a;
  }
}

TEST(CuckooTest, MatchedFraction) {
  EXPECT_EQ(cuckoo_matched_fraction(3, 0.5).fraction, 1.0);
  auto f = cuckoo_matched_fraction(3, 0.95);
  EXPECT_TRUE(f.above_threshold);
  EXPECT_GT(f.fraction, 0.9);
  EXPECT_LT(f.fraction, 1.0);
  // The same number from the two-type closed form.
  auto r = gamma_uhgw(DegreeDistribution::dirac(3), DegreeDistribution::poisson(3 * 0.95));
  EXPECT_NEAR(f.fraction, r.matched_fraction_a(), 1e-9);
  EXPECT_NEAR(f.fraction, 0.975987, 1e-6);
}

TEST(CuckooTest, HopcroftKarpBelowThreshold) {
  const std::size_t m = 100'000;
  auto g = gen_left_regular(m, 0.5, 3, 1);
  auto nu = maximum_matching_bipartite(g).size();
  EXPECT_GE(static_cast<double>(nu) / static_cast<double>(g.count_side(Side::a)), 0.999);
}

TEST(PopulationTest, Dirac2GoldenRatio) {
  PopulationOptions opt;
  opt.pop_size = 20'000;
  auto r = population_dynamics_z(DegreeDistribution::dirac(2), 1.0, opt);
  const double x = (std::sqrt(5.0) - 1) / 2;
  EXPECT_NEAR(r.population.mean(), x, 1e-3);
  EXPECT_TRUE(r.converged);
}

TEST(PopulationTest, HotLimit) {
  PopulationOptions opt;
  opt.pop_size = 5000;
  opt.sweeps = 20;
  auto r = population_dynamics_z(DegreeDistribution::poisson(3.0), 1e3, opt);
  EXPECT_GT(r.root_mean, 0.999);
}

TEST(PopulationTest, Reproducible) {
  PopulationOptions opt;
  opt.pop_size = 3000;
  opt.sweeps = 15;
  auto a = population_dynamics_z(DegreeDistribution::poisson(2.0), 0.5, opt);
  auto b = population_dynamics_z(DegreeDistribution::poisson(2.0), 0.5, opt);
  EXPECT_EQ(a.population.values, b.population.values);
  EXPECT_EQ(a.root_mean, b.root_mean);
  EXPECT_THROW(population_dynamics_z(DegreeDistribution::poisson(2.0), 0.5, PopulationOptions{.pop_size = 10}),
               InvalidParameter);
}

TEST(PopulationTest, MatchesLocalEstimatorAtPositiveTemperature) {
  PopulationOptions opt;
  opt.pop_size = 100'000;
  auto r = population_dynamics_z(DegreeDistribution::poisson(2.0), 0.5, opt);
  auto g = gen_erdos_renyi(100'000, 2.0, 5);
  std::vector<double> zs{0.5};
  SandwichOptions so;
  so.depth = 14;
  so.roots = 4000;
  auto s = estimate_mean_rep_star(g, zs, so);
  EXPECT_NEAR(r.root_mean, s.rows[0].mean_rep, 1e-2);
}

TEST(PopulationTest, ZeroTemperatureTrivial) {
  auto r = population_dynamics_zero(DegreeDistribution::dirac(2), DegreeDistribution::dirac(2), 0.0,
                                    PopulationOptions{.pop_size = 2000, .sweeps = 5});
  EXPECT_EQ(r.positive_mass, 0.0);
  EXPECT_EQ(r.run.root_mean, 0.0);
}

TEST(PopulationTest, ZeroTemperaturePoisson2) {
  auto d = DegreeDistribution::poisson(2.0);
  auto r = population_dynamics_zero(d);
  const double gamma = gamma_ugw(d).gamma;
  EXPECT_NEAR(r.run.root_mean, 1 - 2 * gamma, 5e-3);
  EXPECT_NEAR(r.positive_mass, r.p_init, 1e-2);
}

TEST(PopulationTest, ZeroTemperatureMeanNonincreasing) {
  auto d = DegreeDistribution::poisson(3.0);
  PopulationOptions opt;
  opt.pop_size = 50'000;
  opt.window = 0;
  opt.sweeps = 40;
  auto r = population_dynamics_zero(d, std::nullopt, opt);
  const auto& h = r.run.mean_history;
  for (std::size_t i = 1; i < h.size(); ++i) {
    // Three standard errors of a mean of values in [0,1].
    const double se = std::sqrt(0.25 / static_cast<double>(opt.pop_size));
    EXPECT_LE(h[i], h[i - 1] + 3 * se) << i;
  }
}
