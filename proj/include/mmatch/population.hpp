#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "mmatch/degree_distribution.hpp"
#include "mmatch/errors.hpp"
#include "mmatch/limit_formulas.hpp"
#include "mmatch/random.hpp"

namespace mmatch {

/// Empirical approximation of a law on [0,1].
struct Population {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }

  double mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return values.empty() ? 0.0 : s / static_cast<double>(values.size());
  }

  /// Mass on (0, 1].
  double positive_mass() const {
    std::size_t c = 0;
    for (double v : values) c += v > 0.0;
    return values.empty() ? 0.0 : static_cast<double>(c) / static_cast<double>(values.size());
  }
};

struct PopulationOptions {
  std::size_t pop_size = 100'000;
  std::size_t sweeps = 200;
  std::uint64_t seed = 1;
  /// Stop once the population mean moved less than `tolerance` over the
  /// last `window` sweeps. Set window to 0 to always run every sweep.
  std::size_t window = 10;
  double tolerance = 1e-4;
  /// Number of root-law draws used for the final mean (0: pop_size).
  std::size_t root_samples = 0;
};

struct PopulationResult {
  Population population;
  double root_mean;
  double root_std_error;
  std::vector<double> mean_history;  ///< population mean after each sweep
  std::size_t sweeps_run;
  bool converged;
};

namespace detail {

inline void check_population_options(const PopulationOptions& opt) {
  if (opt.pop_size < 1000) throw InvalidParameter("population size must be >= 1000");
}

inline bool settled(const std::vector<double>& hist, const PopulationOptions& opt) {
  if (opt.window == 0 || hist.size() <= opt.window) return false;
  return std::abs(hist.back() - hist[hist.size() - 1 - opt.window]) < opt.tolerance;
}

template <class Draw>
std::pair<double, double> mean_and_se(std::size_t samples, Draw&& draw) {
  double s = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    double y = draw();
    s += y, sq += y * y;
  }
  const auto m = static_cast<double>(samples);
  double mean = s / m;
  double var = samples > 1 ? std::max(0.0, (sq - m * mean * mean) / (m - 1)) : 0.0;
  return {mean, std::sqrt(var / m)};
}

}  // namespace detail

/// Population dynamics for the positive-temperature equation
///   X =d z^2 / (z^2 + sum_{i <= N} X_i),  N ~ size-biased law,
/// started from the all-ones population, with synchronous whole-population
/// replacement per sweep. `root_mean` is the mean of the root law, the same
/// map with N drawn from the law itself: the limit of E[R_z].
inline PopulationResult population_dynamics_z(const DegreeDistribution& law, double z,
                                              const PopulationOptions& opt = {}) {
  if (!(z > 0.0)) throw InvalidParameter("temperature must be > 0");
  detail::check_population_options(opt);
  const double z2 = z * z;
  DegreeSampler offspring(law.mean() > 0.0 ? law.size_biased() : DegreeDistribution::dirac(0));
  DegreeSampler root_law(law);

  std::vector<double> cur(opt.pop_size, 1.0), next(opt.pop_size);
  PopulationResult res{{}, 0.0, 0.0, {}, 0, false};
  for (std::size_t s = 0; s < opt.sweeps; ++s) {
    Rng rng = make_rng(opt.seed, s);
    for (double& y : next) {
      std::size_t k = offspring(rng);
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) sum += cur[uniform_index(rng, cur.size())];
      y = z2 / (z2 + sum);
    }
    cur.swap(next);
    double m = 0.0;
    for (double v : cur) m += v;
    res.mean_history.push_back(m / static_cast<double>(cur.size()));
    res.sweeps_run = s + 1;
    if (detail::settled(res.mean_history, opt)) {
      res.converged = true;
      break;
    }
  }
  Rng rng = make_rng(opt.seed, opt.sweeps + 1);
  auto [mean, se] = detail::mean_and_se(opt.root_samples ? opt.root_samples : opt.pop_size, [&] {
    std::size_t k = root_law(rng);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += cur[uniform_index(rng, cur.size())];
    return z2 / (z2 + sum);
  });
  res.population.values = std::move(cur);
  res.root_mean = mean;
  res.root_std_error = se;
  return res;
}

/// One draw of Y = 1 / (1 + sum_{i <= N} (sum_{j <= N'_i} X_ij)^(-1)) with an
/// empty or zero inner sum making Y = 0.
template <class OuterSampler, class InnerSampler>
double zero_temperature_draw(OuterSampler& outer, InnerSampler& inner, const std::vector<double>& pop, Rng& rng) {
  const std::size_t n = outer(rng);
  double acc = 0.0;
  bool blocked = false;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t m = inner(rng);
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += pop[uniform_index(rng, pop.size())];
    // Keep consuming draws after blocking so the stream layout does not
    // depend on earlier values.
    if (s > 0.0) acc += 1.0 / s;
    else blocked = true;
  }
  return blocked ? 0.0 : 1.0 / (1.0 + acc);
}

struct ZeroTemperatureResult {
  PopulationResult run;
  double p_init;
  double positive_mass;  ///< mass of the final population on (0,1]
};

/// Population dynamics at zero temperature for the two-type tree with
/// degree laws (a, b), targeting the largest fixed point below
/// Bernoulli(p_init) of
///   mu = Theta_{hat a, hat b}(mu)
/// by monotone iteration. By default p_init is the largest historical
/// record of F^a. The root law is Theta_{a, hat b}; its mean targets
/// F^a(p_init). The single-type case is a == b.
inline ZeroTemperatureResult population_dynamics_zero(const DegreeDistribution& a, const DegreeDistribution& b,
                                                      std::optional<double> p_init = std::nullopt,
                                                      const PopulationOptions& opt = {}) {
  detail::check_population_options(opt);
  const double p = p_init ? *p_init : historical_records(a, b).last_location();
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("initial mass must lie in [0,1]");
  const auto a_hat = a.size_biased();
  const auto b_hat = b.size_biased();
  DegreeSampler outer(a_hat), inner(b_hat), root_outer(a);

  const auto ones = static_cast<std::size_t>(std::llround(p * static_cast<double>(opt.pop_size)));
  std::vector<double> cur(opt.pop_size, 0.0), next(opt.pop_size);
  std::fill_n(cur.begin(), std::min(ones, cur.size()), 1.0);

  ZeroTemperatureResult out{{{}, 0.0, 0.0, {}, 0, false}, p, 0.0};
  auto& res = out.run;
  for (std::size_t s = 0; s < opt.sweeps; ++s) {
    Rng rng = make_rng(opt.seed, s);
    for (double& y : next) y = zero_temperature_draw(outer, inner, cur, rng);
    cur.swap(next);
    double m = 0.0;
    for (double v : cur) m += v;
    res.mean_history.push_back(m / static_cast<double>(cur.size()));
    res.sweeps_run = s + 1;
    if (detail::settled(res.mean_history, opt)) {
      res.converged = true;
      break;
    }
  }
  Rng rng = make_rng(opt.seed, opt.sweeps + 1);
  auto [mean, se] = detail::mean_and_se(opt.root_samples ? opt.root_samples : opt.pop_size,
                                        [&] { return zero_temperature_draw(root_outer, inner, cur, rng); });
  res.population.values = std::move(cur);
  res.root_mean = mean;
  res.root_std_error = se;
  out.positive_mass = res.population.positive_mass();
  return out;
}

/// Single-type convenience overload.
inline ZeroTemperatureResult population_dynamics_zero(const DegreeDistribution& law,
                                                      std::optional<double> p_init = std::nullopt,
                                                      const PopulationOptions& opt = {}) {
  return population_dynamics_zero(law, law, p_init, opt);
}

}  // namespace mmatch
