#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mmatch/errors.hpp"
#include "mmatch/random.hpp"

namespace mmatch {

/// Probability distribution on the nonnegative integers, used as a degree
/// law. Either an explicit finite pmf or a Poisson law kept in closed form
/// so that generating-function evaluations carry no truncation error.
class DegreeDistribution {
 public:
  /// Tail mass below which a Poisson law is cut when a finite pmf is needed.
  static constexpr double poisson_tail = 1e-12;
  static constexpr double mass_tolerance = 1e-12;

  static DegreeDistribution dirac(std::size_t k) {
    std::vector<double> p(k + 1, 0.0);
    p[k] = 1.0;
    return DegreeDistribution(std::move(p));
  }

  static DegreeDistribution poisson(double c) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidParameter("poisson mean must be finite and >= 0");
    DegreeDistribution d;
    d.rep_ = Poisson{c};
    return d;
  }

  /// Explicit pmf; must be nonnegative and sum to 1 within 1e-12.
  static DegreeDistribution from_pmf(std::vector<double> p) {
    if (p.empty()) throw InvalidInput("empty pmf");
    double total = 0.0;
    for (double x : p) {
      if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidInput("pmf entries must be finite and >= 0");
      total += x;
    }
    if (std::abs(total - 1.0) > mass_tolerance) throw InvalidInput("pmf does not sum to 1");
    while (p.size() > 1 && p.back() == 0.0) p.pop_back();
    return DegreeDistribution(std::move(p));
  }

  bool is_poisson() const { return std::holds_alternative<Poisson>(rep_); }
  double poisson_mean() const { return std::get<Poisson>(rep_).c; }

  /// Single-atom law, or nullopt-like -1 when not a point mass.
  long dirac_value() const {
    if (is_poisson()) return poisson_mean() == 0.0 ? 0 : -1;
    const auto& p = pmf_ref();
    for (std::size_t k = 0; k < p.size(); ++k)
      if (p[k] == 1.0) return static_cast<long>(k);
    return -1;
  }

  double probability(std::size_t k) const {
    if (is_poisson()) {
      double c = poisson_mean();
      if (c == 0.0) return k == 0 ? 1.0 : 0.0;
      return std::exp(static_cast<double>(k) * std::log(c) - c - std::lgamma(static_cast<double>(k) + 1.0));
    }
    const auto& p = pmf_ref();
    return k < p.size() ? p[k] : 0.0;
  }

  /// Largest degree with non-negligible mass (the Poisson cut point).
  std::size_t support_max() const {
    if (!is_poisson()) return pmf_ref().size() - 1;
    double c = poisson_mean();
    if (c == 0.0) return 0;
    std::size_t k = static_cast<std::size_t>(std::ceil(c));
    double tail = 1.0;
    for (std::size_t j = 0; j <= k; ++j) tail -= probability(j);
    while (tail >= poisson_tail) {
      ++k;
      double pk = probability(k);
      tail -= pk;
      // Cancellation floor: once terms are this small the tail is too.
      if (pk < poisson_tail * 1e-3 && static_cast<double>(k) > c) break;
    }
    return k;
  }

  /// Finite pmf; Poisson laws are cut at `support_max()` and renormalised.
  std::vector<double> pmf() const {
    if (!is_poisson()) return pmf_ref();
    std::vector<double> p(support_max() + 1);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = probability(k);
    double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& x : p) x /= s;
    return p;
  }

  double mean() const {
    if (is_poisson()) return poisson_mean();
    const auto& p = pmf_ref();
    double m = 0.0;
    for (std::size_t k = 1; k < p.size(); ++k) m += static_cast<double>(k) * p[k];
    return m;
  }

  /// Generating function phi(t) = sum_k p_k t^k.
  double pgf(double t) const {
    if (is_poisson()) return std::exp(poisson_mean() * (t - 1.0));
    const auto& p = pmf_ref();
    double acc = 0.0;
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * t + p[k];
    return acc;
  }

  double pgf_d1(double t) const {
    if (is_poisson()) return poisson_mean() * pgf(t);
    const auto& p = pmf_ref();
    double acc = 0.0;
    for (std::size_t k = p.size(); k-- > 1;) acc = acc * t + static_cast<double>(k) * p[k];
    return acc;
  }

  double pgf_d2(double t) const {
    if (is_poisson()) return poisson_mean() * poisson_mean() * pgf(t);
    const auto& p = pmf_ref();
    double acc = 0.0;
    for (std::size_t k = p.size(); k-- > 2;)
      acc = acc * t + static_cast<double>(k) * static_cast<double>(k - 1) * p[k];
    return acc;
  }

  /// Law of (D - 1) under degree size-biasing: q_n = (n+1) p_{n+1} / mean.
  DegreeDistribution size_biased() const {
    double m = mean();
    if (!(m > 0.0)) throw InvalidInput("size-biasing needs a positive mean");
    if (is_poisson()) return *this;
    const auto& p = pmf_ref();
    std::vector<double> q(p.size() - 1);
    for (std::size_t n = 0; n < q.size(); ++n) q[n] = static_cast<double>(n + 1) * p[n + 1] / m;
    double s = std::accumulate(q.begin(), q.end(), 0.0);
    for (double& x : q) x /= s;  // only rounding noise is removed here
    return DegreeDistribution(std::move(q));
  }

  /// Degree law after isolating every vertex of degree above `cap`: the
  /// mass beyond `cap` moves to 0.
  DegreeDistribution truncated(std::size_t cap) const {
    std::vector<double> p = pmf();
    if (p.size() <= cap + 1) return *this;
    double tail = std::accumulate(p.begin() + static_cast<std::ptrdiff_t>(cap) + 1, p.end(), 0.0);
    p.resize(cap + 1);
    p[0] += tail;
    return DegreeDistribution(std::move(p));
  }

  /// Text form accepted by `parse_distribution`.
  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    if (is_poisson()) {
      os << "poisson " << poisson_mean();
      return os.str();
    }
    if (long k = dirac_value(); k >= 0) {
      os << "dirac " << k;
      return os.str();
    }
    os << "pmf";
    const auto& p = pmf_ref();
    for (std::size_t k = 0; k < p.size(); ++k)
      if (p[k] != 0.0) os << ' ' << k << ':' << p[k];
    return os.str();
  }

 private:
  struct Poisson {
    double c;
  };

  DegreeDistribution() = default;
  explicit DegreeDistribution(std::vector<double> p) : rep_(std::move(p)) {}

  const std::vector<double>& pmf_ref() const { return std::get<std::vector<double>>(rep_); }

  std::variant<std::vector<double>, Poisson> rep_{std::vector<double>{1.0}};
};

/// Draws degrees from a DegreeDistribution.
class DegreeSampler {
 public:
  explicit DegreeSampler(const DegreeDistribution& d) {
    if (d.is_poisson()) {
      poisson_ = std::poisson_distribution<long>(d.poisson_mean() > 0 ? d.poisson_mean() : 1.0);
      zero_ = d.poisson_mean() == 0.0;
      use_poisson_ = true;
    } else {
      auto p = d.pmf();
      discrete_ = std::discrete_distribution<std::size_t>(p.begin(), p.end());
    }
  }

  std::size_t operator()(Rng& rng) {
    if (use_poisson_) return zero_ ? 0 : static_cast<std::size_t>(poisson_(rng));
    return discrete_(rng);
  }

 private:
  bool use_poisson_ = false;
  bool zero_ = false;
  std::poisson_distribution<long> poisson_;
  std::discrete_distribution<std::size_t> discrete_;
};

namespace detail {

inline std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == ',') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline double parse_number(const std::string& tok, std::size_t pos) {
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ParseError("not a number: '" + tok + "'", pos);
    }
    if (used != s.size() || !std::isfinite(v)) throw ParseError("not a number: '" + tok + "'", pos);
    return v;
  };
  if (auto slash = tok.find('/'); slash != std::string::npos) {
    double num = to_double(tok.substr(0, slash));
    double den = to_double(tok.substr(slash + 1));
    if (den == 0.0) throw ParseError("zero denominator", pos);
    return num / den;
  }
  return to_double(tok);
}

inline std::size_t parse_count(const std::string& tok, std::size_t pos) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("expected a nonnegative integer: '" + tok + "'", pos);
  return static_cast<std::size_t>(std::stoull(tok));
}

}  // namespace detail

/// Parses "dirac k", "poisson c" or "pmf ..." into a distribution.
///
/// pmf entries are either dense ("pmf 0.5 0 0.5") or sparse degree:mass
/// pairs ("pmf 3:3/4 15:1/4"); masses may be written as fractions. A pmf
/// whose total is within 1e-6 of one is renormalised, anything further off
/// is rejected. Error positions are 1-based token indices.
inline DegreeDistribution parse_distribution(std::string_view text) {
  auto tok = detail::split_tokens(text);
  if (tok.empty()) throw ParseError("empty distribution spec", 1);
  const std::string& kind = tok[0];
  if (kind == "dirac") {
    if (tok.size() != 2) throw ParseError("dirac takes exactly one integer", std::min<std::size_t>(tok.size() + 1, 3));
    return DegreeDistribution::dirac(detail::parse_count(tok[1], 2));
  }
  if (kind == "poisson") {
    if (tok.size() != 2) throw ParseError("poisson takes exactly one mean", std::min<std::size_t>(tok.size() + 1, 3));
    double c = detail::parse_number(tok[1], 2);
    if (c < 0.0) throw ParseError("poisson mean must be >= 0", 2);
    return DegreeDistribution::poisson(c);
  }
  if (kind == "pmf") {
    if (tok.size() < 2) throw ParseError("pmf needs at least one entry", 2);
    std::vector<double> p;
    bool sparse = tok[1].find(':') != std::string::npos;
    for (std::size_t i = 1; i < tok.size(); ++i) {
      const std::string& t = tok[i];
      std::size_t pos = i + 1;
      bool has_colon = t.find(':') != std::string::npos;
      if (has_colon != sparse) throw ParseError("cannot mix dense and degree:mass entries", pos);
      std::size_t k = i - 1;
      double mass = 0.0;
      if (sparse) {
        auto colon = t.find(':');
        k = detail::parse_count(t.substr(0, colon), pos);
        mass = detail::parse_number(t.substr(colon + 1), pos);
      } else {
        mass = detail::parse_number(t, pos);
      }
      if (mass < 0.0) throw ParseError("negative probability", pos);
      if (k >= p.size()) p.resize(k + 1, 0.0);
      p[k] += mass;
    }
    double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-6) throw ParseError("probabilities sum to " + std::to_string(total), tok.size());
    for (double& x : p) x /= total;
    return DegreeDistribution::from_pmf(std::move(p));
  }
  throw ParseError("unknown distribution kind '" + kind + "'", 1);
}

}  // namespace mmatch
