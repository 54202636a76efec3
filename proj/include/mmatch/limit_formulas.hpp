#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "mmatch/degree_distribution.hpp"
#include "mmatch/errors.hpp"

namespace mmatch {

// Closed-form limits of nu(G_n)/|V_n| for graph sequences converging to
// unimodular (two-type) Galton-Watson trees.
//
// Single type, degree law pi with generating function phi:
//   F(t) = t phi'(1-t) + phi(1-t) + phi(1 - phi'(1-t)/phi'(1)) - 1
//   gamma = (1 - max_[0,1] F) / 2
// Two types a/b:
//   F^a(t) = phi_a(1 - phi_b'(1-t)/phi_b'(1))
//            - (phi_a'(1)/phi_b'(1)) (1 - phi_b(1-t) - t phi_b'(1-t))
//   gamma  = lambda (1 - max F^a),  lambda = phi_b'(1) / (phi_a'(1) + phi_b'(1))
// and F^b is F^a with the roles swapped.

namespace detail {

inline void require_positive_mean(const DegreeDistribution& d) {
  if (!(d.mean() > 0.0)) throw InvalidInput("degree law must have a positive mean");
}

/// Generating function of the size-biased law, phi'(s) / phi'(1).
inline double pgf_hat(const DegreeDistribution& d, double s) { return d.pgf_d1(s) / d.mean(); }

}  // namespace detail

inline double eval_F(const DegreeDistribution& d, double t) {
  detail::require_positive_mean(d);
  const double m = d.mean();
  const double d1 = d.pgf_d1(1.0 - t);
  return t * d1 + d.pgf(1.0 - t) + d.pgf(1.0 - d1 / m) - 1.0;
}

/// Residual of the stationarity condition phi'(1) t = phi'(1 - phi'(1-t)/phi'(1)).
inline double stationarity_residual(const DegreeDistribution& d, double t) {
  detail::require_positive_mean(d);
  return d.mean() * t - d.pgf_d1(1.0 - d.pgf_d1(1.0 - t) / d.mean());
}

/// F^a(t) for the pair (a, b). F^b(t) is `eval_F_two_type(b, a, t)`.
inline double eval_F_two_type(const DegreeDistribution& a, const DegreeDistribution& b, double t) {
  detail::require_positive_mean(a);
  detail::require_positive_mean(b);
  const double ma = a.mean(), mb = b.mean();
  return a.pgf(1.0 - b.pgf_d1(1.0 - t) / mb) - (ma / mb) * (1.0 - b.pgf(1.0 - t) - t * b.pgf_d1(1.0 - t));
}

struct TwoTypeF {
  double a;
  double b;
};

inline TwoTypeF eval_F_bipartite(const DegreeDistribution& da, const DegreeDistribution& db, double t) {
  return {eval_F_two_type(da, db, t), eval_F_two_type(db, da, t)};
}

/// g(x) = 1 - (1-x) phi'(x)/2 - phi(x)/2 - phi(1 - phi'(x)/phi'(1))/2,
/// which satisfies g(1-t) = (1 - F(t))/2.
inline double eval_g(const DegreeDistribution& d, double x) {
  detail::require_positive_mean(d);
  const double d1 = d.pgf_d1(x);
  return 1.0 - 0.5 * (1.0 - x) * d1 - 0.5 * d.pgf(x) - 0.5 * d.pgf(1.0 - d1 / d.mean());
}

/// Composed size-biased map x -> phi_a^(1 - phi_b^(1 - x)); its fixed points
/// are the stationary points of F^a.
inline double composed_map(const DegreeDistribution& a, const DegreeDistribution& b, double x) {
  return detail::pgf_hat(a, 1.0 - detail::pgf_hat(b, 1.0 - x));
}

struct Record {
  double location;
  double F;
  double residual;  ///< composed_map(location) - location
};

/// Historical records of F^a, in increasing location (and F) order, plus
/// every fixed point that was found (records or not).
struct RecordSet {
  std::vector<Record> records;
  std::vector<Record> fixed_points;
  std::vector<std::string> warnings;

  double last_location() const { return records.back().location; }
  double max_F() const { return records.back().F; }
};

struct RecordOptions {
  std::size_t grid_points = 10'000;
  double bisection_tol = 1e-12;
  /// |residual| below this on a grid point counts as an exact zero.
  double zero_tol = 1e-14;
  /// Record condition F(p) > F(q) is applied with this slack.
  double strict_tol = 1e-12;
};

/// Finds all fixed points of the composed map on [0,1] and keeps the
/// historical records of F^a among them.
///
/// Fixed points come from a uniform grid scan of the residual: sign changes
/// are refined by bisection, isolated grid zeros are kept as is, and runs of
/// zeros (a continuum of fixed points) contribute their leftmost point only.
/// A fixed point p is a record when F^a(p) exceeds F^a at every smaller
/// fixed point; F^a is monotone between consecutive fixed points, so this
/// is the same as exceeding F^a on all of [0, p).
inline RecordSet historical_records(const DegreeDistribution& da, const DegreeDistribution& db,
                                    const RecordOptions& opt = {}) {
  detail::require_positive_mean(da);
  detail::require_positive_mean(db);
  auto resid = [&](double x) { return composed_map(da, db, x) - x; };
  auto F = [&](double x) { return eval_F_two_type(da, db, x); };

  const std::size_t n = std::max<std::size_t>(opt.grid_points, 2);
  std::vector<double> xs(n + 1), rs(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    xs[i] = static_cast<double>(i) / static_cast<double>(n);
    rs[i] = resid(xs[i]);
  }
  auto is_zero = [&](double r) { return std::abs(r) <= opt.zero_tol; };

  std::vector<double> roots;
  for (std::size_t i = 0; i <= n; ++i) {
    if (is_zero(rs[i])) {
      if (i == 0 || !is_zero(rs[i - 1])) roots.push_back(xs[i]);
      continue;
    }
    if (i < n && !is_zero(rs[i + 1]) && (rs[i] < 0) != (rs[i + 1] < 0)) {
      double lo = xs[i], hi = xs[i + 1], rlo = rs[i];
      while (hi - lo > opt.bisection_tol) {
        double mid = 0.5 * (lo + hi);
        double rm = resid(mid);
        if (rm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((rm < 0) == (rlo < 0)) lo = mid, rlo = rm;
        else hi = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
  }
  // Tangential roots without a sign change: a grid-local minimum of |r|
  // that is nearly zero is refined by ternary search.
  for (std::size_t i = 1; i < n; ++i) {
    double a = std::abs(rs[i]);
    if (is_zero(rs[i]) || a > 1e-6 || a > std::abs(rs[i - 1]) || a > std::abs(rs[i + 1])) continue;
    if ((rs[i - 1] < 0) != (rs[i + 1] < 0)) continue;
    double lo = xs[i - 1], hi = xs[i + 1];
    for (int it = 0; it < 200 && hi - lo > opt.bisection_tol; ++it) {
      double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (std::abs(resid(m1)) < std::abs(resid(m2))) hi = m2;
      else lo = m1;
    }
    double x = 0.5 * (lo + hi);
    if (std::abs(resid(x)) <= 1e-10) roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(), [](double p, double q) { return std::abs(p - q) < 1e-9; }),
              roots.end());

  RecordSet out;
  double best = -std::numeric_limits<double>::infinity();
  for (double p : roots) {
    Record r{p, F(p), resid(p)};
    out.fixed_points.push_back(r);
    if (out.records.empty() || r.F > best + opt.strict_tol) {
      out.records.push_back(r);
      best = r.F;
    }
  }
  // Degenerate stationarity: F has a flat inflection at a fixed point.
  for (const Record& r : out.fixed_points) {
    const double h = 1e-6;
    double lo = std::max(0.0, r.location - h), hi = std::min(1.0, r.location + h);
    double slope_l = F(r.location) - F(lo), slope_r = F(hi) - F(r.location);
    if (slope_l > 0 && slope_r > 0 && r.location > 0 && r.location < 1)
      out.warnings.push_back("stationary inflection of F near " + std::to_string(r.location));
  }
  if (out.records.empty()) throw InvalidInput("no fixed point of the composed map found on [0,1]");
  return out;
}

/// Single-type records: the pair (d, d).
inline RecordSet historical_records(const DegreeDistribution& d, const RecordOptions& opt = {}) {
  return historical_records(d, d, opt);
}

/// Largest F^a over fixed points and both endpoints of [0,1].
struct Maximum {
  double value;
  double argmax;
};

inline Maximum max_F_two_type(const DegreeDistribution& da, const DegreeDistribution& db,
                              const RecordSet& rec) {
  Maximum best{eval_F_two_type(da, db, 0.0), 0.0};
  auto consider = [&](double x) {
    double v = eval_F_two_type(da, db, x);
    if (v > best.value) best = {v, x};
  };
  consider(1.0);
  for (const Record& r : rec.fixed_points) consider(r.location);
  return best;
}

struct GammaReport {
  double gamma;
  double max_F;
  double argmax;
  RecordSet records;
};

/// gamma for a unimodular Galton-Watson limit with degree law `d`.
inline GammaReport gamma_ugw(const DegreeDistribution& d, const RecordOptions& opt = {}) {
  if (d.mean() == 0.0) return {0.0, 1.0, 0.0, {}};  // edgeless limit
  auto rec = historical_records(d, d, opt);
  auto mx = max_F_two_type(d, d, rec);
  return {(1.0 - mx.value) / 2.0, mx.value, mx.argmax, std::move(rec)};
}

struct TwoTypeGammaReport {
  double gamma;            ///< lambda (1 - max F^a)
  double gamma_symmetric;  ///< (lambda (1 - max F^a) + (1 - lambda)(1 - max F^b)) / 2
  double lambda;
  Maximum max_Fa;
  Maximum max_Fb;
  RecordSet records_a;
  RecordSet records_b;

  /// Limit of nu / |V^a|, i.e. 1 - max F^a.
  double matched_fraction_a() const { return 1.0 - max_Fa.value; }
};

/// gamma (per vertex) for a unimodular two-type Galton-Watson limit.
inline TwoTypeGammaReport gamma_uhgw(const DegreeDistribution& da, const DegreeDistribution& db,
                                     const RecordOptions& opt = {}) {
  detail::require_positive_mean(da);
  detail::require_positive_mean(db);
  const double lambda = db.mean() / (da.mean() + db.mean());
  auto ra = historical_records(da, db, opt);
  auto rb = historical_records(db, da, opt);
  auto ma = max_F_two_type(da, db, ra);
  auto mb = max_F_two_type(db, da, rb);
  TwoTypeGammaReport r{lambda * (1.0 - ma.value),
                       (lambda * (1.0 - ma.value) + (1.0 - lambda) * (1.0 - mb.value)) / 2.0,
                       lambda,
                       ma,
                       mb,
                       std::move(ra),
                       std::move(rb)};
  return r;
}

/// Samples F (or F^a, F^b, g) on `points` equally spaced t in [0,1].
inline std::vector<std::pair<double, double>> sample_curve(const std::function<double(double)>& f,
                                                           std::size_t points) {
  if (points < 2) throw InvalidParameter("a curve needs at least 2 points");
  std::vector<std::pair<double, double>> out;
  out.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(points - 1);
    out.emplace_back(t, f(t));
  }
  return out;
}

}  // namespace mmatch
