#pragma once

#include <cmath>
#include <vector>

#include "mmatch/errors.hpp"

namespace mmatch {

// Load threshold of k-choice cuckoo hashing: floor(alpha m) items, each with
// k uniformly chosen locations among m. Items are type a (degree k), the
// location degrees are Poisson(k alpha).

namespace detail {

inline void require_cuckoo_k(int k) {
  if (k < 3) throw UnsupportedParameter("cuckoo threshold is only defined here for k >= 3");
}

/// z (1 - e^-z) / (1 - e^-z - z e^-z); increasing on (0, inf) from 2.
inline double cuckoo_ratio(double z) {
  const double one_minus = -std::expm1(-z);
  return z * one_minus / (one_minus - z * std::exp(-z));
}

}  // namespace detail

struct CuckooThreshold {
  double xi;
  double alpha_c;
};

inline double cuckoo_alpha_from_xi(int k, double xi) {
  return xi / (static_cast<double>(k) * std::pow(-std::expm1(-xi), k - 1));
}

/// Solves k = xi (1 - e^-xi) / (1 - e^-xi - xi e^-xi) by bisection.
inline CuckooThreshold cuckoo_threshold(int k, double tol = 1e-13) {
  detail::require_cuckoo_k(k);
  double lo = 1e-3, hi = static_cast<double>(k) + 1.0;
  while (detail::cuckoo_ratio(hi) < k) hi *= 2;
  while (hi - lo > tol * std::max(1.0, hi)) {
    double mid = 0.5 * (lo + hi);
    if (detail::cuckoo_ratio(mid) < k) lo = mid;
    else hi = mid;
  }
  double xi = 0.5 * (lo + hi);
  return {xi, cuckoo_alpha_from_xi(k, xi)};
}

/// Same root by the secant method; an independent cross-check of
/// `cuckoo_threshold`.
inline CuckooThreshold cuckoo_threshold_secant(int k, double tol = 1e-13) {
  detail::require_cuckoo_k(k);
  auto f = [k](double z) { return detail::cuckoo_ratio(z) - k; };
  double x0 = static_cast<double>(k) - 1.0, x1 = static_cast<double>(k);
  double f0 = f(x0), f1 = f(x1);
  for (int it = 0; it < 200 && std::abs(x1 - x0) > tol; ++it) {
    if (f1 == f0) break;
    double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (x2 <= 0.0) x2 = 0.5 * x1;
    x0 = x1, f0 = f1;
    x1 = x2, f1 = f(x1);
  }
  return {x1, cuckoo_alpha_from_xi(k, x1)};
}

/// Largest x in [0,1] with x = (1 - e^{-k alpha x})^{k-1}, found by a
/// descending grid scan and bisection. Returns 0 when only the trivial
/// root exists.
inline double cuckoo_largest_root(int k, double alpha, std::size_t grid = 10'000) {
  auto r = [&](double x) { return std::pow(-std::expm1(-k * alpha * x), k - 1) - x; };
  // r(1) <= 0 always; scan down for the first point where r turns positive.
  double prev_x = 1.0, prev_r = r(1.0);
  if (prev_r == 0.0) return 1.0;
  for (std::size_t i = grid; i-- > 0;) {
    double x = static_cast<double>(i) / static_cast<double>(grid);
    if (x == 0.0) break;
    double rx = r(x);
    if (rx >= 0.0) {
      if (rx == 0.0) return x;
      double lo = x, hi = prev_x;
      while (hi - lo > 1e-15) {
        double mid = 0.5 * (lo + hi);
        if (r(mid) >= 0.0) lo = mid;
        else hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev_x = x, prev_r = rx;
  }
  return 0.0;
}

struct CuckooMatched {
  double fraction;  ///< limit of nu / #items
  double x_star;
  double xi_star;
  bool above_threshold;
};

/// Limit of the fraction of items that can be placed at load alpha.
inline CuckooMatched cuckoo_matched_fraction(int k, double alpha) {
  detail::require_cuckoo_k(k);
  if (!(alpha > 0.0)) throw InvalidParameter("load alpha must be > 0");
  const auto th = cuckoo_threshold(k);
  const double x = cuckoo_largest_root(k, alpha);
  const double xi = k * alpha * x;
  if (alpha <= th.alpha_c) return {1.0, x, xi, false};
  const double e = std::exp(-xi);
  const double frac = 1.0 - (e + xi * e + xi / k * (1.0 - e) - 1.0) / alpha;
  return {std::min(1.0, frac), x, xi, true};
}

}  // namespace mmatch
