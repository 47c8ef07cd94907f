#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fjlab/bounds.hpp"
#include "fjlab/errors.hpp"
#include "fjlab/strategies.hpp"

namespace fjlab {

enum class BoundObjective { waiting, response };

namespace detail {

inline double scaled_bound_value(double service_rate, double arrival_rate, const Strategy& strategy, double phi,
                                 double sigma, BoundObjective objective) {
  return objective == BoundObjective::waiting
             ? scaled_waiting_bound(service_rate, arrival_rate, strategy, phi, sigma)
             : scaled_response_bound(service_rate, arrival_rate, strategy, phi, sigma);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Optimum over all pmfs on {1..N}. The bound is linear in the pmf, so the
// minimum sits at a vertex of the simplex: a deterministic server count.
// Vertices whose conditional system is unstable are infeasible.
// ---------------------------------------------------------------------------

struct PmfOptimum {
  Strategy strategy;
  int servers = 0;
  double value = 0.0;
};

inline PmfOptimum optimize_pmf(int pool, double service_rate, double arrival_rate, double phi, double sigma,
                               BoundObjective objective = BoundObjective::waiting) {
  if (pool < 1) throw RangeError("pool size must be >= 1");
  double best_value = std::numeric_limits<double>::infinity();
  int best_s = 0;
  for (int s = 1; s <= pool; ++s) {
    Strategy vertex = Strategy::deterministic(s, pool);
    double value;
    try {
      value = detail::scaled_bound_value(service_rate, arrival_rate, vertex, phi, sigma, objective);
    } catch (const StabilityError&) {
      continue;
    }
    if (value < best_value) {  // strict: ties resolve to the smaller count
      best_value = value;
      best_s = s;
    }
  }
  if (best_s == 0) {
    throw StabilityError("no deterministic server count in {1.." + std::to_string(pool) +
                         "} yields a stable system");
  }
  return {Strategy::deterministic(best_s, pool), best_s, best_value};
}

// ---------------------------------------------------------------------------
// Monotonicity certificate for the binomial-p waiting bound under
// proportional scaling. With eps = 1 - e^{-rate * sigma} and q = 1 - p,
// the bound's derivative in q has the sign of
//   Q(q) = sum_{k=0}^{N-2} (N eps - 1 - k) q^k.
// The coefficients decrease strictly in k, so Q has at most one positive
// root; positive values at q = 0 and q = 1 then certify Q > 0 on the
// whole interval, i.e. the bound only degrades as p moves away from 1.
// ---------------------------------------------------------------------------

struct MonotonicityReport {
  int sign_changes = 0;
  double at_zero = 0.0;
  double at_one = 0.0;
  bool certified = false;
};

inline MonotonicityReport monotonicity_certificate(int pool, double eps) {
  if (pool < 1) throw RangeError("pool size must be >= 1");
  if (!(eps >= 0.0 && eps < 1.0)) throw RangeError("eps must lie in [0,1), got " + std::to_string(eps));
  MonotonicityReport report;
  if (pool == 1) return report;  // the pmf has a single point; nothing to certify
  const double n = static_cast<double>(pool);
  int last_sign = 0;
  for (int k = 0; k <= pool - 2; ++k) {
    double coeff = n * eps - 1.0 - k;
    int sign = coeff > 0.0 ? 1 : (coeff < 0.0 ? -1 : 0);
    if (sign != 0) {
      if (last_sign != 0 && sign != last_sign) ++report.sign_changes;
      last_sign = sign;
    }
    report.at_zero = k == 0 ? coeff : report.at_zero;
    report.at_one += coeff;
  }
  report.certified = report.sign_changes <= 1 && report.at_zero > 0.0 && report.at_one > 0.0;
  return report;
}

// ---------------------------------------------------------------------------
// Best binomial selection probability at a fixed threshold: coarse grid,
// then golden-section refinement around the best cell. When the
// analytic certificate applies (proportional scaling, waiting objective,
// eps > 1/2) the boundary p = 1 is returned exactly.
// ---------------------------------------------------------------------------

struct BinomialOptimum {
  double p = 1.0;
  double value = 0.0;
  bool certified_boundary = false;
};

inline BinomialOptimum optimize_binomial_p(int pool, double service_rate, double arrival_rate, double phi,
                                           double sigma, double grid_resolution = 1e-3,
                                           BoundObjective objective = BoundObjective::waiting) {
  if (!(grid_resolution > 0.0 && grid_resolution <= 0.5)) {
    throw RangeError("grid resolution must lie in (0, 0.5]");
  }
  auto value_at = [&](double p) {
    return detail::scaled_bound_value(service_rate, arrival_rate, Strategy::binomial(pool, p), phi, sigma,
                                      objective);
  };

  if (objective == BoundObjective::waiting && phi == 1.0) {
    double eps = -std::expm1(-service_rate * sigma);
    MonotonicityReport report = monotonicity_certificate(pool, eps);
    if (report.certified) {
      return {1.0, value_at(1.0), true};
    }
  }

  double best_p = 1.0;
  double best_value = std::numeric_limits<double>::infinity();
  bool any = false;
  int cells = static_cast<int>(std::ceil(1.0 / grid_resolution));
  for (int i = 1; i <= cells; ++i) {
    double p = std::min(1.0, i * grid_resolution);
    double value;
    try {
      value = value_at(p);
    } catch (const StabilityError&) {
      continue;
    }
    if (!any || value < best_value) {
      any = true;
      best_value = value;
      best_p = p;
    }
  }
  if (!any) throw StabilityError("no binomial selection probability yields a stable system");

  double lo = std::max(grid_resolution * 0.5, best_p - grid_resolution);
  double hi = std::min(1.0, best_p + grid_resolution);
  constexpr double inv_phi = 0.6180339887498949;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  auto safe_value = [&](double p) {
    try {
      return value_at(p);
    } catch (const StabilityError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  double fc = safe_value(c), fd = safe_value(d);
  for (int it = 0; it < 120; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = safe_value(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = safe_value(d);
    }
  }
  double p_refined = 0.5 * (lo + hi);
  double v_refined = safe_value(p_refined);
  if (v_refined < best_value) {
    best_value = v_refined;
    best_p = p_refined;
  }
  return {best_p, best_value, false};
}

// ---------------------------------------------------------------------------
// Largest binomial p whose mean server count stays within a budget.
// E[S] = N p / (1 - (1-p)^N) increases from 1 (p -> 0) to N (p = 1).
// ---------------------------------------------------------------------------

struct BudgetOptimum {
  Strategy strategy;
  double p = 0.0;
  double expected_servers = 0.0;
};

inline BudgetOptimum optimize_budget(int pool, double budget) {
  if (pool < 1) throw RangeError("pool size must be >= 1");
  if (!(budget >= 1.0)) {
    throw InfeasibleError("every strategy uses at least one server on average; budget " + std::to_string(budget) +
                          " < 1 is infeasible");
  }
  if (budget >= static_cast<double>(pool)) {
    Strategy all = Strategy::binomial(pool, 1.0);
    return {all, 1.0, all.expected_servers()};
  }
  if (budget == 1.0) {
    // Attained only in the p -> 0 limit, which degenerates to always
    // using exactly one server.
    Strategy one = Strategy::deterministic(1, pool);
    return {one, 0.0, 1.0};
  }
  double lo = 0.0, hi = 1.0;  // E[S] -> 1 as p -> 0, so lo is feasible
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (Strategy::binomial(pool, mid).expected_servers() <= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  Strategy best = Strategy::binomial(pool, lo);
  return {best, lo, best.expected_servers()};
}

// ---------------------------------------------------------------------------
// Threshold at which a decreasing bound curve first drops to a target
// tail probability (e.g. 1e-3 for a bound-implied 99.9th percentile).
// ---------------------------------------------------------------------------

inline double invert_bound(const std::function<double(double)>& bound, double tail_probability) {
  if (!(tail_probability > 0.0 && tail_probability < 1.0)) {
    throw RangeError("tail probability must lie in (0,1), got " + std::to_string(tail_probability));
  }
  if (bound(0.0) <= tail_probability) return 0.0;
  double hi = 1.0;
  while (bound(hi) > tail_probability) {
    hi *= 2.0;
    if (hi > 1e12) {
      throw InfeasibleError("bound does not reach tail probability " + std::to_string(tail_probability) +
                            " below sigma = 1e12");
    }
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (bound(mid) > tail_probability) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace fjlab
