#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fjlab/decay.hpp"
#include "fjlab/distributions.hpp"
#include "fjlab/errors.hpp"
#include "fjlab/power_series.hpp"
#include "fjlab/rate_models.hpp"
#include "fjlab/strategies.hpp"
#include "fjlab/system.hpp"

namespace fjlab {

namespace detail {

inline void require_sigma(double sigma) {
  if (!(sigma >= 0.0)) throw RangeError("tail threshold must be >= 0, got " + std::to_string(sigma));
}

// Chernoff tail of one service time against a fixed threshold:
// inf_t mgf(t) e^{-t sigma}. Used for servers whose queue is always
// empty (infinite decay rate) but whose own task still bounds the
// response. The log objective is convex, so golden-section works.
inline double chernoff_tail(const Distribution& dist, double sigma) {
  auto objective = [&](double t) -> double {
    try {
      return std::log(dist.mgf(t)) - t * sigma;
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  double lo = 0.0;
  double hi = 1.0;
  double sup = dist.mgf_domain_sup();
  if (std::isfinite(sup)) {
    hi = sup * (1.0 - 1e-12);
  } else {
    while (hi < 1e12 && objective(2.0 * hi) < objective(hi)) hi *= 2.0;
    hi *= 2.0;
  }
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c), fd = objective(d);
  for (int it = 0; it < 200; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  double best = std::min(std::min(fc, fd), 0.0);  // t -> 0 always yields log 1
  return std::exp(best);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// General heterogeneous bounds: one transform root per server, summed.
// Servers with infinite decay rate contribute nothing to the waiting tail;
// for the response tail a server with an always-empty queue still
// contributes its own task's Chernoff term, and a server that never
// receives work contributes nothing.
// ---------------------------------------------------------------------------

inline double general_waiting_bound(const DecayRates& rates, double sigma) {
  detail::require_sigma(sigma);
  double total = 0.0;
  for (double r : rates.per_server) {
    if (std::isinf(r)) {
      total += sigma > 0.0 ? 0.0 : 1.0;
    } else {
      total += std::exp(-r * sigma);
    }
  }
  return total;
}

inline double general_waiting_bound(const FJSystem& system, double sigma) {
  return general_waiting_bound(decay_rates(system), sigma);
}

inline double general_response_bound(const FJSystem& system, const DecayRates& rates, double sigma) {
  detail::require_sigma(sigma);
  double total = 0.0;
  for (std::size_t n = 0; n < system.servers().size(); ++n) {
    const ServerSpec& server = system.servers()[n];
    double r = rates.per_server[n];
    if (server.select_probability == 0.0 || server.service.mean() == 0.0) {
      total += sigma > 0.0 ? 0.0 : 1.0;
      continue;
    }
    if (std::isinf(r)) {
      total += detail::chernoff_tail(server.service, sigma);
      continue;
    }
    // Prefactor uses the unthinned service transform: the tagged job's
    // own task is counted in full.
    total += server.service.mgf(r) * std::exp(-r * sigma);
  }
  return total;
}

inline double general_response_bound(const FJSystem& system, double sigma) {
  return general_response_bound(system, decay_rates(system), sigma);
}

// ---------------------------------------------------------------------------
// Scaled homogeneous bounds: exponential servers of a common rate, a
// random server count S, and work division by S^phi. Everything reduces
// to the strategy moments E[S^r e^{-c S^phi}].
// ---------------------------------------------------------------------------

namespace detail {

inline void require_scaled_stability(double service_rate, double arrival_rate, const Strategy& strategy,
                                     double phi) {
  double s_min = static_cast<double>(strategy.min_support());
  if (!(std::pow(s_min, phi) * service_rate > arrival_rate)) {
    throw StabilityError("scaled system unstable: smallest server count " + std::to_string(strategy.min_support()) +
                         " gives effective rate " + std::to_string(std::pow(s_min, phi) * service_rate) +
                         " <= arrival rate " + std::to_string(arrival_rate));
  }
}

inline double prefactor_times(double log_prefactor, double moment) {
  if (moment <= 0.0) return 0.0;
  double direct = std::exp(log_prefactor) * moment;
  if (std::isfinite(direct)) return direct;
  return std::exp(log_prefactor + std::log(moment));
}

}  // namespace detail

inline double scaled_waiting_bound(double service_rate, double arrival_rate, const Strategy& strategy, double phi,
                                   double sigma) {
  detail::require_sigma(sigma);
  detail::require_scaled_stability(service_rate, arrival_rate, strategy, phi);
  double moment = strategy.exp_moment_partial(service_rate * sigma, phi, 1);
  return detail::prefactor_times(arrival_rate * sigma, moment);
}

inline double scaled_response_bound(double service_rate, double arrival_rate, const Strategy& strategy, double phi,
                                    double sigma) {
  detail::require_sigma(sigma);
  detail::require_scaled_stability(service_rate, arrival_rate, strategy, phi);
  double utilization = arrival_rate / service_rate;
  double moment = strategy.exp_moment_partial(service_rate * sigma, phi, 2);
  return detail::prefactor_times(arrival_rate * sigma - std::log(utilization), moment);
}

// ---------------------------------------------------------------------------
// Untruncated power-series strategies (proportional scaling, phi = 1):
// the moments become generating-function derivatives at kappa e^{-rate sigma}.
// ---------------------------------------------------------------------------

inline double power_series_waiting_bound(double kappa, const PowerSeriesFamily& family, double service_rate,
                                         double arrival_rate, double sigma) {
  detail::require_sigma(sigma);
  if (!(service_rate > arrival_rate)) {
    throw StabilityError("power-series system unstable at a single server: service rate " +
                         std::to_string(service_rate) + " <= arrival rate " + std::to_string(arrival_rate));
  }
  double normal = family.zeta(kappa);
  double y = kappa * std::exp(-service_rate * sigma);
  double moment = y * family.zeta_prime(y) / normal;
  return detail::prefactor_times(arrival_rate * sigma, moment);
}

inline double power_series_response_bound(double kappa, const PowerSeriesFamily& family, double service_rate,
                                          double arrival_rate, double sigma) {
  detail::require_sigma(sigma);
  if (!(service_rate > arrival_rate)) {
    throw StabilityError("power-series system unstable at a single server: service rate " +
                         std::to_string(service_rate) + " <= arrival rate " + std::to_string(arrival_rate));
  }
  double normal = family.zeta(kappa);
  double y = kappa * std::exp(-service_rate * sigma);
  double moment = (y * y * family.zeta_second(y) + y * family.zeta_prime(y)) / normal;
  return detail::prefactor_times(arrival_rate * sigma - std::log(arrival_rate / service_rate), moment);
}

// ---------------------------------------------------------------------------
// Hierarchical rates: server rates drawn once from a model, jobs forked
// to S servers with proportional or partial scaling. The conditional
// tail is governed by the minimum drawn rate.
// ---------------------------------------------------------------------------

struct HeteroBounds {
  double waiting = 0.0;
  double response = 0.0;
};

namespace detail {

template <class MinLaplace, class RateSum>
HeteroBounds hetero_bounds_impl(const Strategy& strategy, double arrival_rate, double phi, double sigma,
                                MinLaplace&& min_laplace, RateSum&& rate_sum) {
  require_sigma(sigma);
  double waiting_moment = 0.0;
  double response_moment = 0.0;
  for (int s = 1; s <= strategy.pool_size(); ++s) {
    double w = strategy.masses()[static_cast<std::size_t>(s - 1)];
    if (w == 0.0) continue;
    double speedup = std::pow(static_cast<double>(s), phi);
    double c = sigma * speedup;
    waiting_moment += w * s * min_laplace(s, c);
    response_moment += w * speedup * rate_sum(s, c);
  }
  HeteroBounds out;
  out.waiting = prefactor_times(arrival_rate * sigma, waiting_moment);
  out.response = prefactor_times(arrival_rate * sigma - std::log(arrival_rate), response_moment);
  return out;
}

}  // namespace detail

inline HeteroBounds hetero_bounds(const Strategy& strategy, const HierarchicalModel& model, double arrival_rate,
                                  double phi, double sigma) {
  if (const auto* trunc = std::get_if<TruncatedExpModel>(&model)) {
    if (std::fabs(trunc->arrival_rate() - arrival_rate) > 1e-12 * std::max(1.0, arrival_rate)) {
      throw ConfigError("hierarchical truncation point " + std::to_string(trunc->arrival_rate()) +
                        " disagrees with arrival rate " + std::to_string(arrival_rate));
    }
  }
  if (!(min_possible_rate(model) > arrival_rate) &&
      !std::holds_alternative<TruncatedExpModel>(model)) {
    throw StabilityError("hierarchical rate model can draw rate " + std::to_string(min_possible_rate(model)) +
                         " <= arrival rate " + std::to_string(arrival_rate));
  }
  return detail::hetero_bounds_impl(
      strategy, arrival_rate, phi, sigma,
      [&](int s, double c) { return std::visit([&](const auto& m) { return m.min_rate_laplace(s, c); }, model); },
      [&](int s, double c) { return std::visit([&](const auto& m) { return m.rate_sum_weighted(s, c); }, model); });
}

// Fixed heterogeneous rate list: a job on s servers runs on the first s
// entries. rates must cover the strategy's pool and each entry must
// exceed the arrival rate.
inline HeteroBounds hetero_bounds(const Strategy& strategy, std::span<const double> rates, double arrival_rate,
                                  double phi, double sigma) {
  if (static_cast<int>(rates.size()) < strategy.pool_size()) {
    throw RangeError("rate list covers " + std::to_string(rates.size()) + " servers, strategy needs " +
                     std::to_string(strategy.pool_size()));
  }
  for (std::size_t n = 0; n < rates.size(); ++n) {
    if (!(rates[n] > arrival_rate)) {
      throw StabilityError("server " + std::to_string(n + 1) + " rate " + std::to_string(rates[n]) +
                           " <= arrival rate " + std::to_string(arrival_rate));
    }
  }
  std::vector<double> prefix_min(rates.size()), prefix_sum(rates.size());
  double mn = std::numeric_limits<double>::infinity(), sum = 0.0;
  for (std::size_t n = 0; n < rates.size(); ++n) {
    mn = std::min(mn, rates[n]);
    sum += rates[n];
    prefix_min[n] = mn;
    prefix_sum[n] = sum;
  }
  return detail::hetero_bounds_impl(
      strategy, arrival_rate, phi, sigma,
      [&](int s, double c) { return std::exp(-c * prefix_min[static_cast<std::size_t>(s - 1)]); },
      [&](int s, double c) {
        return prefix_sum[static_cast<std::size_t>(s - 1)] * std::exp(-c * prefix_min[static_cast<std::size_t>(s - 1)]);
      });
}

// Proportional scaling (phi = 1) with a binomial strategy admits closed
// forms for the hierarchical waiting bounds; both reduce to the plain
// scaled bound when the model degenerates.
inline double two_class_waiting_bound(int pool, double p, const TwoClassModel& model, double arrival_rate,
                                      double sigma) {
  detail::require_sigma(sigma);
  if (!(model.min_possible_rate() > arrival_rate)) {
    throw StabilityError("two-class slow rate " + std::to_string(model.slow_rate()) + " <= arrival rate " +
                         std::to_string(arrival_rate));
  }
  Strategy::binomial(pool, p);  // validates pool and p
  const double n = static_cast<double>(pool);
  const double q = 1.0 - p;
  const double norm = p == 1.0 ? 1.0 : -std::expm1(pool * std::log1p(-p));
  const double pi_slow = model.slow_probability();
  const double survivors = 1.0 - pi_slow;
  const double x1 = std::exp(-sigma * model.slow_rate());
  const double x2 = std::exp(-sigma * model.fast_rate());
  const double a = p * x1 + q;
  const double b = p * survivors * x1 + q;
  // The direct form b1 - survivors*(c1 - c2) cancels almost completely when
  // slow_probability is near zero; expanding a^(n-1) - b^(n-1) through its
  // geometric cofactor keeps every term nonnegative.
  double cofactor = 0.0;
  double bpow = 1.0;
  for (int k = 0; k + 1 < pool; ++k) {
    cofactor = a * cofactor + bpow;
    bpow *= b;
  }
  const double c1 = x1 * std::pow(b, n - 1.0);
  const double c2 = x2 * std::pow(p * survivors * x2 + q, n - 1.0);
  double moment = (n * p / norm) * (p * pi_slow * x1 * x1 * cofactor + pi_slow * c1 + survivors * c2);
  return detail::prefactor_times(arrival_rate * sigma, moment);
}

inline double hierarchical_waiting_bound(int pool, double p, const TruncatedExpModel& model, double sigma) {
  detail::require_sigma(sigma);
  Strategy::binomial(pool, p);
  const double n = static_cast<double>(pool);
  const double q = 1.0 - p;
  const double norm = p == 1.0 ? 1.0 : -std::expm1(pool * std::log1p(-p));
  const double x = std::exp(-sigma * model.arrival_rate());
  return n * p * model.hyper_rate() / (norm * (model.hyper_rate() + sigma)) * std::pow(p * x + q, n - 1.0);
}

// ---------------------------------------------------------------------------
// Bound curves: an evaluator plus the metadata the CLI writes next to it.
// ---------------------------------------------------------------------------

struct TailBoundCurve {
  std::string id;                        // e.g. "general-waiting"
  double decay_rate = 0.0;               // asymptotic exponential rate (0 when sub-exponential)
  std::function<double(double)> value;   // sigma -> bound
};

inline std::vector<TailBoundCurve> general_curves(const FJSystem& system) {
  DecayRates rates = decay_rates(system);
  std::vector<TailBoundCurve> out;
  out.push_back({"general-waiting", rates.min_rate,
                 [rates](double sigma) { return general_waiting_bound(rates, sigma); }});
  out.push_back({"general-response", rates.min_rate,
                 [system, rates](double sigma) { return general_response_bound(system, rates, sigma); }});
  return out;
}

inline std::vector<TailBoundCurve> scaled_curves(double service_rate, double arrival_rate, const Strategy& strategy,
                                                 double phi) {
  detail::require_scaled_stability(service_rate, arrival_rate, strategy, phi);
  double s_min = static_cast<double>(strategy.min_support());
  double decay = std::pow(s_min, phi) * service_rate - arrival_rate;
  std::vector<TailBoundCurve> out;
  out.push_back({"scaled-waiting", decay, [=](double sigma) {
                   return scaled_waiting_bound(service_rate, arrival_rate, strategy, phi, sigma);
                 }});
  out.push_back({"scaled-response", decay, [=](double sigma) {
                   return scaled_response_bound(service_rate, arrival_rate, strategy, phi, sigma);
                 }});
  return out;
}

inline std::vector<TailBoundCurve> hierarchical_curves(const Strategy& strategy, const HierarchicalModel& model,
                                                       double arrival_rate, double phi) {
  double s_min = std::pow(static_cast<double>(strategy.min_support()), phi);
  double decay = 0.0;
  if (const auto* two = std::get_if<TwoClassModel>(&model)) {
    decay = s_min * two->min_possible_rate() - arrival_rate;
  }
  std::vector<TailBoundCurve> out;
  out.push_back({"hierarchical-waiting", decay, [=](double sigma) {
                   return hetero_bounds(strategy, model, arrival_rate, phi, sigma).waiting;
                 }});
  out.push_back({"hierarchical-response", decay, [=](double sigma) {
                   return hetero_bounds(strategy, model, arrival_rate, phi, sigma).response;
                 }});
  return out;
}

}  // namespace fjlab
