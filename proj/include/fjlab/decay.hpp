#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fjlab/distributions.hpp"
#include "fjlab/errors.hpp"
#include "fjlab/system.hpp"

namespace fjlab {

// Exponential decay rates of the waiting-time tail, one per server, plus
// the minimum across servers which governs the fork-join tail. Servers
// that never receive work carry +infinity.
struct DecayRates {
  std::vector<double> per_server;
  double min_rate = std::numeric_limits<double>::infinity();
};

namespace detail {

inline double residual_or_nan(double a, double b) {
  double f = a * b - 1.0;
  return f;
}

}  // namespace detail

// Solves alpha(x) * beta(x) = 1 for the unique positive root, where alpha
// is a service mgf (increasing, alpha(0) = 1) and beta an inter-arrival
// Laplace transform (decreasing, beta(0) = 1). Under stability the
// product dips below 1 right of the origin and crosses back up exactly
// once. domain_sup bounds the search when alpha has a finite domain.
//
// alpha may throw DomainError near its boundary; that is treated as
// "beyond the root". Returns x with |alpha(x)*beta(x) - 1| <= 1e-10
// unless the root is too ill-conditioned for that, in which case the
// bisection has still converged to machine precision.
template <class Mgf, class Laplace>
double solve_decay_rate(Mgf&& alpha, Laplace&& beta, double domain_sup = std::numeric_limits<double>::infinity()) {
  auto residual = [&](double x) -> double {
    double a;
    try {
      a = alpha(x);
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
    if (std::isinf(a)) return std::numeric_limits<double>::infinity();
    return detail::residual_or_nan(a, beta(x));
  };

  double hi;
  if (std::isfinite(domain_sup)) {
    hi = domain_sup * (1.0 - 1e-12);
    int shrink = 0;
    while (!(residual(hi) > 0.0)) {
      hi *= 0.5;
      if (++shrink > 60) throw NoRootError("transform equation has no root below the mgf domain boundary");
    }
  } else {
    hi = 1.0;
    while (!(residual(hi) > 0.0)) {
      hi *= 2.0;
      if (hi > 1e154) throw NoRootError("transform equation has no positive root (searched up to 1e154)");
    }
  }

  // x = 0 is always the trivial root; under stability the residual is
  // negative immediately to its right, so [0, hi] brackets the positive
  // root for bisection that only ever evaluates interior points.
  double lo = 0.0;
  for (int it = 0; it < 240; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double f = residual(mid);
    if (f > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace detail {

inline double essential_sup(const Distribution& d) {
  switch (d.kind()) {
    case DistKind::exponential: return std::numeric_limits<double>::infinity();
    case DistKind::uniform_interval: return d.upper();
    case DistKind::deterministic: return d.value();
  }
  return std::numeric_limits<double>::infinity();
}

inline double essential_inf(const Distribution& d) {
  switch (d.kind()) {
    case DistKind::exponential: return 0.0;
    case DistKind::uniform_interval: return d.lower();
    case DistKind::deterministic: return d.value();
  }
  return 0.0;
}

}  // namespace detail

// Decay rate contributed by one (transformed) server against the arrival
// process. +infinity when the server receives no work, or when its task
// can never exceed an inter-arrival gap (the queue stays empty and the
// tail bound may use an arbitrarily large rate).
inline double server_decay_rate(const TransformedDistribution& service, const Distribution& arrival) {
  if (service.thin_probability() == 0.0 || service.base().mean() == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  if (detail::essential_sup(service.base()) / service.scale_divisor() <= detail::essential_inf(arrival)) {
    return std::numeric_limits<double>::infinity();
  }
  return solve_decay_rate([&](double x) { return service.mgf(x); },
                          [&](double x) { return arrival.laplace(x); }, service.mgf_domain_sup());
}

// Per-server decay rates for a fork-join system (no strategy scaling:
// every server sees its unscaled, possibly thinned, service times).
inline DecayRates decay_rates(const FJSystem& system) {
  const double arrival_mean = system.arrival().mean();
  DecayRates out;
  out.per_server.reserve(system.servers().size());
  for (std::size_t n = 0; n < system.servers().size(); ++n) {
    const ServerSpec& s = system.servers()[n];
    double load = s.select_probability * s.service.mean();
    if (load >= arrival_mean) {
      throw StabilityError("server " + std::to_string(n + 1) + " violates stability: mean work per arrival " +
                           std::to_string(load) + " >= mean inter-arrival " + std::to_string(arrival_mean));
    }
    out.per_server.push_back(
        server_decay_rate(TransformedDistribution::thinned(s.service, s.select_probability), system.arrival()));
  }
  out.min_rate = std::numeric_limits<double>::infinity();
  for (double r : out.per_server) out.min_rate = std::min(out.min_rate, r);
  return out;
}

}  // namespace fjlab
