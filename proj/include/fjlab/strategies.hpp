#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "fjlab/errors.hpp"
#include "fjlab/rng.hpp"

namespace fjlab {

enum class StrategyKind { deterministic, uniform, binomial, power_series, explicit_pmf };

namespace detail {

inline double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace detail

// Random server count S on {1, ..., N}: each job is forked to the first
// S servers, with S drawn from this distribution. The moment routines
// evaluate E[S^r e^{-aS}] and E[S^r e^{-c S^phi}], the building blocks of
// every strategy-averaged tail bound.
class Strategy {
 public:
  static Strategy deterministic(int servers, int pool = 0) {
    if (pool == 0) pool = servers;
    if (servers < 1 || servers > pool) {
      throw RangeError("deterministic server count must lie in {1..pool}, got " + std::to_string(servers) +
                       " with pool " + std::to_string(pool));
    }
    Strategy st(StrategyKind::deterministic, pool);
    st.fixed_ = servers;
    st.masses_.assign(static_cast<std::size_t>(pool), 0.0);
    st.masses_[static_cast<std::size_t>(servers - 1)] = 1.0;
    return st;
  }

  static Strategy uniform(int pool) {
    require_pool(pool);
    Strategy st(StrategyKind::uniform, pool);
    st.masses_.assign(static_cast<std::size_t>(pool), 1.0 / pool);
    return st;
  }

  // Binomial(pool, p) conditioned on at least one server.
  static Strategy binomial(int pool, double p) {
    require_pool(pool);
    if (!(p > 0.0 && p <= 1.0)) throw RangeError("binomial p must lie in (0,1], got " + std::to_string(p));
    Strategy st(StrategyKind::binomial, pool);
    st.p_ = p;
    st.masses_.assign(static_cast<std::size_t>(pool), 0.0);
    if (p == 1.0) {
      st.masses_.back() = 1.0;
    } else {
      double log_norm = std::log(-std::expm1(pool * std::log1p(-p)));
      for (int s = 1; s <= pool; ++s) {
        st.masses_[static_cast<std::size_t>(s - 1)] =
            std::exp(detail::log_choose(pool, s) + s * std::log(p) + (pool - s) * std::log1p(-p) - log_norm);
      }
    }
    return st;
  }

  // pmf(s) proportional to coefficients[s-1] * kappa^s, truncated at the
  // pool size. Coefficients beyond the pool are rejected rather than
  // silently dropped.
  static Strategy power_series(int pool, double kappa, std::vector<double> coefficients) {
    require_pool(pool);
    if (!(kappa > 0.0)) throw RangeError("power series kappa must be > 0, got " + std::to_string(kappa));
    if (coefficients.empty() || static_cast<int>(coefficients.size()) > pool) {
      throw RangeError("power series needs between 1 and pool coefficients, got " +
                       std::to_string(coefficients.size()));
    }
    Strategy st(StrategyKind::power_series, pool);
    st.kappa_ = kappa;
    st.coefficients_ = std::move(coefficients);
    st.coefficients_.resize(static_cast<std::size_t>(pool), 0.0);
    double total = 0.0;
    st.masses_.assign(static_cast<std::size_t>(pool), 0.0);
    for (int s = 1; s <= pool; ++s) {
      double c = st.coefficients_[static_cast<std::size_t>(s - 1)];
      if (!(c >= 0.0)) throw RangeError("power series coefficients must be >= 0");
      double w = c * std::pow(kappa, s);
      st.masses_[static_cast<std::size_t>(s - 1)] = w;
      total += w;
    }
    if (!(total > 0.0)) throw RangeError("power series pmf has no mass on {1..pool}");
    for (double& m : st.masses_) m /= total;
    return st;
  }

  static Strategy explicit_pmf(std::vector<double> weights) {
    if (weights.empty()) throw RangeError("explicit pmf needs at least one weight");
    Strategy st(StrategyKind::explicit_pmf, static_cast<int>(weights.size()));
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw RangeError("explicit pmf weights must be >= 0");
      total += w;
    }
    if (!(total > 0.0)) throw RangeError("explicit pmf has no mass");
    st.masses_ = std::move(weights);
    for (double& m : st.masses_) m /= total;
    return st;
  }

  StrategyKind kind() const noexcept { return kind_; }
  int pool_size() const noexcept { return pool_; }
  double parameter_p() const noexcept { return p_; }
  double parameter_kappa() const noexcept { return kappa_; }
  int fixed_servers() const noexcept { return fixed_; }
  const std::vector<double>& coefficients() const noexcept { return coefficients_; }

  const std::vector<double>& masses() const noexcept { return masses_; }

  double pmf(int s) const {
    if (s < 1 || s > pool_) {
      throw RangeError("pmf argument must lie in {1.." + std::to_string(pool_) + "}, got " + std::to_string(s));
    }
    return masses_[static_cast<std::size_t>(s - 1)];
  }

  int min_support() const noexcept {
    for (int s = 1; s <= pool_; ++s) {
      if (masses_[static_cast<std::size_t>(s - 1)] > 0.0) return s;
    }
    return pool_;
  }

  double expected_servers() const {
    switch (kind_) {
      case StrategyKind::binomial:
        if (p_ == 1.0) return static_cast<double>(pool_);
        return pool_ * p_ / -std::expm1(pool_ * std::log1p(-p_));
      case StrategyKind::uniform:
        return 0.5 * (pool_ + 1.0);
      case StrategyKind::deterministic:
        return static_cast<double>(fixed_);
      default:
        break;
    }
    double m = 0.0;
    for (int s = 1; s <= pool_; ++s) m += s * masses_[static_cast<std::size_t>(s - 1)];
    return m;
  }

  // E[S^r e^{-aS}] for r in {1, 2}, via the per-family closed forms.
  double exp_moment(double a, int order) const {
    if (order != 1 && order != 2) throw RangeError("exp_moment supports orders 1 and 2");
    if (!(a >= 0.0)) throw RangeError("exp_moment requires a >= 0, got " + std::to_string(a));
    switch (kind_) {
      case StrategyKind::binomial: return binomial_exp_moment(a, order);
      case StrategyKind::uniform: return uniform_exp_moment(a, order);
      case StrategyKind::power_series: return power_series_exp_moment(a, order);
      case StrategyKind::deterministic: {
        double s = static_cast<double>(fixed_);
        return std::pow(s, order) * std::exp(-a * s);
      }
      case StrategyKind::explicit_pmf: break;
    }
    return sum_exp_moment(a, order);
  }

  // E[S^r e^{-c S^phi}]. At phi = 1 this is exp_moment; elsewhere there
  // is no closed form and the support is summed directly.
  double exp_moment_partial(double c, double phi, int order) const {
    if (!(phi >= 0.0 && phi <= 1.0)) throw RangeError("scaling exponent must lie in [0,1]");
    if (!(c >= 0.0)) throw RangeError("exp_moment_partial requires c >= 0");
    if (order != 1 && order != 2) throw RangeError("exp_moment_partial supports orders 1 and 2");
    if (phi == 1.0) return exp_moment(c, order);
    double m = 0.0;
    for (int s = 1; s <= pool_; ++s) {
      double w = masses_[static_cast<std::size_t>(s - 1)];
      if (w == 0.0) continue;
      m += w * std::pow(static_cast<double>(s), order) * std::exp(-c * std::pow(static_cast<double>(s), phi));
    }
    return m;
  }

  int sample(Rng& rng) const {
    double u = rng.next_unit();
    double acc = 0.0;
    for (int s = 1; s < pool_; ++s) {
      acc += masses_[static_cast<std::size_t>(s - 1)];
      if (u < acc) return s;
    }
    return pool_;
  }

  friend bool operator==(const Strategy&, const Strategy&) = default;

 private:
  Strategy(StrategyKind kind, int pool) : kind_(kind), pool_(pool) {}

  static void require_pool(int pool) {
    if (pool < 1) throw RangeError("pool size must be >= 1, got " + std::to_string(pool));
  }

  double sum_exp_moment(double a, int order) const {
    double m = 0.0;
    for (int s = 1; s <= pool_; ++s) {
      double w = masses_[static_cast<std::size_t>(s - 1)];
      if (w == 0.0) continue;
      m += w * std::pow(static_cast<double>(s), order) * std::exp(-a * s);
    }
    return m;
  }

  double binomial_exp_moment(double a, int order) const {
    const double n = static_cast<double>(pool_);
    const double p = p_;
    const double q = 1.0 - p;
    const double norm = p == 1.0 ? 1.0 : -std::expm1(pool_ * std::log1p(-p));
    const double x = std::exp(-a);
    const double base = p * x + q;
    if (order == 1) return n * p * x * std::pow(base, n - 1.0) / norm;
    return n * p * x * (n * p * x + q) * std::pow(base, n - 2.0) / norm;
  }

  double uniform_exp_moment(double a, int order) const {
    const double n = static_cast<double>(pool_);
    if (a == 0.0) {
      return order == 1 ? 0.5 * (n + 1.0) : (n + 1.0) * (2.0 * n + 1.0) / 6.0;
    }
    if (a < 1e-2) return sum_exp_moment(a, order);  // closed form cancels as 1/a^2 here
    const double x = std::exp(-a);
    const double one_minus_x = -std::expm1(-a);
    const double head = -std::expm1(-(n + 1.0) * a);  // 1 - x^{n+1}
    const double xn = std::exp(-n * a);
    const double first = x / (n * one_minus_x) * (head / one_minus_x - (n + 1.0) * xn);
    if (order == 1) return first;
    // E[S(S-1)e^{-aS}], then add the first moment back.
    const double falling = x * x / (n * one_minus_x) *
                           (2.0 * head / (one_minus_x * one_minus_x) -
                            2.0 * (n + 1.0) * xn / one_minus_x - n * (n + 1.0) * std::exp(-(n - 1.0) * a));
    return falling + first;
  }

  // The truncated family is itself a finite power series, so the
  // generating-polynomial identities apply verbatim:
  //   E[S e^{-aS}]   = y g'(y) / g(kappa),   y = kappa e^{-a},
  //   E[S^2 e^{-aS}] = (y^2 g''(y) + y g'(y)) / g(kappa),
  // with g(t) = sum_s coeff_s t^s.
  double power_series_exp_moment(double a, int order) const {
    const double y = kappa_ * std::exp(-a);
    double g_kappa = 0.0;   // Horner for g(kappa)/kappa
    double d1 = 0.0;        // Horner for g'(y)
    double d2 = 0.0;        // Horner for y * g''(y)
    for (int s = pool_; s >= 1; --s) {
      double c = coefficients_[static_cast<std::size_t>(s - 1)];
      g_kappa = g_kappa * kappa_ + c;
      d1 = d1 * y + c * s;
      d2 = d2 * y + c * s * (s - 1.0);
    }
    g_kappa *= kappa_;
    const double first = y * d1 / g_kappa;
    if (order == 1) return first;
    return (y * d2 + y * d1) / g_kappa;
  }

  StrategyKind kind_;
  int pool_;
  double p_ = 0.0;
  double kappa_ = 0.0;
  int fixed_ = 0;
  std::vector<double> coefficients_;
  std::vector<double> masses_;
};

}  // namespace fjlab
