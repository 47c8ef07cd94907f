#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "fjlab/errors.hpp"
#include "fjlab/rng.hpp"

namespace fjlab {

enum class DistKind { exponential, uniform_interval, deterministic };

// Nonnegative service / inter-arrival time distribution with exact
// transform evaluation. mgf(t) = E[e^{tX}] for t below mgf_domain_sup();
// laplace(t) = E[e^{-tX}] for t >= 0.
class Distribution {
 public:
  static Distribution exponential(double rate) {
    if (!(rate > 0.0)) throw RangeError("exponential rate must be > 0, got " + std::to_string(rate));
    Distribution d;
    d.kind_ = DistKind::exponential;
    d.a_ = rate;
    return d;
  }

  static Distribution uniform_interval(double lower, double upper) {
    if (!(lower >= 0.0) || !(upper > lower)) {
      throw RangeError("uniform interval requires 0 <= lower < upper, got [" + std::to_string(lower) +
                       ", " + std::to_string(upper) + "]");
    }
    Distribution d;
    d.kind_ = DistKind::uniform_interval;
    d.a_ = lower;
    d.b_ = upper;
    return d;
  }

  static Distribution deterministic(double value) {
    if (!(value >= 0.0)) throw RangeError("deterministic value must be >= 0, got " + std::to_string(value));
    Distribution d;
    d.kind_ = DistKind::deterministic;
    d.a_ = value;
    return d;
  }

  DistKind kind() const noexcept { return kind_; }

  double mean() const noexcept {
    switch (kind_) {
      case DistKind::exponential: return 1.0 / a_;
      case DistKind::uniform_interval: return 0.5 * (a_ + b_);
      case DistKind::deterministic: return a_;
    }
    return 0.0;
  }

  // Supremum of the set where the mgf is finite.
  double mgf_domain_sup() const noexcept {
    return kind_ == DistKind::exponential ? a_ : std::numeric_limits<double>::infinity();
  }

  double mgf(double t) const {
    switch (kind_) {
      case DistKind::exponential:
        if (t >= a_) {
          throw DomainError("exponential mgf undefined at t = " + std::to_string(t) +
                            " (rate " + std::to_string(a_) + ")");
        }
        return a_ / (a_ - t);
      case DistKind::uniform_interval: {
        double u = t * (b_ - a_);
        // e^{ta} * (e^u - 1)/u, with a short Taylor series where the
        // ratio loses precision.
        double ratio;
        if (std::fabs(u) < 1e-6) {
          ratio = 1.0 + u * (0.5 + u * (1.0 / 6.0 + u * (1.0 / 24.0)));
        } else {
          ratio = std::expm1(u) / u;
        }
        return std::exp(t * a_) * ratio;
      }
      case DistKind::deterministic:
        return std::exp(t * a_);
    }
    return 0.0;
  }

  double laplace(double t) const {
    if (t < 0.0) throw RangeError("laplace transform requires t >= 0, got " + std::to_string(t));
    if (kind_ == DistKind::exponential) return a_ / (a_ + t);
    return mgf(-t);
  }

  double sample(Rng& rng) const {
    switch (kind_) {
      case DistKind::exponential: return rng.exponential(a_);
      case DistKind::uniform_interval: return rng.uniform(a_, b_);
      case DistKind::deterministic: return a_;
    }
    return 0.0;
  }

  double rate() const { return a_; }
  double lower() const { return a_; }
  double upper() const { return b_; }
  double value() const { return a_; }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  Distribution() = default;
  DistKind kind_ = DistKind::deterministic;
  double a_ = 0.0;
  double b_ = 0.0;
};

// Service time after the two model transformations: division by a scale
// factor (running on s servers with scaling exponent phi divides work by
// s^phi) and Bernoulli thinning (the server participates with probability
// thin_probability, otherwise contributes zero work).
class TransformedDistribution {
 public:
  TransformedDistribution(Distribution base, double scale_divisor, double thin_probability)
      : base_(base), divisor_(scale_divisor), thin_(thin_probability) {
    if (!(divisor_ > 0.0)) throw RangeError("scale divisor must be > 0, got " + std::to_string(divisor_));
    if (!(thin_ >= 0.0 && thin_ <= 1.0)) {
      throw RangeError("thin probability must lie in [0,1], got " + std::to_string(thin_));
    }
  }

  static TransformedDistribution thinned(Distribution base, double thin_probability) {
    return TransformedDistribution(base, 1.0, thin_probability);
  }

  static TransformedDistribution scaled(Distribution base, int servers, double phi) {
    return TransformedDistribution(base, std::pow(static_cast<double>(servers), phi), 1.0);
  }

  const Distribution& base() const noexcept { return base_; }
  double scale_divisor() const noexcept { return divisor_; }
  double thin_probability() const noexcept { return thin_; }

  double mean() const noexcept { return thin_ * base_.mean() / divisor_; }

  double mgf_domain_sup() const noexcept { return base_.mgf_domain_sup() * divisor_; }

  // E[e^{tX~}] = (1 - pi) + pi * E[e^{(t/divisor) X}].
  double mgf(double t) const { return (1.0 - thin_) + thin_ * base_.mgf(t / divisor_); }

  double sample(Rng& rng) const {
    if (thin_ < 1.0 && rng.next_unit() >= thin_) return 0.0;
    return base_.sample(rng) / divisor_;
  }

  friend bool operator==(const TransformedDistribution&, const TransformedDistribution&) = default;

 private:
  Distribution base_;
  double divisor_;
  double thin_;
};

}  // namespace fjlab
