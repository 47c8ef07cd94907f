#pragma once

#include <cmath>
#include <string>
#include <variant>

#include "fjlab/errors.hpp"
#include "fjlab/rng.hpp"
#include "fjlab/strategies.hpp"

namespace fjlab {

// Server rates drawn independently from a two-point law: slow_rate with
// probability slow_probability, fast_rate otherwise. Both moment helpers
// concern Y_s, the minimum over s independently drawn rates, which
// dominates the conditional tail of a job forked to s servers.
class TwoClassModel {
 public:
  TwoClassModel(double slow_rate, double fast_rate, double slow_probability)
      : slow_(slow_rate), fast_(fast_rate), prob_slow_(slow_probability) {
    if (!(slow_ > 0.0)) throw RangeError("slow rate must be > 0, got " + std::to_string(slow_));
    if (!(slow_ < fast_)) {
      throw ParameterOrderError("two-class rates must satisfy slow < fast, got slow " + std::to_string(slow_) +
                                ", fast " + std::to_string(fast_));
    }
    if (!(prob_slow_ >= 0.0 && prob_slow_ <= 1.0)) {
      throw RangeError("slow-class probability must lie in [0,1], got " + std::to_string(prob_slow_));
    }
  }

  double slow_rate() const noexcept { return slow_; }
  double fast_rate() const noexcept { return fast_; }
  double slow_probability() const noexcept { return prob_slow_; }

  // Smallest rate the model can produce; stability needs it above the
  // arrival rate.
  double min_possible_rate() const noexcept { return prob_slow_ > 0.0 ? slow_ : fast_; }

  // E[e^{-c Y_s}]: Y_s equals slow_rate unless all s draws are fast.
  // Evaluated as a two-point mixture; subtracting the difference of the
  // exponentials instead cancels badly when slow_probability is near zero.
  double min_rate_laplace(int s, double c) const {
    double log_all_fast = s * std::log1p(-prob_slow_);
    return std::exp(-c * slow_) * -std::expm1(log_all_fast) + std::exp(-c * fast_ + log_all_fast);
  }

  // E[(mu_1 + ... + mu_s) e^{-c Y_s}], summed exactly over the number of
  // slow draws K ~ Binomial(s, slow_probability).
  double rate_sum_weighted(int s, double c) const {
    double total = 0.0;
    for (int k = 0; k <= s; ++k) {
      double log_w = detail::log_choose(s, k);
      if (k > 0) {
        if (prob_slow_ == 0.0) continue;
        log_w += k * std::log(prob_slow_);
      }
      if (k < s) {
        if (prob_slow_ == 1.0) continue;
        log_w += (s - k) * std::log1p(-prob_slow_);
      }
      double rate_sum = k * slow_ + (s - k) * fast_;
      double min_rate = k >= 1 ? slow_ : fast_;
      total += std::exp(log_w) * rate_sum * std::exp(-c * min_rate);
    }
    return total;
  }

  double sample_rate(Rng& rng) const { return rng.next_unit() < prob_slow_ ? slow_ : fast_; }

  friend bool operator==(const TwoClassModel&, const TwoClassModel&) = default;

 private:
  double slow_;
  double fast_;
  double prob_slow_;
};

// Server rates drawn as arrival_rate + Exp(hyper_rate): an exponential
// density truncated to (arrival_rate, inf), so every drawn server is
// individually stable by construction.
class TruncatedExpModel {
 public:
  TruncatedExpModel(double hyper_rate, double arrival_rate) : hyper_(hyper_rate), lambda_(arrival_rate) {
    if (!(hyper_ > 0.0)) throw RangeError("hyper rate must be > 0, got " + std::to_string(hyper_));
    if (!(lambda_ > 0.0)) throw RangeError("arrival rate must be > 0, got " + std::to_string(lambda_));
  }

  double hyper_rate() const noexcept { return hyper_; }
  double arrival_rate() const noexcept { return lambda_; }
  double min_possible_rate() const noexcept { return lambda_; }

  // Y_s - arrival_rate is the minimum of s exponentials, itself
  // Exp(s * hyper_rate), giving E[e^{-c Y_s}] in closed form.
  double min_rate_laplace(int s, double c) const {
    double nu = s * hyper_;
    return std::exp(-c * lambda_) * nu / (nu + c);
  }

  // E[(mu_1 + ... + mu_s) e^{-c Y_s}]. Writing mu_1 = arrival_rate + M + R
  // with M = min excess ~ Exp(s * hyper_rate) and R the leftover excess
  // (zero when server 1 attains the minimum, Exp(hyper_rate) otherwise,
  // independent of M either way):
  //   E[mu_1 e^{-cM}] = (lambda + 1/(nu + c) + (s-1)/nu) * nu/(nu + c)
  // and symmetry multiplies by s.
  double rate_sum_weighted(int s, double c) const {
    double nu = s * hyper_;
    double laplace = nu / (nu + c);
    return s * std::exp(-c * lambda_) * laplace * (lambda_ + 1.0 / (nu + c) + (s - 1.0) / nu);
  }

  double sample_rate(Rng& rng) const { return lambda_ + rng.exponential(hyper_); }

  friend bool operator==(const TruncatedExpModel&, const TruncatedExpModel&) = default;

 private:
  double hyper_;
  double lambda_;
};

using HierarchicalModel = std::variant<TwoClassModel, TruncatedExpModel>;

inline double sample_rate(const HierarchicalModel& model, Rng& rng) {
  return std::visit([&](const auto& m) { return m.sample_rate(rng); }, model);
}

inline double min_possible_rate(const HierarchicalModel& model) {
  return std::visit([](const auto& m) { return m.min_possible_rate(); }, model);
}

}  // namespace fjlab
