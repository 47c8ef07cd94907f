#pragma once

#include <string>
#include <vector>

#include "fjlab/distributions.hpp"
#include "fjlab/errors.hpp"

namespace fjlab {

// One parallel server: its (unscaled) service distribution and the
// probability that a forked task actually lands on it.
struct ServerSpec {
  Distribution service;
  double select_probability = 1.0;

  friend bool operator==(const ServerSpec&, const ServerSpec&) = default;
};

// Fork-join system: N servers fed by one renewal arrival process. Every
// job forks one task per server; it departs when the last task finishes.
// scaling_exponent is the work-division exponent: running a job on s
// servers divides each task by s^scaling_exponent.
class FJSystem {
 public:
  FJSystem(std::vector<ServerSpec> servers, Distribution arrival, double scaling_exponent = 0.0)
      : servers_(std::move(servers)), arrival_(arrival), phi_(scaling_exponent) {
    if (servers_.empty()) throw RangeError("a fork-join system needs at least one server");
    if (!(phi_ >= 0.0 && phi_ <= 1.0)) {
      throw RangeError("scaling exponent must lie in [0,1], got " + std::to_string(phi_));
    }
    for (std::size_t n = 0; n < servers_.size(); ++n) {
      double pi = servers_[n].select_probability;
      if (!(pi >= 0.0 && pi <= 1.0)) {
        throw RangeError("server " + std::to_string(n + 1) + " selection probability must lie in [0,1], got " +
                         std::to_string(pi));
      }
    }
    if (!(arrival_.mean() > 0.0)) throw RangeError("inter-arrival mean must be > 0");
  }

  // Homogeneous shorthand: N copies of one service distribution.
  static FJSystem homogeneous(int n, Distribution service, Distribution arrival, double scaling_exponent = 0.0) {
    if (n < 1) throw RangeError("server count must be >= 1, got " + std::to_string(n));
    return FJSystem(std::vector<ServerSpec>(static_cast<std::size_t>(n), ServerSpec{service}), arrival,
                    scaling_exponent);
  }

  const std::vector<ServerSpec>& servers() const noexcept { return servers_; }
  const Distribution& arrival() const noexcept { return arrival_; }
  double scaling_exponent() const noexcept { return phi_; }
  int server_count() const noexcept { return static_cast<int>(servers_.size()); }

  friend bool operator==(const FJSystem&, const FJSystem&) = default;

 private:
  std::vector<ServerSpec> servers_;
  Distribution arrival_;
  double phi_;
};

// Strict stability: every queue drains faster than jobs arrive. A
// server's mean work per arrival is its selection probability times its
// mean service time.
inline bool check_stability(const FJSystem& system) {
  double worst = 0.0;
  for (const ServerSpec& s : system.servers()) {
    worst = std::max(worst, s.select_probability * s.service.mean());
  }
  return worst < system.arrival().mean();
}

}  // namespace fjlab
