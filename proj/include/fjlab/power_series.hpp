#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

#include "fjlab/errors.hpp"

namespace fjlab {

// Untruncated power-series family: pmf(k) proportional to coeff(k) *
// kappa^k over all of {1, 2, ...}. Exposes the generating function
//   zeta(x) = sum_{k>=1} coeff(k) x^k
// and its first two derivatives by direct summation; the strategy-moment
// identities need them at x = kappa e^{-a}.
class PowerSeriesFamily {
 public:
  explicit PowerSeriesFamily(std::function<double(std::uint64_t)> coefficient)
      : coefficient_(std::move(coefficient)) {}

  // All coefficients 1: zeta(x) = x / (1 - x).
  static PowerSeriesFamily geometric() {
    return PowerSeriesFamily([](std::uint64_t) { return 1.0; });
  }

  double zeta(double x) const { return sum(x, 0); }
  double zeta_prime(double x) const { return sum(x, 1); }
  double zeta_second(double x) const { return sum(x, 2); }

 private:
  // Sums coeff(k) * d^r/dx^r [x^k]. Converges when terms stay below a
  // relative tolerance for several consecutive k; a sustained rise or an
  // overflowing partial sum means the series diverges at x.
  double sum(double x, int order) const {
    if (!(x >= 0.0)) throw RangeError("power series evaluated at negative argument " + std::to_string(x));
    if (x == 0.0) return 0.0;
    constexpr std::uint64_t k_max = 20'000'000;
    constexpr double rel_tol = 1e-16;
    double total = 0.0;
    double prev_abs = 0.0;
    int quiet = 0;
    int rising = 0;
    double xk = order == 0 ? x : (order == 1 ? 1.0 : 0.0);  // x^{k-order} at k = 1
    for (std::uint64_t k = 1; k <= k_max; ++k) {
      double weight = 1.0;
      if (order == 1) weight = static_cast<double>(k);
      if (order == 2) weight = static_cast<double>(k) * static_cast<double>(k - 1);
      double term = weight * coefficient_(k) * xk;
      total += term;
      if (!std::isfinite(total)) {
        throw DivergenceError("power series overflows at argument " + std::to_string(x));
      }
      double a = std::fabs(term);
      quiet = (a <= rel_tol * std::fabs(total)) ? quiet + 1 : 0;
      if (quiet >= 6 && k >= 8) return total;
      if (k > 64) {
        rising = (a >= prev_abs && a > 0.0) ? rising + 1 : 0;
        if (rising >= 64) {
          throw DivergenceError("power series terms do not decay at argument " + std::to_string(x));
        }
      }
      prev_abs = a;
      if (order == 2 && k == 1) {
        xk = 1.0;  // x^{k-2} as k moves to 2
      } else {
        xk *= x;
      }
    }
    throw DivergenceError("power series failed to converge within " + std::to_string(k_max) + " terms");
  }

  std::function<double(std::uint64_t)> coefficient_;
};

}  // namespace fjlab
