#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace testutil {

namespace detail {

inline double simpson(double h, double fa, double fm, double fb) { return h / 6.0 * (fa + 4.0 * fm + fb); }

inline double integrate_impl(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                             double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double flm = f(0.5 * (a + m));
  double frm = f(0.5 * (m + b));
  double left = simpson(m - a, fa, flm, fm);
  double right = simpson(b - m, fm, frm, fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return integrate_impl(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         integrate_impl(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature; the independent oracle for transform
// values of distributions with densities.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = detail::simpson(b - a, fa, fm, fb);
  return detail::integrate_impl(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Exact binomial coefficients by Pascal's rule, row n in pascal(n)[n].
inline std::vector<std::vector<double>> pascal(int n) {
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    c[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i) + 1, 1.0);
    for (int k = 1; k < i; ++k) {
      c[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
          c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)] +
          c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)];
    }
  }
  return c;
}

}  // namespace testutil
