#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace isq {

namespace detail {

template <typename T>
double qnorm(const T& v) {
  return std::abs(v);
}

template <typename F, typename T>
T adaptive_simpson_rec(const F& f, double a, double b, T fa, T fm, T fb, T whole, double tol,
                       int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const T flm = f(lm);
  const T frm = f(rm);
  const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const T delta = left + right - whole;
  if (depth <= 0 || qnorm(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a,b]; works for real and complex integrands.
template <typename F>
auto integrate(const F& f, double a, double b, double tol = 1e-9, int max_depth = 48)
    -> decltype(f(a)) {
  using T = decltype(f(a));
  if (a == b) return T{};
  const T fa = f(a);
  const T fb = f(b);
  const double m = 0.5 * (a + b);
  const T fm = f(m);
  const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Same, but forcing subdivision at the given interior breakpoints (kinks/jumps).
template <typename F>
auto integrate_with_breaks(const F& f, double a, double b, std::vector<double> breaks,
                           double tol = 1e-9) -> decltype(f(a)) {
  using T = decltype(f(a));
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  T total{};
  double lo = a;
  for (double x : breaks) {
    if (x <= a || x >= b) continue;
    total += integrate(f, lo, x, tol);
    lo = x;
  }
  total += integrate(f, lo, b, tol);
  return total;
}

// Composite Simpson with a fixed number of panels (panels must be even).
template <typename F>
double fixed_simpson(const F& f, double a, double b, int panels) {
  if (panels % 2 != 0) ++panels;
  const double hstep = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += f(a + i * hstep) * (i % 2 ? 4.0 : 2.0);
  return acc * hstep / 3.0;
}

}  // namespace isq
