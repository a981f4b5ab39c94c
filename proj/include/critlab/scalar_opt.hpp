#pragma once

#include <cmath>
#include <stdexcept>

namespace critlab {

struct ScalarMin {
  double argmin = 0.0;
  double value = 0.0;
};

/*
 * Golden-section search for the minimum of a unimodal function on [lo, hi].
 * Only interior points are probed, so the objective may be +inf near the
 * edges of the bracket. `tol` is an absolute tolerance on the argument.
 */
template <class F>
ScalarMin golden_section_min(F&& f, double lo, double hi, double tol,
                             int max_iter = 300) {
  if (!(lo < hi)) throw std::invalid_argument("golden_section_min: empty bracket");
  static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  int iter = 0;
  while ((b - a) > tol && iter++ < max_iter) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  double xm = 0.5 * (a + b);
  double fm = f(xm);
  if (f1 < fm) { xm = x1; fm = f1; }
  if (f2 < fm) { xm = x2; fm = f2; }
  return {xm, fm};
}

/*
 * Bisection root of a non-decreasing function h with h(lo) <= 0 <= h(hi).
 * Returns the midpoint of the final bracket; `tol` is absolute in the
 * argument.
 */
template <class F>
double bisect_root(F&& h, double lo, double hi, double tol, int max_iter = 200) {
  if (!(lo <= hi)) throw std::invalid_argument("bisect_root: empty bracket");
  for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
    double mid = 0.5 * (lo + hi);
    if (h(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace critlab
