#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace fluidq {

struct RootFindError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Solves f(theta) = target for a function that is nondecreasing on
// [lo, infinity), returning the abscissa of the bracketed root. The bracket is
// grown geometrically to the right of lo. Convergence is declared on the
// function value: |f(theta) - target| <= tol * max(1, |target|), with a
// bisection/secant hybrid that also terminates once the bracket collapses to
// machine precision.
template <typename F>
double solve_increasing(F&& f, double lo, double target, double tol = 1e-12) {
  double flo = f(lo);
  const double ftol = tol * std::max(1.0, std::abs(target));
  if (flo > target) {
    if (flo - target <= ftol) return lo;
    throw RootFindError("solve_increasing: no root at or right of the bracket start");
  }
  if (flo == target) return lo;

  double hi = lo > 1.0 ? 2.0 * lo : 1.0;
  double fhi = f(hi);
  int grow = 0;
  while (fhi < target) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = f(hi);
    if (++grow > 2000 || !std::isfinite(hi))
      throw RootFindError("solve_increasing: failed to bracket the root");
  }

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    // Secant candidate, safeguarded to the strict interior of the bracket.
    double cand = std::numeric_limits<double>::quiet_NaN();
    if (fhi > flo) cand = lo + (target - flo) * (hi - lo) / (fhi - flo);
    if (!(cand > lo) || !(cand < hi)) cand = 0.5 * (lo + hi);
    // Alternate with bisection to guarantee bracket shrinkage.
    if (it % 2 == 1) cand = 0.5 * (lo + hi);
    mid = cand;
    const double fm = f(mid);
    if (std::abs(fm - target) <= ftol) return mid;
    if (fm < target) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi))
      return 0.5 * (lo + hi);
  }
  return mid;
}

// Locates the minimizer of a convex differentiable function on (0, infinity)
// whose derivative is negative near 0 (possibly -inf at 0) and eventually
// positive: bisection on the sign of the derivative.
template <typename DF>
double convex_minimizer(DF&& df, double tol = 1e-14) {
  double lo = 1e-18;
  double hi = 1.0;
  int grow = 0;
  while (df(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 2000 || !std::isfinite(hi))
      throw RootFindError("convex_minimizer: derivative never becomes positive");
  }
  for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (df(mid) <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail
}  // namespace fluidq
