#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "critlocus/base.hpp"

namespace critlocus {

namespace detail {

template <class Scalar, class F>
Scalar adaptive_simpson_rec(const F& f, Scalar a, Scalar b, Scalar fa, Scalar fm, Scalar fb,
                            Scalar whole, Scalar tol, int depth) {
  const Scalar m = (a + b) / 2;
  const Scalar lm = (a + m) / 2, rm = (m + b) / 2;
  const Scalar flm = f(lm), frm = f(rm);
  const Scalar left = (m - a) / 6 * (fa + 4 * flm + fm);
  const Scalar right = (b - m) / 6 * (fm + 4 * frm + fb);
  const Scalar delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15 * tol) return left + right + delta / 15;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

}  // namespace detail

template <class Scalar, class F>
Scalar adaptive_simpson(const F& f, Scalar a, Scalar b, Scalar tol = Scalar(1e-12),
                        int max_depth = 48) {
  const Scalar fa = f(a), fb = f(b), fm = f((a + b) / 2);
  const Scalar whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Leftmost sign change of a continuous f with f(lo) > 0.
///
/// Maintains the invariant f(lo) > 0 >= f(hi), so when the zero set of f is
/// an interval the bracket converges to its infimum. Throws BracketFailure
/// when the endpoints do not bracket.
template <class Scalar, class F>
Scalar bisect_leftmost(const F& f, Scalar lo, Scalar hi, int iters = 64) {
  Scalar flo = f(lo), fhi = f(hi);
  if (!(flo > Scalar(0)))
    throw BracketFailureError("left endpoint not positive");
  if (!(fhi <= Scalar(0)))
    throw BracketFailureError("right endpoint not nonpositive");
  for (int i = 0; i < iters; ++i) {
    const Scalar mid = (lo + hi) / 2;
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > Scalar(0))
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

/// Golden-section minimization on [a, b]; f need not be smooth.
template <class Scalar, class F>
std::pair<Scalar, Scalar> golden_min(const F& f, Scalar a, Scalar b, int iters = 40) {
  const Scalar inv_phi = Scalar(0.6180339887498948482L);
  Scalar x1 = b - inv_phi * (b - a);
  Scalar x2 = a + inv_phi * (b - a);
  Scalar f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
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
  return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 1;
};

/// Ordinary least squares y ~ slope*x + intercept.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit out;
  const std::size_t n = x.size();
  if (n == 0) return out;
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / double(n), my = sy / double(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx > 0) out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  if (syy > 0) out.r2 = (sxy * sxy) / (sxx * syy);
  return out;
}

}  // namespace critlocus
