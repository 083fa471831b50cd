#pragma once

// Scalar numerical kernels shared by every solver: adaptive Simpson
// quadrature, bisection on monotone maps, golden-section search and a
// grid-plus-refine global maximizer.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>

#include "drgoal/errors.hpp"

namespace drgoal {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct QuadratureOptions {
  double abs_tol = 1e-9;
  int max_depth = 50;
};

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb,
                    double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps || !(lm > a) || !(rm < b)) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] (Lyness acceptance test with
/// Richardson correction). Returns 0 for an empty interval and the negated
/// integral when a > b. The integrand is never evaluated outside [a, b].
template <class F>
double adaptive_simpson(const F& f, double a, double b, QuadratureOptions opt = {}) {
  if (a == b) return 0.0;
  if (a > b) return -adaptive_simpson(f, b, a, opt);
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("adaptive_simpson: integration bounds must be finite");
  }
  // Four initial panels so that features narrower than the interval are not
  // missed by the first five samples.
  constexpr int kPanels = 4;
  const double h = (b - a) / kPanels;
  double total = 0.0;
  double x0 = a;
  double f0 = f(a);
  for (int i = 0; i < kPanels; ++i) {
    const double x1 = (i + 1 == kPanels) ? b : a + h * (i + 1);
    const double xm = 0.5 * (x0 + x1);
    const double fm = f(xm);
    const double f1 = f(x1);
    const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
    total += detail::simpson_step(f, x0, x1, f0, fm, f1, whole, opt.abs_tol / kPanels,
                                  opt.max_depth);
    x0 = x1;
    f0 = f1;
  }
  return total;
}

/// Integral of f over [a, upper] with upper <= 1, where f may blow up
/// (integrably) as its argument approaches 1. The interval is cut at the
/// dyadic points 1 - 2^-k and the pieces are summed until they become
/// negligible; f is never evaluated at 1 itself. Throws NumericError when the
/// pieces fail to decay, i.e. the integral diverges.
template <class F>
double integrate_towards_one(const F& f, double a, double upper, QuadratureOptions opt = {}) {
  if (upper > 1.0) throw DomainError("integrate_towards_one: upper limit exceeds 1");
  if (a >= upper) return 0.0;
  constexpr int kMaxLevel = 52;
  double total = 0.0;
  double lo = a;
  for (int k = 1; k <= kMaxLevel; ++k) {
    const double cut = 1.0 - std::ldexp(1.0, -k);
    if (cut <= lo) continue;
    const double hi = std::min(cut, upper);
    const double piece = adaptive_simpson(f, lo, hi, opt);
    total += piece;
    lo = hi;
    if (lo >= upper) return total;
    // Pieces of a convergent integral shrink geometrically; stop once the
    // remaining tail can no longer move the result.
    if (k > 8 && std::abs(piece) <= 1e-3 * opt.abs_tol) return total;
  }
  if (upper < 1.0) {
    return total + adaptive_simpson(f, lo, upper, opt);
  }
  const double last = adaptive_simpson(f, lo, std::nextafter(1.0, 0.0), opt);
  if (std::abs(last) > 1e-6 * std::max(1.0, std::abs(total))) {
    throw NumericError("integrate_towards_one: integral does not converge at 1 (tail piece " +
                       std::to_string(last) + ")");
  }
  return total + last;
}

/// Smallest x in [lo, hi] (to within tol) at which a monotone predicate flips
/// from false to true. Requires pred(hi) == true; returns lo when pred(lo).
/// The returned point always satisfies the predicate.
template <class P>
double bisect_threshold(const P& pred, double lo, double hi, double tol = 1e-12) {
  if (pred(lo)) return lo;
  if (!pred(hi)) throw NumericError("bisect_threshold: predicate false on the whole bracket");
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

/// Largest x in [lo, hi] (to within tol) at which a monotone predicate still
/// holds, for predicates true at lo and false to the right of some point.
/// Returns hi when pred(hi). The returned point always satisfies the
/// predicate.
template <class P>
double bisect_last_true(const P& pred, double lo, double hi, double tol = 1e-12) {
  if (pred(hi)) return hi;
  if (!pred(lo)) throw NumericError("bisect_last_true: predicate false at the left end");
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

/// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must not share a
/// strict sign.
template <class F>
double bisect_root(const F& f, double lo, double hi, double tol = 1e-10,
                   const char* what = "bisect_root") {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NumericError(std::string(what) + ": root not bracketed on [" + std::to_string(lo) +
                       ", " + std::to_string(hi) + "]");
  }
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Rightmost root of f on [lo, hi]: scans downward from hi in `steps` equal
/// steps to bracket the last sign change, then bisects.
template <class F>
double largest_root(const F& f, double lo, double hi, int steps = 1000, double tol = 1e-10,
                    const char* what = "largest_root") {
  if (!(hi >= lo)) throw DomainError(std::string(what) + ": empty search interval");
  double right = hi;
  double f_right = f(hi);
  if (f_right == 0.0) return hi;
  const double h = (hi - lo) / steps;
  for (int k = steps - 1; k >= 0; --k) {
    const double left = (k == 0) ? lo : lo + h * k;
    const double f_left = f(left);
    if (f_left == 0.0) return left;
    if ((f_left > 0.0) != (f_right > 0.0)) {
      return bisect_root(f, left, right, tol, what);
    }
    right = left;
    f_right = f_left;
  }
  throw NumericError(std::string(what) + ": no sign change on [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
}

struct Extremum {
  double arg;
  double value;
};

/// Golden-section search for a maximum of a unimodal f on [a, b].
template <class F>
Extremum golden_section_max(const F& f, double a, double b, double tol = 1e-10) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < 200 && (b - a) > tol; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? Extremum{c, fc} : Extremum{d, fd};
}

struct GridOptions {
  std::size_t points = 4001;
  double refine_tol = 1e-10;
};

/// Global maximization of f on [lo, hi]: dense uniform grid, then
/// golden-section refinement inside the two cells around the best grid
/// point. Ties resolve to the smallest argument.
template <class F>
Extremum grid_refine_max(const F& f, double lo, double hi, GridOptions opt = {}) {
  if (!(hi >= lo)) throw DomainError("grid_refine_max: empty interval");
  if (opt.points < 2 || hi == lo) return {lo, f(lo)};
  const std::size_t n = opt.points;
  const double h = (hi - lo) / static_cast<double>(n - 1);
  std::size_t best = 0;
  double best_value = f(lo);
  for (std::size_t i = 1; i < n; ++i) {
    const double x = (i + 1 == n) ? hi : lo + h * static_cast<double>(i);
    const double v = f(x);
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  const double best_x = (best + 1 == n) ? hi : lo + h * static_cast<double>(best);
  const double a = best == 0 ? lo : lo + h * static_cast<double>(best - 1);
  const double b = best + 1 >= n ? hi : lo + h * static_cast<double>(best + 1);
  const Extremum refined = golden_section_max(f, a, b, opt.refine_tol);
  if (refined.value > best_value) return refined;
  return {best_x, best_value};
}

}  // namespace drgoal
