#include "choquard/roots.hpp"

#include "choquard/errors.hpp"

#include <cmath>
#include <sstream>

namespace chq {

namespace {
bool same_sign(double a, double b) { return (a > 0 && b > 0) || (a < 0 && b < 0); }
} // namespace

double find_root(const ScalarFn& f, double lo, double hi, double rel_tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0)
    return lo;
  if (fhi == 0.0)
    return hi;
  if (!std::isfinite(flo) || !std::isfinite(fhi) || same_sign(flo, fhi)) {
    std::ostringstream msg;
    msg << "no sign change on [" << lo << ", " << hi << "] (f=" << flo << ", " << fhi << ")";
    throw LabError(ErrorCode::RootNotBracketed, msg.str());
  }
  bool use_secant = true;
  for (int iter = 0; iter < 400; ++iter) {
    const double width = hi - lo;
    if (width <= rel_tol * std::max(std::abs(lo), std::abs(hi)))
      break;
    double x = 0.5 * (lo + hi);
    if (use_secant) {
      const double s = hi - fhi * (hi - lo) / (fhi - flo);
      if (s > lo && s < hi)
        x = s;
    }
    const double fx = f(x);
    if (fx == 0.0)
      return x;
    if (same_sign(fx, flo)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    // Fall back to bisection whenever the secant step failed to halve the bracket.
    use_secant = (hi - lo) <= 0.5 * width;
  }
  return std::abs(flo) < std::abs(fhi) ? lo : hi;
}

double expand_upward(const ScalarFn& f, double lo, double hi, int max_doublings) {
  const double flo = f(lo);
  for (int k = 0; k < max_doublings; ++k) {
    const double fhi = f(hi);
    if (std::isfinite(fhi) && !same_sign(flo, fhi))
      return hi;
    hi *= 2.0;
  }
  throw LabError(ErrorCode::RootNotBracketed, "upward bracket expansion failed");
}

double expand_downward(const ScalarFn& f, double lo, double hi, int max_halvings) {
  const double fhi = f(hi);
  for (int k = 0; k < max_halvings; ++k) {
    const double flo = f(lo);
    if (std::isfinite(flo) && !same_sign(flo, fhi))
      return lo;
    lo *= 0.5;
  }
  throw LabError(ErrorCode::RootNotBracketed, "downward bracket expansion failed");
}

} // namespace chq
