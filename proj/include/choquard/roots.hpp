#pragma once

#include <functional>

namespace chq {

using ScalarFn = std::function<double(double)>;

//! Root of f in [lo, hi]; f(lo) and f(hi) must differ in sign (or one is 0).
//! Bisection safeguarded secant, stopping at |hi-lo| <= rel_tol*max(|lo|,|hi|).
//! Throws LabError(RootNotBracketed) when the bracket is invalid.
double find_root(const ScalarFn& f, double lo, double hi, double rel_tol = 1e-12);

//! Doubles hi (starting from lo < hi) until sign(f(hi)) != sign(f(lo)).
//! Returns the bracket's upper end; throws RootNotBracketed after max_doublings.
double expand_upward(const ScalarFn& f, double lo, double hi, int max_doublings = 200);

//! Halves lo (starting from lo < hi) until sign(f(lo)) != sign(f(hi)).
double expand_downward(const ScalarFn& f, double lo, double hi, int max_halvings = 200);

} // namespace chq
