#pragma once

#include <functional>

namespace ahe::roots {

/// Root of f in [lo, hi] (sign change required): bisection down to a small
/// bracket, then Newton polish using `df` when given. Absolute tolerance `tol`.
/// Throws Error{kNoConvergence} if the bracket has no sign change.
double bracketed(const std::function<double(double)>& f, double lo, double hi,
                 double tol = 1e-12,
                 const std::function<double(double)>& df = nullptr);

/// Expands [lo, hi] geometrically upward until f changes sign.
double bracketed_expanding(const std::function<double(double)>& f, double lo,
                           double hi, double tol = 1e-12,
                           const std::function<double(double)>& df = nullptr);

}  // namespace ahe::roots
