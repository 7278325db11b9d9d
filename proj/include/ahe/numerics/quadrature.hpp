#pragma once

#include <functional>

namespace ahe::quad {

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`.
/// Throws Error{kNoConvergence} when the recursion depth is exhausted.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12, int max_depth = 48);

/// Adaptive 61-point Gauss-Kronrod on [a, b]. `b` may be +infinity.
double gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-14, unsigned max_depth = 20);

/// Integral of f on [a, b] where f ~ c / sqrt(x - a) near a: integrates
/// 2u f(a + u^2) over u in [0, sqrt(b - a)].
double with_sqrt_endpoint(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-14);

}  // namespace ahe::quad
