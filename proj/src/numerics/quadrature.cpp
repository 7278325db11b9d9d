#include "ahe/numerics/quadrature.hpp"

#include "ahe/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace ahe::quad {

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  int depth_exhausted = 0;

  double recurse(double a, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) {
      ++depth_exhausted;
      return left + right + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }
};

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  Simpson s{f};
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double v = s.recurse(a, b, fa, fm, fb, whole, tol, max_depth);
  if (s.depth_exhausted > 0 || !std::isfinite(v)) {
    throw Error(ErrorCode::kNoConvergence, "adaptive Simpson did not converge");
  }
  return v;
}

double gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, unsigned max_depth) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, max_depth, rel_tol, &err);
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kNoConvergence, "Gauss-Kronrod produced a non-finite value");
  }
  return v;
}

double with_sqrt_endpoint(const std::function<double(double)>& f, double a,
                          double b, double rel_tol) {
  if (b <= a) return 0.0;
  return gauss_kronrod([&](double u) { return 2.0 * u * f(a + u * u); }, 0.0,
                       std::sqrt(b - a), rel_tol);
}

}  // namespace ahe::quad
