#include "ahe/numerics/roots.hpp"

#include "ahe/error.hpp"

#include <cmath>

namespace ahe::roots {

double bracketed(const std::function<double(double)>& f, double lo, double hi,
                 double tol, const std::function<double(double)>& df) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    throw Error(ErrorCode::kNoConvergence, "root bracket has no sign change");
  }
  const double polish_width = df ? 1e-6 * (1.0 + std::abs(lo) + std::abs(hi)) : tol;
  for (int it = 0; it < 400 && hi - lo > std::max(tol, polish_width); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  if (!df) return x;
  for (int it = 0; it < 50; ++it) {
    const double d = df(x);
    if (d == 0.0 || !std::isfinite(d)) break;
    const double step = f(x) / d;
    double next = x - step;
    if (next <= lo || next >= hi) next = 0.5 * (x + (step > 0 ? lo : hi));
    const bool done = std::abs(next - x) <= 0.25 * tol;
    x = next;
    if (done) break;
  }
  return x;
}

double bracketed_expanding(const std::function<double(double)>& f, double lo,
                           double hi, double tol,
                           const std::function<double(double)>& df) {
  const double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    if ((f(hi) > 0) != (flo > 0)) return bracketed(f, lo, hi, tol, df);
    hi = lo + 2.0 * (hi - lo);
  }
  throw Error(ErrorCode::kNoConvergence, "could not bracket root");
}

}  // namespace ahe::roots
