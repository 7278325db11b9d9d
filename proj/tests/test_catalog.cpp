#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ahe/catalog/catalog.hpp"
#include "ahe/geom/curvature.hpp"
#include "ahe/numerics/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace ahe;
using std::numbers::pi;

namespace {

// Brute-force volume density over the orbit coordinates at fixed r.
double orbit_integral(const CatalogMetric& m, double r, int n) {
  const auto& lo = m.sample_box.lower;
  const auto& hi = m.sample_box.upper;
  // The sample box trims sphere poles; integrate over the full angular range.
  Point<4> a = lo, b = hi;
  for (std::size_t k = 1; k < 4; ++k) {
    if (m.field.patch().names[k] == "chi" || m.field.patch().names[k] == "theta" ||
        m.field.patch().names[k] == "vartheta") {
      if (m.family != Family::kToralBlackHole && !(m.family == Family::kHyperbolicQuotient &&
                                                   m.field.patch().names[k] == "s")) {
        a[k] = 0.0;
        b[k] = pi;
      }
    }
  }
  if (m.family == Family::kToralBlackHole) a[1] = 0.0, b[1] = m.params.at("theta_period");
  double sum = 0.0;
  const double h1 = (b[1] - a[1]) / n, h2 = (b[2] - a[2]) / n, h3 = (b[3] - a[3]) / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Point<4> p{r, a[1] + (i + 0.5) * h1, a[2] + (j + 0.5) * h2, a[3] + (k + 0.5) * h3};
        sum += std::sqrt(m.field.at(p).determinant());
      }
  return sum * h1 * h2 * h3;
}

}  // namespace

TEST_CASE("r_plus and beta") {
  CHECK(r_plus(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  // bisection oracle for small m
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * mid * mid + mid - 0.002 > 0 ? hi : lo) = mid;
  }
  CHECK(std::abs(r_plus(0.001) - lo) < 1e-12);
  CHECK(r_plus(2.0) > r_plus(1.0));
  CHECK(beta_of_rplus(1.0) == doctest::Approx(pi));
  CHECK(beta_of_rplus(1.0 / std::sqrt(3.0)) == doctest::Approx(2.0 * pi / std::sqrt(3.0)));
  CHECK(beta_of_rplus(r_plus(1e-9)) < 1e-7);
  CHECK_THROWS_AS(ads_schwarzschild(0.0), Error);
  CHECK_THROWS_AS(beta_of_rplus(-1.0), Error);
}

TEST_CASE("smoothness periods") {
  for (double m : {0.3, 1.0, 4.0}) {
    const double rp = r_plus(m);
    const double p = smoothness_period([m](double r) { return 1 + r * r - 2 * m / r; }, rp);
    CHECK(std::abs(p - beta_of_rplus(rp)) < 1e-10);
  }
  for (auto [s, k] : {std::pair{3.0, 1}, {2.5, 2}, {1.5, 5}}) {
    const double e = e_param(s, k);
    CHECK(std::abs(taub_bolt_f(s, s, e)) < 1e-12);
    // τ-period of the fiber form: 4π (s^2-1) / F'(s) in the τ variable.
    const double p = smoothness_period([=](double r) { return taub_bolt_f(r, s, e) / (r * r - 1); },
                                       s);
    CHECK(std::abs(p - 2.0 * pi / k) < 1e-8);
  }
  const double rp = std::cbrt(2.0);
  CHECK(std::abs(smoothness_period([](double r) { return r * r - 2.0 / r; }, rp) -
                 4.0 * pi / (3.0 * rp)) < 1e-10);
  CHECK_THROWS_AS(smoothness_period([](double r) { return r; }, 1.0), Error);
}

TEST_CASE("Taub-Bolt parameters") {
  CHECK_THROWS_AS(taub_bolt(2.0, 1), Error);
  CHECK_THROWS_AS(taub_bolt(1.0, 3), Error);
  CHECK_THROWS_AS(taub_bolt(3.0, 0), Error);
  CHECK_THROWS_AS(e_param(1.0, 3), Error);
  const double s = 2.0 + std::sqrt(3.0);
  CHECK(std::abs(e_param(s, 1) - (2.0 - std::sqrt(3.0)) / 3.0) < 1e-14);
  for (double x : {1.01, 2.0, 7.0}) CHECK(std::abs(e_param(x, 2) - (4.0 / 3.0) / (x + 1)) < 1e-14);
  CHECK(std::abs(e_param((3.0 + std::sqrt(6.0)) / 3.0, 3) - 1.0) < 1e-12);
  for (int k = 3; k <= 50; ++k) CHECK(std::abs(e_param(round_boundary_parameter(k), k) - 1.0) < 1e-12);

  const auto tb = taub_bolt(3.0, 1);
  CHECK(tb.params.at("tau_period") == doctest::Approx(2.0 * pi));
  CHECK(bolt_area(tb) == doctest::Approx(2.0 * pi / 3.0).epsilon(1e-10));
  const auto tb5 = taub_bolt(1.5, 5);
  const double e = tb5.params.at("E");
  CHECK(bolt_area(tb5) == doctest::Approx(pi * e * (1.5 * 1.5 - 1.0)).epsilon(1e-10));
  CHECK(tb5.boundary.params.at("fiber_length") == doctest::Approx(2 * pi * std::sqrt(e) / 5));
}

TEST_CASE("toral black hole") {
  const auto t = toral_black_hole(0.5);
  CHECK(t.params.at("r_plus") == doctest::Approx(1.0));
  CHECK(t.params.at("theta_period") == doctest::Approx(4.0 * pi / 3.0));
  const double rp = t.params.at("r_plus");
  CHECK(std::abs(rp * rp - 1.0 / rp) < 1e-14);
  CHECK_THROWS_AS(toral_black_hole(1.0, {1.0, 2.0, 1.0}), Error);
}

TEST_CASE("Einstein residual sweep over the catalog") {
  std::vector<CatalogMetric> all = {poincare_ball(),          hyperbolic_quotient(2.0),
                                    hyperbolic_cusp(),        ads_schwarzschild(0.5),
                                    ads_schwarzschild(1.0),   ads_schwarzschild(2.0),
                                    taub_bolt(3.0, 1),        taub_bolt(2.5, 2),
                                    taub_bolt(1.5, 5),        toral_black_hole(1.0),
                                    toral_black_hole(0.7, {2.0, 0.5, 1.0})};
  for (const auto& m : all) {
    const auto pts = m.sample_points(200);
    REQUIRE(pts.size() == 200);
    double worst = 0.0;
    for (const auto& p : pts) worst = std::max(worst, einstein_residual(m.field, p));
    INFO(m.id);
    CHECK(worst < 1e-7);
  }
  CHECK(!hyperbolic_cusp().conformally_compact);
  CHECK(poincare_ball().conformally_compact);
}

TEST_CASE("quotient sectional curvatures") {
  const auto q = hyperbolic_quotient(2.0);
  for (const auto& p : q.sample_points(10)) {
    const auto c = curvature_at<4>(q.field, p);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b) {
        Vec<4> u = Vec<4>::Unit(a), v = Vec<4>::Unit(b);
        CHECK(sectional<4>(c, u, v) == doctest::Approx(-1.0).epsilon(1e-9));
      }
  }
}

TEST_CASE("closed-form cross sections match angular quadrature") {
  for (const auto& m : {poincare_ball(), hyperbolic_quotient(2.0), ads_schwarzschild(1.0),
                        taub_bolt(3.0, 1), taub_bolt(1.5, 5), toral_black_hole(1.0)}) {
    const double r = m.radial.r_inner + 1.3;
    INFO(m.id);
    CHECK(orbit_integral(m, r, 40) == doctest::Approx(m.radial.cross_section(r)).epsilon(2e-3));
  }
}

TEST_CASE("cusp end volumes") {
  const auto c = hyperbolic_cusp();
  const double slab = quad::gauss_kronrod(c.radial.cross_section, 0.0, 1.0);
  CHECK(slab == doctest::Approx((std::exp(3.0) - 1.0) / 3.0));
  const double inner = quad::gauss_kronrod(c.radial.cross_section, -60.0, 0.0);
  CHECK(inner == doctest::Approx(1.0 / 3.0));
  CHECK(quad::gauss_kronrod(c.radial.cross_section, 0.0, 20.0) > 1e20);
}

TEST_CASE("stable tail integrands agree with the direct difference") {
  for (const auto& m : {poincare_ball(), hyperbolic_quotient(2.0), ads_schwarzschild(1.0),
                        taub_bolt(3.0, 1), taub_bolt(1.5, 5), toral_black_hole(1.0)}) {
    for (double dr : {0.5, 2.0, 6.0}) {
      const double r = m.radial.r_inner + dr;
      const double direct = m.radial.sqrt_grr(r) - m.radial.half_dlog_areal(r);
      INFO(m.id << " r=" << r);
      CHECK(m.radial.tail_integrand(r) == doctest::Approx(direct).epsilon(1e-9));
    }
  }
}
