#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ahe/error.hpp"
#include "ahe/moduli/moduli.hpp"

#include <cmath>
#include <numbers>

using namespace ahe;
using std::numbers::pi;

namespace {

const double kSqrt3 = std::sqrt(3.0);

// |τ - η| ≤ (1/12π^2) ∫(|W+|^2 + |W-|^2) = (8/12)(2 - 1/k) with τ = 1, in doubles.
bool signature_bound_holds(int k) {
  const double eta = (k - 1.0) * (k - 2.0) / (3.0 * k);
  return std::abs(1.0 - eta) <= (2.0 / 3.0) * (2.0 - 1.0 / k) + 1e-12;
}

}  // namespace

TEST_CASE("bolt-period curve folds once at r+ = 1/sqrt(3)") {
  const auto c = bolt_period_curve();
  const auto f = fold_analysis(c);
  REQUIRE(f.critical.size() == 1);
  CHECK(f.critical[0].kind == CriticalKind::kMaximum);
  CHECK(std::abs(f.critical[0].parameter - 1.0 / kSqrt3) < 1e-8);
  CHECK(std::abs(f.max_value - 2.0 * pi / kSqrt3) < 1e-8);
  CHECK(f.max_attained);
  CHECK(std::abs(f.lo_limit) < 1e-8);
  CHECK(std::abs(f.hi_limit) < 1e-8);

  FoldOptions fine;
  fine.grid = 800;
  const auto g = fold_analysis(c, fine);
  REQUIRE(g.critical.size() == 1);
  CHECK(std::abs(g.critical[0].parameter - f.critical[0].parameter) < 1e-8);
  CHECK(std::abs(g.max_value - f.max_value) < 1e-8);
}

TEST_CASE("the curve invariant matches the boundary of the metric it labels") {
  const auto beta = bolt_period_curve();
  for (double r : {0.3, 1.0, 2.5}) {
    const auto m = beta.metric(r);
    CHECK(m.params.at("r_plus") == doctest::Approx(r).epsilon(1e-12));
    CHECK(m.boundary.params.at("L") == doctest::Approx(beta.value(r)).epsilon(1e-12));
  }
  const auto e = berger_curve(3);
  CHECK(e.metric(2.0).boundary.params.at("E") == doctest::Approx(e.value(2.0)).epsilon(1e-14));
  CHECK(translation_curve().metric(1.5).boundary.params.at("L") == 1.5);
}

TEST_CASE("Taub-Bolt E-curves") {
  const auto k1 = fold_analysis(berger_curve(1));
  REQUIRE(k1.critical.size() == 1);
  CHECK(std::abs(k1.critical[0].parameter - (2.0 + kSqrt3)) < 1e-8);
  CHECK(std::abs(k1.max_value - (2.0 - kSqrt3) / 3.0) < 1e-8);
  CHECK(k1.critical[0].fold());

  // k s^2 - 4 s + k = 0 has no real root for k >= 3; dense sampling confirms
  // a strictly decreasing E
  const auto c3 = berger_curve(3);
  CHECK(16 - 4 * 9 < 0);
  double prev = INFINITY;
  bool decreasing = true;
  for (int i = 1; i <= 20000; ++i) {
    const double v = c3.value(1.0 + 1e-3 * i);
    decreasing = decreasing && v < prev;
    prev = v;
  }
  CHECK(decreasing);
  const auto k3 = fold_analysis(c3);
  CHECK(k3.critical.empty());
  CHECK(std::isinf(k3.lo_limit));

  const auto k2 = fold_analysis(berger_curve(2));
  CHECK(k2.critical.empty());
  CHECK(std::abs(k2.lo_limit - 2.0 / 3.0) < 1e-8);
  CHECK(k2.max_value == k2.lo_limit);
  CHECK_FALSE(k2.max_attained);
  CHECK(std::abs(end_limit(berger_curve(2), true)) < 1e-8);
}

TEST_CASE("round boundary parameter") {
  for (int k = 3; k <= 50; ++k) {
    const double s0 = round_boundary_parameter(k);
    INFO("k=" << k);
    CHECK(std::abs(e_param(s0, k) - 1.0) < 1e-12);
    const auto pre = preimages(berger_curve(k), 1.0);
    REQUIRE(pre.size() == 1);
    CHECK(std::abs(pre[0].parameter - s0) < 1e-10);
  }
}

TEST_CASE("preimages on the bolt-period curve") {
  const auto c = bolt_period_curve();
  const auto f = fold_analysis(c);
  // 4πr / (1 + 3r^2) = π  ⇔  3r^2 - 4r + 1 = 0
  const auto two = preimages(c, pi, f);
  REQUIRE(two.size() == 2);
  CHECK(std::abs(two[0].parameter - 1.0 / 3.0) < 1e-10);
  CHECK(std::abs(two[1].parameter - 1.0) < 1e-10);
  CHECK(two[0].parameter < 1.0 / kSqrt3);
  CHECK_FALSE(two[0].critical);

  const auto one = preimages(c, 2.0 * pi / kSqrt3, f);
  REQUIRE(one.size() == 1);
  CHECK(one[0].critical);
  CHECK(std::abs(one[0].parameter - 1.0 / kSqrt3) < 1e-8);

  CHECK(preimages(c, 4.0, f).empty());
  CHECK(preimages(c, -1.0, f).empty());

  // small values sit far out on the large branch
  const auto far = preimages(c, 0.05, f);
  REQUIRE(far.size() == 2);
  for (const auto& p : far) CHECK(std::abs(c.value(p.parameter) - 0.05) < 1e-10);
}

TEST_CASE("degree on the bolt-period curve") {
  const auto c = bolt_period_curve();
  const auto f = fold_analysis(c);
  const auto d = degree("R2xS2", "S1xS2", pi, preimages(c, pi, f), bolt_period_index());
  CHECK(d.indices == std::vector<int>{1, 0});
  CHECK(d.degree == 0);
  CHECK(d.mod2 == 0);
  // the same at every regular value below the fold
  for (double v : {0.1, 0.5, 1.0, 2.0, 3.0, 3.6}) {
    const auto e = degree("R2xS2", "S1xS2", v, preimages(c, v, f), bolt_period_index());
    INFO("v=" << v);
    CHECK(e.preimages.size() == 2);
    CHECK(e.degree == 0);
    CHECK(e.mod2 == ((e.degree % 2) + 2) % 2);
  }
  // above the fold the value is tautologically regular
  const auto empty = degree("R2xS2", "S1xS2", 4.0, preimages(c, 4.0, f), bolt_period_index());
  CHECK(empty.degree == 0);
  CHECK(empty.preimages.empty());

  CHECK_THROWS_AS(degree("R2xS2", "S1xS2", 2 * pi / kSqrt3,
                         preimages(c, 2 * pi / kSqrt3, f), bolt_period_index()),
                  Error);
  try {
    degree("R2xS2", "S1xS2", pi, preimages(c, pi, f),
           [](double) -> std::optional<int> { return std::nullopt; });
    FAIL("expected a missing-index error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingIndex);
  }
}

TEST_CASE("fold pair of the k = 1 Taub-Bolt curve") {
  const auto c = berger_curve(1);
  const auto f = fold_analysis(c);
  const auto pre = preimages(c, 0.05, f);
  REQUIRE(pre.size() == 2);
  const auto d = degree("CP2-B4", "Berger", 0.05, pre, fold_index(f.critical[0].parameter));
  CHECK(d.degree == 0);
  CHECK(preimages(c, 1.0, f).empty());
}

TEST_CASE("orbifold arithmetic") {
  const auto k2 = orbifold_bound(2);
  CHECK(k2.eta.numerator() == 0);
  CHECK((k2.ale_weyl_energy == boost::rational<long>(3, 2)));
  CHECK_FALSE(k2.excluded);
  CHECK((orbifold_bound(3).eta == boost::rational<long>(2, 9)));
  const auto k9 = orbifold_bound(9);
  CHECK(k9.inequality_lhs == 34);
  CHECK(k9.inequality_rhs == 29);
  CHECK_FALSE(k9.excluded);
  const auto k10 = orbifold_bound(10);
  CHECK(k10.inequality_lhs == 38);
  CHECK(k10.inequality_rhs == 42);
  CHECK(k10.excluded);
  for (int k = 1; k <= 10; ++k)
    CHECK((orbifold_bound(k).ale_weyl_energy == boost::rational<long>(2 * k - 1, k)));
  // the inequality also fails at k = 1, where the group is trivial
  const auto k1 = orbifold_bound(1);
  CHECK(k1.excluded);
  CHECK_FALSE(k1.nontrivial_group);
  for (int k = 1; k <= 100; ++k) {
    INFO("k=" << k);
    CHECK(orbifold_bound(k).excluded == !signature_bound_holds(k));
    if (k >= 2) CHECK(orbifold_bound(k).excluded == (k >= 10));
  }
  CHECK_THROWS_AS(orbifold_bound(0), Error);
}

TEST_CASE("non-surjectivity witnesses") {
  const auto l4 = nonsurjectivity_witness(bolt_period_curve(), 4.0);
  CHECK(l4.outside_image);
  CHECK(l4.sup == doctest::Approx(2 * pi / kSqrt3).epsilon(1e-10));
  CHECK(l4.sup_parameter == doctest::Approx(1 / kSqrt3).epsilon(1e-8));
  CHECK_FALSE(nonsurjectivity_witness(bolt_period_curve(), pi).outside_image);
  const auto round = nonsurjectivity_witness(berger_curve(1), 1.0);
  CHECK(round.outside_image);
  CHECK(round.sup == doctest::Approx((2 - kSqrt3) / 3).epsilon(1e-10));
  const auto k2 = nonsurjectivity_witness(berger_curve(2), 1.0);
  CHECK(k2.outside_image);
  CHECK_FALSE(k2.sup_attained);
  CHECK(nonsurjectivity_witness(berger_curve(2), 2.0 / 3.0).outside_image);
  CHECK_FALSE(nonsurjectivity_witness(berger_curve(10), 1.0).outside_image);
}

TEST_CASE("degree table") {
  const auto t = catalog_degrees({10, 11, 50});
  REQUIRE(t.size() == 7);
  const std::vector<std::pair<std::string, int>> want{
      {"B4", 1}, {"R2xS2", 0}, {"S1xR3", 1}, {"CP2-B4", 0}, {"M10", 1}, {"M11", 1}, {"M50", 1}};
  for (std::size_t i = 0; i < want.size(); ++i) {
    INFO(t[i].report.manifold);
    CHECK(t[i].report.manifold == want[i].first);
    CHECK(t[i].report.degree == want[i].second);
    CHECK(t[i].report.mod2 == ((t[i].report.degree % 2) + 2) % 2);
    CHECK_FALSE(t[i].anchor.empty());
  }
  CHECK(t[1].report.preimages.size() == 2);
  CHECK(t[3].report.preimages.empty());
  CHECK_THROWS_AS(catalog_degrees({9}), Error);
}

TEST_CASE("fold mass from the root relation") {
  const auto chk = fold_mass_check(fold_analysis(bolt_period_curve()));
  CHECK(chk.status == Status::kPassDiscrepancy);
  CHECK(chk.value == doctest::Approx(2.0 / (3.0 * kSqrt3)).epsilon(1e-10));
  CHECK(std::string(to_string(chk.status)) == "pass (paper-discrepancy-noted)");
  CHECK(r_plus(chk.value) == doctest::Approx(1 / kSqrt3).epsilon(1e-10));
  CHECK(std::abs(r_plus(2 / kSqrt3) - 1 / kSqrt3) > 0.1);
  CHECK_THROWS_AS(fold_mass_check(fold_analysis(berger_curve(3))), Error);
}

TEST_CASE("curve argument validation") {
  CHECK_THROWS_AS(berger_curve(0), Error);
  FoldOptions tiny;
  tiny.grid = 2;
  CHECK_THROWS_AS(fold_analysis(bolt_period_curve(), tiny), Error);
  FamilyCurve noisy = bolt_period_curve();
  noisy.value = [](double r) { return beta_of_rplus(r) + 1e-6 * std::sin(1e7 * r); };
  CHECK_THROWS_AS(fold_analysis(noisy), Error);
}
