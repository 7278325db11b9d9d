// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.

#include "ahe/catalog/catalog.hpp"
#include "ahe/cli/cli.hpp"
#include "ahe/compactify/compactify.hpp"
#include "ahe/error.hpp"
#include "ahe/moduli/moduli.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace ahe;

namespace {

constexpr double kPi = std::numbers::pi;

// pinned tolerances
constexpr double kEinsteinTol = 1e-6;
constexpr double kEinsteinSeconds = 60.0;
constexpr double kFoldTol = 1e-8;
constexpr double kRoundBoundaryTol = 1e-10;
constexpr double kBallVolumeTol = 1e-4;
constexpr double kBallActionTol = 1e-3;
constexpr double kGaussBonnetTol = 1e-3;
constexpr double kRenormSeconds = 300.0;
constexpr double kFgHyperbolicTol = 1e-6;
constexpr double kFgConstraintTol = 1e-5;
constexpr double kConformalRuleTol = 1e-4;
constexpr double kAppendixTol = 1e-5;
constexpr double kWidthTol = 1e-8;
constexpr double kMonotoneStepTol = 1e-8;
constexpr std::size_t kMinGeodesics = 10;
constexpr double kRatioTol = 1e-8;
constexpr double kMassTol = 1e-10;
constexpr const char* kDiscrepancyStatus = "pass (paper-discrepancy-noted)";

struct Outcome {
  bool ok = true;
  std::vector<std::string> failures;
  std::string summary;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      failures.push_back(what);
    }
  }
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

cli::Report run_pipeline(const std::string& sub, std::vector<std::string> families = {},
                         std::vector<std::string> curves = {}) {
  cli::RunConfig cfg;
  cfg.subcommand = sub;
  cfg.families = std::move(families);
  cfg.curves = std::move(curves);
  return cli::execute(cfg);
}

const Check* find(const cli::Report& r, const std::string& id) {
  for (const auto& c : r.checks)
    if (c.id == id) return &c;
  return nullptr;
}

std::string suffix(const std::string& id) {
  const auto slash = id.find('/');
  return slash == std::string::npos ? id : id.substr(slash + 1);
}

// residual of a named record against a pinned tolerance; also requires the record's own pass
void require_residual(Outcome& o, const cli::Report& r, const std::string& id, double tol) {
  const Check* c = find(r, id);
  if (!c) {
    o.require(false, id + " missing");
    return;
  }
  o.require(passed(*c) && std::isfinite(c->residual) && c->residual < tol,
            id + " residual " + num(c->residual) + " >= " + num(tol));
}

std::vector<std::string> compact_families() {
  std::vector<std::string> out;
  for (const auto& f : cli::default_families())
    if (cli::make_family(cli::parse_family_spec(f)).conformally_compact) out.push_back(f);
  return out;
}

std::string subject(const std::string& family) {
  return cli::make_family(cli::parse_family_spec(family)).id;
}

Outcome criterion_1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto families = cli::default_families();
  const auto rep = run_pipeline("verify-einstein", families);
  const double elapsed = seconds_since(t0);
  double worst = 0.0;
  for (const auto& f : families) {
    const std::string id = subject(f) + "/einstein-residual";
    require_residual(o, rep, id, kEinsteinTol);
    if (const Check* c = find(rep, id)) worst = std::max(worst, c->residual);
  }
  o.require(families.size() == 10, "default matrix has " + std::to_string(families.size()));
  o.require(elapsed < kEinsteinSeconds, "runtime " + num(elapsed) + " s");
  o.summary = std::to_string(families.size()) + " families x 200 samples, worst " + num(worst) +
              ", " + num(elapsed) + " s";
  return o;
}

Outcome criterion_2() {
  Outcome o;
  const auto beta = fold_analysis(bolt_period_curve());
  o.require(std::abs(beta.max_value - 2.0 * kPi / std::sqrt(3.0)) < kFoldTol,
            "beta_max " + num(beta.max_value));
  o.require(std::abs(beta.argmax - 1.0 / std::sqrt(3.0)) < kFoldTol, "argmax " + num(beta.argmax));
  o.require(beta.max_attained, "beta_max not attained");

  const auto e1 = fold_analysis(berger_curve(1));
  o.require(std::abs(e1.max_value - (2.0 - std::sqrt(3.0)) / 3.0) < kFoldTol,
            "E_max " + num(e1.max_value));
  o.require(std::abs(e1.argmax - (2.0 + std::sqrt(3.0))) < kFoldTol, "E argmax " + num(e1.argmax));

  const double lim = end_limit(berger_curve(2), false);
  o.require(std::abs(lim - 2.0 / 3.0) < kFoldTol, "E_{1,2} limit " + num(lim));

  double worst = 0.0;
  for (int k = 3; k <= 50; ++k) {
    const double r = std::abs(berger_curve(k).value(round_boundary_parameter(k)) - 1.0);
    worst = std::max(worst, r);
    o.require(r < kRoundBoundaryTol, "E(s0(" + std::to_string(k) + ")) off by " + num(r));
  }
  o.summary = "beta_max " + num(beta.max_value) + ", E_max " + num(e1.max_value) +
              ", E_{1,2} " + num(lim) + ", round boundary worst " + num(worst);
  return o;
}

Outcome criterion_3() {
  Outcome o;
  const auto rep = run_pipeline("catalog-degrees");
  std::set<std::string> seen;
  for (const auto& e : catalog_degrees()) {
    const auto& r = e.report;
    seen.insert(r.manifold);
    int expected = 1;
    if (r.manifold == "R2xS2" || r.manifold == "CP2-B4") expected = 0;
    o.require(r.degree == expected, r.manifold + " degree " + std::to_string(r.degree));
    // mod 2 degree is the preimage count mod 2 and the integer degree mod 2
    o.require(r.mod2 == static_cast<int>(r.preimages.size() % 2), r.manifold + " mod2 vs count");
    o.require(r.mod2 == ((r.degree % 2) + 2) % 2, r.manifold + " mod2 vs degree");
  }
  for (const char* m : {"B4", "R2xS2", "S1xR3", "CP2-B4", "M10", "M20", "M50"})
    o.require(seen.count(m) == 1, std::string(m) + " missing");
  for (const auto& c : rep.checks) o.require(passed(c), c.id + " failed in catalog-degrees");
  o.summary = "B4 1, R2xS2 0, S1xR3 1, CP2-B4 0, M_k 1 (k = 10, 20, 50)";
  return o;
}

Outcome criterion_4() {
  Outcome o;
  std::vector<int> wrong;
  for (int k = 1; k <= 100; ++k) {
    const auto r = orbifold_bound(k);
    const bool holds = !r.excluded;
    if (holds != (k <= 9)) wrong.push_back(k);
  }
  if (!wrong.empty()) {
    std::string ks;
    for (int k : wrong) ks += (ks.empty() ? "" : ",") + std::to_string(k);
    o.require(false, "inequality disagrees with 'holds iff k <= 9' at k = " + ks);
  }
  o.require(orbifold_bound(2).eta.numerator() == 0, "eta(S^3/Z_2) != 0");
  for (int k = 1; k <= 10; ++k) {
    const auto r = orbifold_bound(k);
    o.require(r.ale_weyl_energy == boost::rational<long>(2 * k - 1, k),
              "ALE energy at k = " + std::to_string(k));
  }
  const auto k1 = orbifold_bound(1);
  o.summary = "k = 1: 4k-2 = " + std::to_string(k1.inequality_lhs) + ", |3k-(k-1)(k-2)| = " +
              std::to_string(k1.inequality_rhs) + "; eta(2) = 0; 2 - 1/k for k = 1..10";
  return o;
}

Outcome criterion_5() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::string> fams{"poincare", "ads-schw:m=0.5", "ads-schw:m=1", "ads-schw:m=2"};
  const auto rep = run_pipeline("renorm", fams);
  const double elapsed = seconds_since(t0);
  require_residual(o, rep, "poincare/ball-volume", kBallVolumeTol);
  require_residual(o, rep, "poincare/ball-action", kBallActionTol);
  // W = 0 and chi = 1 on the ball
  require_residual(o, rep, "poincare/gauss-bonnet", kGaussBonnetTol);
  const Check* v = find(rep, "poincare/renormalized-volume");
  o.require(v && std::abs(v->value - 4.0 * kPi * kPi / 3.0) < kBallVolumeTol, "ball V");
  double worst = 0.0;
  for (const auto& f : fams) {
    if (f == "poincare") continue;
    const std::string id = subject(f) + "/gauss-bonnet";
    require_residual(o, rep, id, kGaussBonnetTol);
    if (const Check* c = find(rep, id)) worst = std::max(worst, c->residual);
  }
  o.require(elapsed < kRenormSeconds, "runtime " + num(elapsed) + " s");
  o.summary = "ball V " + (v ? num(v->value) : std::string("?")) + ", AdS Gauss-Bonnet worst " +
              num(worst) + ", " + num(elapsed) + " s";
  return o;
}

Outcome criterion_6() {
  Outcome o;
  const std::vector<std::string> fams{"poincare", "ads-schw:m=0.5", "ads-schw:m=1", "ads-schw:m=2"};
  const auto rep = run_pipeline("fg-expand", fams);
  require_residual(o, rep, "poincare/g2-hyperbolic", kFgHyperbolicTol);
  require_residual(o, rep, "poincare/g3-vanishes", kFgHyperbolicTol);
  double worst = 0.0;
  for (const auto& f : fams) {
    if (f == "poincare") continue;
    const std::string s = subject(f);
    for (const char* id : {"/g3-trace", "/g3-divergence"}) {
      require_residual(o, rep, s + id, kFgConstraintTol);
      if (const Check* c = find(rep, s + id)) worst = std::max(worst, c->residual);
    }
    require_residual(o, rep, s + "/g3-conformal-rule", kConformalRuleTol);
  }
  o.summary = "Poincare g2/g3 exact, AdS trace/div worst " + num(worst) + ", lambda = 2 rule";
  return o;
}

bool monotonicity_record(const std::string& s) {
  return s.rfind("boundary-jacobian", 0) == 0 || s == "bishop-gromov";
}

Outcome criterion_7() {
  Outcome o;
  const auto fams = compact_families();
  const auto rep = run_pipeline("appendix", fams);
  const std::set<std::string> inequalities{"scalar-derivative-lower-bound", "width-scalar-bound",
                                           "width-bound"};
  std::size_t identities = 0;
  for (const auto& c : rep.checks) {
    const std::string s = suffix(c.id);
    if (monotonicity_record(s) || c.status == Status::kInfo) continue;
    if (inequalities.count(s)) {
      o.require(passed(c), c.id + " violated");
    } else {
      require_residual(o, rep, c.id, kAppendixTol);
      ++identities;
    }
  }
  const Check* width = find(rep, "poincare/width-bound");
  const Check* scalar = find(rep, "poincare/width-scalar-bound");
  o.require(width && std::abs(width->value - 2.0) < kWidthTol, "Poincare width");
  o.require(width && std::abs(width->expected - std::sqrt(3.0) * kPi / std::sqrt(6.0)) < kWidthTol,
            "width bound constant");
  o.require(width && width->value <= width->expected, "width bound not respected");
  o.require(scalar && std::abs(scalar->expected - 4.0) < kWidthTol, "4n^2/s(0) bound");
  o.summary = std::to_string(fams.size()) + " families, " + std::to_string(identities) +
              " identity records; Poincare width " + (width ? num(width->value) : "?") +
              " <= " + (width ? num(width->expected) : "?");
  return o;
}

Outcome criterion_8() {
  Outcome o;
  const auto fams = compact_families();
  std::size_t total = 0;
  for (const auto& f : fams) {
    const auto metric = cli::make_family(cli::parse_family_spec(f));
    const auto c = geodesic_compactify(metric);
    MonotonicityOptions opt;
    opt.tolerance = kMonotoneStepTol;
    const auto r = jacobian_monotonicity(c, opt);
    total += r.geodesics;
    o.require(r.geodesics >= kMinGeodesics, metric.id + " geodesics " + std::to_string(r.geodesics));
    o.require(r.boundary_worst_step >= -kMonotoneStepTol,
              metric.id + " boundary ratio step " + num(r.boundary_worst_step));
    o.require(r.jacobi_worst_step <= kMonotoneStepTol,
              metric.id + " Jacobi ratio step " + num(r.jacobi_worst_step));
    o.require(r.ball_worst_step <= kMonotoneStepTol,
              metric.id + " ball ratio step " + num(r.ball_worst_step));
    if (metric.family == Family::kPoincareBall) {
      o.require(std::abs(r.boundary_ratio_min - 0.125) < kRatioTol &&
                    std::abs(r.boundary_ratio_max - 0.125) < kRatioTol,
                "Poincare ratio in [" + num(r.boundary_ratio_min) + ", " + num(r.boundary_ratio_max) + "]");
    }
  }
  o.summary = std::to_string(fams.size()) + " families, " + std::to_string(total) +
              " geodesics, Poincare ratio 1/8";
  return o;
}

Outcome criterion_9() {
  Outcome o;
  const auto fg = run_pipeline("fg-expand", {"poincare"});
  const Check* sign = find(fg, "calibration/g2-sign");
  o.require(sign && to_string(sign->status) == std::string(kDiscrepancyStatus), "g2-sign status");

  const auto mod = run_pipeline("moduli", {}, {"bolt-period"});
  const Check* mass = find(mod, "bolt-period/fold-mass");
  o.require(mass && to_string(mass->status) == std::string(kDiscrepancyStatus), "fold-mass status");
  o.require(mass && std::abs(mass->value - 2.0 / (3.0 * std::sqrt(3.0))) < kMassTol,
            "m0 " + (mass ? num(mass->value) : std::string("?")));
  // m0 from the root relation r^3 + r = 2m at r = 1/sqrt(3)
  const double r = 1.0 / std::sqrt(3.0);
  o.require(std::abs((r * r * r + r) / 2.0 - 2.0 / (3.0 * std::sqrt(3.0))) < kMassTol, "root relation");
  // r_+ at the quoted 2/sqrt(3) is not the fold
  o.require(std::abs(r_plus(2.0 / std::sqrt(3.0)) - r) > 1e-3, "quoted mass lands on the fold");
  o.summary = std::string("m0 = 2/(3 sqrt 3) and g2 sign both '") + kDiscrepancyStatus + "'";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Einstein residual", criterion_1},    {"fold numbers", criterion_2},
      {"degree table", criterion_3},         {"orbifold arithmetic", criterion_4},
      {"renormalized volume", criterion_5},  {"FG expansion", criterion_6},
      {"appendix suite", criterion_7},       {"monotonicity suites", criterion_8},
      {"documented discrepancies", criterion_9},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << (i + 1) << " (" << criteria[i].first
              << "): " << o.summary << "\n";
    for (const auto& f : o.failures) std::cout << "    " << f << "\n";
    if (!o.ok) ++failed;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
