#include "ahe/moduli/moduli.hpp"

#include "ahe/error.hpp"
#include "ahe/numerics/fit.hpp"
#include "ahe/numerics/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ahe {

namespace {

constexpr double kPi = std::numbers::pi;

double mass_of_rplus(double r) { return 0.5 * (r * r * r + r); }

double value_tol(double v) { return 1e-10 * std::max(1.0, std::abs(v)); }

double step_at(const FamilyCurve& c, double p) {
  double h = 1e-3 * (1.0 + std::abs(p));
  h = std::min(h, 0.01 * (p - c.lo));
  if (std::isfinite(c.hi)) h = std::min(h, 0.01 * (c.hi - p));
  return h;
}

double second_derivative(const FamilyCurve& c, double p) {
  const double h = step_at(c, p);
  return (c.value(p + h) - 2.0 * c.value(p) + c.value(p - h)) / (h * h);
}

int sign(double x) { return (x > 0) - (x < 0); }

}  // namespace

double FamilyCurve::at(double u) const {
  if (std::isfinite(hi)) return lo + (hi - lo) * u;
  return lo + scale * u / (1.0 - u);
}

double FamilyCurve::to_unit(double p) const {
  if (std::isfinite(hi)) return (p - lo) / (hi - lo);
  const double x = (p - lo) / scale;
  return x / (1.0 + x);
}

FamilyCurve bolt_period_curve() {
  FamilyCurve c;
  c.id = "bolt-period";
  c.manifold = "R2xS2";
  c.parameter = "r_plus";
  c.invariant = "beta";
  c.formula = "4 pi r_plus / (1 + 3 r_plus^2)";
  c.lo = 0.0;
  c.value = beta_of_rplus;
  c.metric = [](double r) { return ads_schwarzschild(mass_of_rplus(r)); };
  return c;
}

FamilyCurve berger_curve(int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidParameter, "disc bundle degree must be >= 1");
  FamilyCurve c;
  c.id = "berger:k=" + std::to_string(k);
  c.manifold = k == 1 ? "CP2-B4" : "M" + std::to_string(k);
  c.parameter = "s";
  c.invariant = "E";
  c.formula = "(2 k s - 4) / (3 (s^2 - 1)), k = " + std::to_string(k);
  c.lo = k == 1 ? 2.0 : 1.0;
  c.value = [k](double s) { return e_param(s, k); };
  c.metric = [k](double s) { return taub_bolt(s, k); };
  return c;
}

FamilyCurve translation_curve() {
  FamilyCurve c;
  c.id = "translation";
  c.manifold = "S1xR3";
  c.parameter = "L";
  c.invariant = "L";
  c.formula = "L";
  c.lo = 0.0;
  c.value = [](double l) { return l; };
  c.metric = hyperbolic_quotient;
  return c;
}

const char* to_string(CriticalKind k) {
  switch (k) {
    case CriticalKind::kMaximum: return "fold (maximum)";
    case CriticalKind::kMinimum: return "fold (minimum)";
    case CriticalKind::kInflection: return "inflection";
  }
  return "inflection";
}

// Richardson-extrapolated central difference; `noise` is the change of the
// extrapolated value under step halving.
double derivative(const FamilyCurve& c, double p, double* noise) {
  const double h = step_at(c, p);
  auto central = [&](double s) { return (c.value(p + s) - c.value(p - s)) / (2.0 * s); };
  const double d1 = central(h), d2 = central(0.5 * h);
  const double fine = (4.0 * d2 - d1) / 3.0;
  if (noise) {
    const double d4 = central(0.25 * h);
    *noise = std::abs((4.0 * d4 - d2) / 3.0 - fine);
  }
  return fine;
}

double end_limit(const FamilyCurve& c, bool upper) {
  constexpr int kPoints = 8;
  constexpr double kDelta = 1e-3;
  std::vector<double> w, f;
  for (int j = 1; j <= kPoints; ++j) {
    const double x = kDelta * j;
    w.push_back(x);
    f.push_back(c.value(c.at(upper ? 1.0 - x : x)));
  }
  const auto fit = fit::least_squares(w, f, fit::powers({0, 1, 2, 3, 4, 5}), 1e12);
  // not polynomial in the distance to the end: the invariant diverges there
  if (fit.relative_residual > 1e-9) return sign(f.front()) * INFINITY;
  return fit.coefficients[0];
}

FoldReport fold_analysis(const FamilyCurve& c, const FoldOptions& opt) {
  if (opt.grid < 4) throw Error(ErrorCode::kInvalidParameter, "fold grid needs >= 4 points");
  FoldReport rep;
  rep.curve = c.id;
  rep.grid = opt.grid;
  std::vector<double> ps, ds;
  for (int i = 1; i < opt.grid; ++i) {
    const double p = c.at(static_cast<double>(i) / opt.grid);
    double noise = 0.0;
    const double d = derivative(c, p, &noise);
    if (!std::isfinite(d) || noise > opt.derivative_tol * std::max(1.0, std::abs(d))) {
      std::ostringstream msg;
      msg << c.id << ": derivative noise " << noise << " at " << c.parameter << " = " << p;
      throw Error(ErrorCode::kNoConvergence, msg.str());
    }
    ps.push_back(p);
    ds.push_back(d);
  }
  const auto slope = [&](double p) { return derivative(c, p); };
  const auto curvature = [&](double p) { return second_derivative(c, p); };
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    if (sign(ds[i]) * sign(ds[i + 1]) >= 0) continue;
    CriticalPoint cp;
    cp.parameter = roots::bracketed(slope, ps[i], ps[i + 1], 1e-14 * (1.0 + std::abs(ps[i])),
                                    curvature);
    cp.value = c.value(cp.parameter);
    cp.second_derivative = curvature(cp.parameter);
    if (std::abs(cp.second_derivative) <= opt.fold_tol) {
      cp.kind = CriticalKind::kInflection;
    } else {
      cp.kind = cp.second_derivative < 0 ? CriticalKind::kMaximum : CriticalKind::kMinimum;
    }
    rep.critical.push_back(cp);
  }

  rep.lo_limit = end_limit(c, false);
  rep.hi_limit = end_limit(c, true);
  rep.max_value = rep.lo_limit;
  rep.argmax = c.lo;
  rep.min_value = rep.lo_limit;
  rep.argmin = c.lo;
  auto consider = [&](double p, double v, bool attained) {
    if (v > rep.max_value) {
      rep.max_value = v;
      rep.argmax = p;
      rep.max_attained = attained;
    }
    if (v < rep.min_value) {
      rep.min_value = v;
      rep.argmin = p;
      rep.min_attained = attained;
    }
  };
  consider(c.hi, rep.hi_limit, false);
  for (std::size_t i = 0; i < ps.size(); ++i) consider(ps[i], c.value(ps[i]), true);
  for (const auto& cp : rep.critical) consider(cp.parameter, cp.value, true);
  return rep;
}

std::vector<Preimage> preimages(const FamilyCurve& c, double v) {
  return preimages(c, v, fold_analysis(c));
}

std::vector<Preimage> preimages(const FamilyCurve& c, double v, const FoldReport& folds) {
  struct Knot {
    double u;
    double value;
    bool end;
    bool hit;
  };
  const double tol = value_tol(v);
  std::vector<Preimage> out;
  std::vector<Knot> knots{{0.0, folds.lo_limit, true, false}};
  for (const auto& cp : folds.critical) {
    const bool hit = std::abs(cp.value - v) <= tol;
    if (hit) out.push_back({cp.parameter, true});
    knots.push_back({c.to_unit(cp.parameter), cp.value, false, hit});
  }
  knots.push_back({1.0, folds.hi_limit, true, false});

  const auto g = [&](double p) { return c.value(p) - v; };
  const auto dg = [&](double p) { return derivative(c, p); };
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const auto& a = knots[i];
    const auto& b = knots[i + 1];
    if (a.hit || b.hit) continue;
    const int sa = sign(a.value - v), sb = sign(b.value - v);
    if (sa * sb >= 0) continue;
    // open ends are approached until the invariant takes the limit's side
    auto inner = [&](const Knot& k, const Knot& other, int want) {
      if (!k.end) return c.at(k.u);
      for (int j = 1; j <= 60; ++j) {
        const double u = k.u + (other.u - k.u) * std::ldexp(1.0, -j);
        const double p = c.at(u);
        if (c.contains(p) && sign(g(p)) == want) return p;
      }
      return std::numeric_limits<double>::quiet_NaN();
    };
    const double pa = inner(a, b, sa), pb = inner(b, a, sb);
    if (!std::isfinite(pa) || !std::isfinite(pb)) continue;
    const double p = roots::bracketed(g, pa, pb, 1e-14 * (1.0 + std::abs(pa) + std::abs(pb)), dg);
    if (std::abs(g(p)) > tol) {
      std::ostringstream msg;
      msg << c.id << ": preimage of " << v << " not resolved, residual " << g(p);
      throw Error(ErrorCode::kNoConvergence, msg.str());
    }
    out.push_back({p, false});
  }
  std::sort(out.begin(), out.end(),
            [](const Preimage& x, const Preimage& y) { return x.parameter < y.parameter; });
  std::vector<Preimage> distinct;
  for (const auto& p : out) {
    if (!distinct.empty() && std::abs(p.parameter - distinct.back().parameter) <= 1e-8) continue;
    distinct.push_back(p);
  }
  return distinct;
}

IndexRule bolt_period_index() {
  const double m0 = mass_of_rplus(1.0 / std::sqrt(3.0));
  return [m0](double r) -> std::optional<int> {
    const double m = mass_of_rplus(r);
    if (std::abs(m - m0) <= 1e-12) return std::nullopt;
    return m < m0 ? 1 : 0;
  };
}

IndexRule trivial_index() {
  return [](double) -> std::optional<int> { return 0; };
}

IndexRule fold_index(double fold_parameter) {
  return [fold_parameter](double p) -> std::optional<int> {
    if (std::abs(p - fold_parameter) <= 1e-12 * (1.0 + std::abs(p))) return std::nullopt;
    return p < fold_parameter ? 1 : 0;
  };
}

DegreeReport degree(std::string manifold, std::string boundary, double value,
                    const std::vector<Preimage>& pre, const IndexRule& rule) {
  DegreeReport rep;
  rep.manifold = std::move(manifold);
  rep.boundary = std::move(boundary);
  rep.regular_value = value;
  for (const auto& p : pre) {
    if (p.critical) {
      throw Error(ErrorCode::kInvalidParameter,
                  rep.manifold + ": boundary value is critical, degree undefined there");
    }
    const auto ind = rule ? rule(p.parameter) : std::nullopt;
    if (!ind) {
      std::ostringstream msg;
      msg << rep.manifold << ": no index for preimage " << p.parameter;
      throw Error(ErrorCode::kMissingIndex, msg.str());
    }
    rep.preimages.push_back(p.parameter);
    rep.indices.push_back(*ind);
    rep.degree += *ind % 2 == 0 ? 1 : -1;
  }
  rep.mod2 = static_cast<int>(rep.preimages.size() % 2);
  return rep;
}

OrbifoldReport orbifold_bound(int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidParameter, "k must be >= 1");
  OrbifoldReport rep;
  const long kk = k;
  rep.k = k;
  rep.eta = boost::rational<long>((kk - 1) * (kk - 2), 3 * kk);
  rep.ale_weyl_energy = boost::rational<long>(2) - boost::rational<long>(1, kk);
  rep.inequality_lhs = 4 * kk - 2;
  rep.inequality_rhs = std::abs(3 * kk - (kk - 1) * (kk - 2));
  rep.excluded = rep.inequality_lhs < rep.inequality_rhs;
  rep.nontrivial_group = k >= 2;
  return rep;
}

Witness nonsurjectivity_witness(const FamilyCurve& c, double v) {
  const auto f = fold_analysis(c);
  Witness w;
  w.value = v;
  w.sup = f.max_value;
  w.sup_parameter = f.argmax;
  w.sup_attained = f.max_attained;
  w.outside_image = v > f.max_value || (!f.max_attained && std::abs(v - f.max_value) <= value_tol(v));
  return w;
}

std::vector<DegreeEntry> catalog_degrees(const std::vector<int>& bundle_degrees) {
  std::vector<DegreeEntry> out;
  // the hyperbolic metric is the only filling of the round sphere
  out.push_back({degree("B4", "S3(1)", 1.0, {{0.0, false}}, trivial_index()),
                 "ball: unique non-degenerate hyperbolic filling", "single preimage, index 0"});

  const auto beta = bolt_period_curve();
  out.push_back({degree("R2xS2", "S1(pi)xS2(1)", kPi, preimages(beta, kPi), bolt_period_index()),
                 "R2xS2: index data on the fold pair of AdS-Schwarzschild",
                 "index sum over the two preimages"});

  const auto trans = translation_curve();
  out.push_back({degree("S1xR3", "S1(pi)xS2(1)", kPi, preimages(trans, kPi), trivial_index()),
                 "S1xR3: hyperbolic quotients are the unique fillings",
                 "single preimage, index 0"});

  const auto cp2 = berger_curve(1);
  out.push_back({degree("CP2-B4", "S3(1)", 1.0, preimages(cp2, 1.0), trivial_index()),
                 "CP2 minus a ball: round sphere outside the Taub-Bolt image",
                 "empty preimage"});

  for (int k : bundle_degrees) {
    if (k < 10) throw Error(ErrorCode::kInvalidParameter, "disc bundle entries need k >= 10");
    const auto curve = berger_curve(k);
    out.push_back({degree(curve.manifold, "S3(1)/Z" + std::to_string(k), 1.0,
                          preimages(curve, 1.0), trivial_index()),
                   "degree-k disc bundle: monotone Taub-Bolt curve, no orbifold limits",
                   "single preimage, index 0"});
  }
  return out;
}

Check fold_mass_check(const FoldReport& f) {
  const CriticalPoint* fold = nullptr;
  for (const auto& cp : f.critical)
    if (cp.kind == CriticalKind::kMaximum) fold = &cp;
  if (!fold) throw Error(ErrorCode::kInvalidParameter, f.curve + " has no fold maximum");
  const double m = mass_of_rplus(fold->parameter);
  const double root_relation = 2.0 / (3.0 * std::sqrt(3.0));
  const double quoted = 2.0 / std::sqrt(3.0);
  auto c = compare("fold-mass", "mass at the bolt-period fold from r^3 + r = 2m", m,
                   root_relation, 1e-10);
  if (c.status == Status::kPass && std::abs(m - quoted) > 1e-3) {
    c.status = Status::kPassDiscrepancy;
    std::ostringstream note;
    note << "quoted m0 = 2/sqrt(3) = " << quoted << " gives r_+ = " << r_plus(quoted)
         << ", not 1/sqrt(3)";
    c.note = note.str();
  }
  return c;
}

}  // namespace ahe
