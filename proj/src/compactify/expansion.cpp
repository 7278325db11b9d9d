#include "ahe/compactify/compactify.hpp"

#include "ahe/error.hpp"
#include "ahe/numerics/fit.hpp"

#include <algorithm>
#include <cmath>

namespace ahe {

namespace {

constexpr std::size_t kComponents = 6;
constexpr std::array<std::pair<int, int>, kComponents> kPairs = {
    {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};

struct Grid {
  std::vector<double> t;
  std::vector<double> r;
};

Grid make_grid(const Compactification& c, const FGOptions& opt) {
  if (opt.points < 8) throw Error(ErrorCode::kInvalidParameter, "FG grid needs >= 8 points");
  if (!(opt.lo_fraction > 0 && opt.lo_fraction < opt.hi_fraction && opt.hi_fraction <= 0.25)) {
    throw Error(ErrorCode::kInvalidParameter, "FG grid must lie in (0, width/4]");
  }
  Grid g;
  g.t = fit::log_spaced(opt.lo_fraction * c.width(), opt.hi_fraction * c.width(), opt.points);
  g.r.reserve(g.t.size());
  for (double t : g.t) g.r.push_back(c.r_of_t(t));
  return g;
}

struct Coefficients {
  std::vector<Sym2<3>> by_power;  // one per basis power
  double residual = 0.0;
  double condition = 0.0;
};

Coefficients fit_at(const Compactification& c, const Grid& grid, const Point<3>& y,
                    const std::vector<int>& powers, double max_condition) {
  const auto& field = c.base().field;
  std::array<std::vector<double>, kComponents> values;
  for (auto& v : values) v.reserve(grid.t.size());
  for (std::size_t k = 0; k < grid.t.size(); ++k) {
    const auto g = field.components({grid.r[k], y[0], y[1], y[2]});
    const double t2 = grid.t[k] * grid.t[k];
    for (std::size_t m = 0; m < kComponents; ++m)
      values[m].push_back(t2 * g[kPairs[m].first + 1][kPairs[m].second + 1]);
  }
  const auto basis = fit::powers(powers);
  Coefficients out;
  out.by_power.assign(powers.size(), Sym2<3>::Zero());
  double res2 = 0.0, norm2 = 0.0;
  for (std::size_t m = 0; m < kComponents; ++m) {
    const auto f = fit::least_squares(grid.t, values[m], basis, max_condition);
    out.condition = std::max(out.condition, f.condition);
    for (std::size_t p = 0; p < powers.size(); ++p) {
      const auto [i, j] = kPairs[m];
      out.by_power[p](i, j) = f.coefficients[static_cast<Eigen::Index>(p)];
      out.by_power[p](j, i) = f.coefficients[static_cast<Eigen::Index>(p)];
    }
    double yn = 0.0;
    for (double v : values[m]) yn += v * v;
    res2 += f.relative_residual * f.relative_residual * (yn > 0 ? yn : 1.0);
    norm2 += yn;
  }
  out.residual = std::sqrt(res2 / std::max(norm2, 1e-300));
  return out;
}

std::size_t index_of(const std::vector<int>& powers, int p) {
  const auto it = std::find(powers.begin(), powers.end(), p);
  if (it == powers.end()) {
    throw Error(ErrorCode::kInvalidParameter, "FG basis must contain t^0, t^2 and t^3");
  }
  return static_cast<std::size_t>(it - powers.begin());
}

double gamma_norm(const Sym2<3>& t, const Sym2<3>& gamma_inv) {
  return std::sqrt(std::max(0.0, norm_sq<3>(t, gamma_inv)));
}

}  // namespace

FGExpansion fg_expand(const Compactification& c, const std::vector<Point<3>>& ys,
                      const FGOptions& opt) {
  const Grid grid = make_grid(c, opt);
  const std::size_t i0 = index_of(opt.powers, 0), i2 = index_of(opt.powers, 2),
                    i3 = index_of(opt.powers, 3);
  if (std::find(opt.powers.begin(), opt.powers.end(), 1) != opt.powers.end()) {
    throw Error(ErrorCode::kInvalidParameter, "FG basis has no odd term below t^3");
  }
  auto with_odd = opt.powers;
  with_odd.push_back(1);
  std::sort(with_odd.begin(), with_odd.end());
  const std::size_t i1 = index_of(with_odd, 1);

  FGExpansion out;
  out.t_grid = grid.t;
  out.powers = opt.powers;
  for (const auto& y : ys) {
    FGPoint fp;
    fp.y = y;
    const auto bundle = curvature_at<3>(c.boundary_metric(), y);
    fp.gamma = bundle.g;
    const auto coef = fit_at(c, grid, y, opt.powers, opt.max_condition);
    fp.g0 = coef.by_power[i0];
    fp.g2 = coef.by_power[i2];
    fp.g3 = coef.by_power[i3];
    fp.fit_residual = coef.residual;
    fp.condition = coef.condition;
    fp.g1_norm = gamma_norm(fit_at(c, grid, y, with_odd, opt.max_condition).by_power[i1],
                            bundle.g_inv);
    fp.trace_g3 = (bundle.g_inv * fp.g3).trace();
    fp.norm_g3 = gamma_norm(fp.g3, bundle.g_inv);
    fp.g0_error = gamma_norm(fp.g0 - fp.gamma, bundle.g_inv);

    // div_γ g3 by central differences of the fitted coefficient.
    std::array<Sym2<3>, 3> dg3;
    const double h = opt.div_step;
    for (std::size_t k = 0; k < 3; ++k) {
      Point<3> yp = y, ym = y;
      yp[k] += h;
      ym[k] -= h;
      const auto cp = fit_at(c, grid, yp, opt.powers, opt.max_condition).by_power[i3];
      const auto cm = fit_at(c, grid, ym, opt.powers, opt.max_condition).by_power[i3];
      dg3[k] = (cp - cm) / (2.0 * h);
    }
    Vec<3> div = Vec<3>::Zero();
    const auto& gam = bundle.christoffel;
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
          double cov = dg3[k](i, j);
          for (int l = 0; l < 3; ++l)
            cov -= gam(l, k, i) * fp.g3(l, j) + gam(l, k, j) * fp.g3(i, l);
          div(j) += bundle.g_inv(i, k) * cov;
        }
    fp.div_g3 = std::sqrt(std::max(0.0, div.dot(bundle.g_inv * div)));

    out.fit_residual = std::max(out.fit_residual, fp.fit_residual);
    out.max_trace = std::max(out.max_trace, std::abs(fp.trace_g3));
    out.max_div = std::max(out.max_div, fp.div_g3);
    out.max_g0_error = std::max(out.max_g0_error, fp.g0_error);
    out.max_g1 = std::max(out.max_g1, fp.g1_norm);
    out.points.push_back(fp);
  }
  return out;
}

Sym2<3> g2_closed_form(const MetricField<3>& gamma, const Point<3>& y) {
  const auto b = curvature_at<3>(gamma, y);
  return kG2Sign * (b.ricci - (b.scalar / 4.0) * b.g);
}

G2Calibration calibrate_g2_sign() {
  const auto c = geodesic_compactify(poincare_ball());
  const auto e = fg_expand(c, boundary_samples(c, 4));
  G2Calibration out;
  for (const auto& p : e.points) {
    const auto b = curvature_at<3>(c.boundary_metric(), p.y);
    const Sym2<3> base = b.ricci - (b.scalar / 4.0) * b.g;
    out.residual_minus = std::max(out.residual_minus, gamma_norm(p.g2 + base, b.g_inv));
    out.residual_plus = std::max(out.residual_plus, gamma_norm(p.g2 - base, b.g_inv));
  }
  out.sign = out.residual_minus < out.residual_plus ? -1.0 : 1.0;
  return out;
}

double g2_pipeline_residual(const Compactification& c, const FGExpansion& e) {
  double worst = 0.0;
  for (const auto& p : e.points) {
    const Sym2<3> closed = g2_closed_form(c.boundary_metric(), p.y);
    worst = std::max(worst, gamma_norm(p.g2 - closed, p.gamma.inverse()));
  }
  return worst;
}

RicciDerivativeG3 g3_from_ricci(const Compactification& c, const Point<3>& y,
                                const FGOptions& opt) {
  const auto ts = fit::log_spaced(0.004 * c.width(), 0.05 * c.width(), 9);
  std::array<std::vector<double>, kComponents> values;
  for (double t : ts) {
    const auto b = curvature_at<4>(c.compactified_field(), c.point(t, y));
    for (std::size_t m = 0; m < kComponents; ++m)
      values[m].push_back(b.ricci(kPairs[m].first + 1, kPairs[m].second + 1));
  }
  const auto basis = fit::powers({0, 1, 2, 3, 4});
  Sym2<3> slope = Sym2<3>::Zero();
  for (std::size_t m = 0; m < kComponents; ++m) {
    const auto f = fit::least_squares(ts, values[m], basis);
    const auto [i, j] = kPairs[m];
    slope(i, j) = slope(j, i) = f.coefficients[1];
  }
  RicciDerivativeG3 out;
  out.from_ricci = -slope / 3.0;
  const auto e = fg_expand(c, {y}, opt);
  out.fitted = e.points[0].g3;
  const Sym2<3> gi = e.points[0].gamma.inverse();
  out.residual = gamma_norm(out.from_ricci - out.fitted, gi);
  out.norm_fitted = gamma_norm(out.fitted, gi);
  out.sixth_normal_ratio =
      out.norm_fitted > 0 ? gamma_norm(slope / 6.0, gi) / out.norm_fitted : 0.0;
  return out;
}

ConformalRuleReport conformal_rule_check(const CatalogMetric& metric, double lambda,
                                         std::size_t boundary_points, const FGOptions& opt) {
  if (!(lambda > 0)) throw Error(ErrorCode::kInvalidParameter, "lambda must be positive");
  const auto c1 = geodesic_compactify(metric, 1.0);
  const auto cl = geodesic_compactify(metric, lambda);
  const auto ys = boundary_samples(c1, boundary_points);
  const auto e1 = fg_expand(c1, ys, opt);
  const auto el = fg_expand(cl, ys, opt);
  ConformalRuleReport out;
  out.lambda = lambda;
  out.expected_ratio = std::pow(lambda, -3.0);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const auto& a = e1.points[i];
    const auto& b = el.points[i];
    num += b.norm_g3;
    den += a.norm_g3;
    out.max_norm = std::max(out.max_norm, a.norm_g3);
    out.tensor_residual = std::max(
        out.tensor_residual, gamma_norm(b.g3 - a.g3 / lambda, b.gamma.inverse()));
  }
  out.norm_ratio = den > 1e-9 ? num / den : 0.0;
  return out;
}

}  // namespace ahe
