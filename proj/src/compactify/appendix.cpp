#include "ahe/compactify/compactify.hpp"

#include "ahe/error.hpp"
#include "ahe/numerics/fit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace ahe {

namespace {

constexpr double kN = 3.0;  // boundary dimension
constexpr double kIdentityTol = 1e-5;

double frame_norm(const Sym2<4>& t, const Sym2<4>& g_inv) {
  return std::sqrt(std::max(0.0, norm_sq<4>(t, g_inv)));
}

struct RhoData {
  CurvatureBundle<4> bar;
  HessianLaplacian<4> hl;
  double rho = 0.0;
  double grad_sq = 0.0;  // |∇̄ρ|^2_ḡ
};

RhoData rho_data(const MetricField<4>& bar_field, const ScalarField<4>& rho, const Point<4>& p) {
  RhoData d;
  d.bar = curvature_at<4>(bar_field, p);
  const Jet<4> j = rho.jet(p);
  d.hl = hessian_and_laplacian<4>(d.bar, j);
  d.rho = j.v;
  d.grad_sq = d.hl.gradient.dot(d.bar.g_inv * d.hl.gradient);
  return d;
}

// Max residuals of the three conformal-change relations at p.
struct ConformalResiduals {
  double sectional = 0.0, ricci = 0.0, scalar = 0.0, log_gradient = 0.0;
};

ConformalResiduals conformal_residuals(const CatalogMetric& base, const MetricField<4>& bar_field,
                                       const ScalarField<4>& rho, const Point<4>& p) {
  const RhoData d = rho_data(bar_field, rho, p);
  const auto g = curvature_at<4>(base.field, p);
  ConformalResiduals out;
  const Sym2<4> e = orthonormal_frame<4>(d.bar.g);
  const double inv2 = 1.0 / (d.rho * d.rho);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      const Vec<4> ea = e.col(a), eb = e.col(b);
      const double kbar = sectional<4>(d.bar, ea, eb);
      const double k = sectional<4>(g, ea, eb);
      const double hess = ea.dot(d.hl.hessian * ea) + eb.dot(d.hl.hessian * eb);
      const double rhs = (k + d.grad_sq) * inv2 - hess / d.rho;
      out.sectional = std::max(out.sectional, std::abs(kbar - rhs) / std::max(1.0, std::abs(kbar)));
    }
  const double gradient_term = kN * inv2 * (d.grad_sq - 1.0);
  const Sym2<4> ric_rhs = -(kN - 1.0) * d.hl.hessian / d.rho +
                          (gradient_term - d.hl.laplacian / d.rho) * d.bar.g;
  out.ricci = frame_norm(d.bar.ricci - ric_rhs, d.bar.g_inv) /
              std::max(1.0, frame_norm(d.bar.ricci, d.bar.g_inv));
  const double s_rhs =
      -2.0 * kN * d.hl.laplacian / d.rho + kN * (kN + 1.0) * inv2 * (d.grad_sq - 1.0);
  out.scalar = std::abs(d.bar.scalar - s_rhs) / std::max(1.0, std::abs(d.bar.scalar));
  // |∇̄ρ|_ḡ against |∇r|_g for r = -log ρ.
  const Jet<4> r = -log(rho.jet(p));
  Vec<4> dr;
  for (int i = 0; i < 4; ++i) dr(i) = r.d[static_cast<std::size_t>(i)];
  const double grad_r = std::sqrt(dr.dot(g.g_inv * dr));
  out.log_gradient = std::abs(std::sqrt(d.grad_sq) - grad_r);
  return out;
}

// Geodesic quantities of the level sets of t at a bulk point.
struct LevelSetData {
  CurvatureBundle<4> bar;
  double t = 0.0;
  double mean = 0.0;      // H̄ = Δ̄t
  double a_sq = 0.0;      // |Ā|^2 = |D̄^2 t|^2
  double ric_nn = 0.0;    // R̄ic(N, N)
  Vec<4> normal;          // N = ∇̄t
  double grad_sq = 0.0;
};

LevelSetData level_set(const Compactification& c, const Point<4>& p) {
  LevelSetData d;
  d.bar = curvature_at<4>(c.compactified_field(), p);
  const Jet<4> tj = c.defining_function().jet(p);
  const auto hl = hessian_and_laplacian<4>(d.bar, tj);
  d.t = tj.v;
  d.mean = hl.laplacian;
  d.a_sq = norm_sq<4>(hl.hessian, d.bar.g_inv);
  d.normal = d.bar.g_inv * hl.gradient;
  d.ric_nn = d.normal.dot(d.bar.ricci * d.normal);
  d.grad_sq = hl.gradient.dot(d.normal);
  return d;
}

// d/dt along a t-geodesic by Richardson-extrapolated central differences in t
// (r is not a smooth function of distance at a bolt).
double t_derivative(const Compactification& c, const std::function<double(double)>& f_of_r,
                    double t, double h) {
  auto f = [&](double s) { return f_of_r(c.r_of_t(s)); };
  auto central = [&](double s) { return (f(t + s) - f(t - s)) / (2.0 * s); };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

// Value at t = 0 from samples at small t (polynomial extrapolation).
double extrapolate(const std::vector<double>& ts, const std::vector<double>& v) {
  return fit::least_squares(ts, v, fit::powers({0, 1, 2, 3, 4})).coefficients[0];
}

std::vector<double> boundary_ts(const Compactification& c) {
  return fit::log_spaced(0.005 * c.width(), 0.04 * c.width(), 7);
}

Check identity(const std::string& id, const std::string& anchor, double residual,
               const std::string& note = {}) {
  return make_check(id, anchor, residual, 0.0, residual, kIdentityTol, note);
}

}  // namespace

double boundary_scalar_curvature(const Compactification& c, const Point<3>& y) {
  const auto ts = boundary_ts(c);
  std::vector<double> s;
  for (double t : ts) s.push_back(curvature_at<4>(c.compactified_field(), c.point(t, y)).scalar);
  return extrapolate(ts, s);
}

std::vector<Check> appendix_suite(const Compactification& c, const AppendixOptions& opt) {
  const auto& base = c.base();
  const auto ys = boundary_samples(c, opt.angle_points);
  const auto ts = fit::log_spaced(0.01 * c.width(), 0.8 * c.width(), static_cast<int>(opt.t_points));
  const ScalarField<4> rho = perturbed_defining_function(c, opt.perturbation);
  const MetricField<4> rho_field = conformal_metric(base, rho);

  // Conformal relations, gradient identities, for t and for ρ.
  ConformalResiduals worst;
  double unit_gradient = 0.0;
  for (const auto& y : ys)
    for (double t : ts) {
      const Point<4> p = c.point(t, y);
      for (int which = 0; which < 2; ++which) {
        const auto r = which == 0
                           ? conformal_residuals(base, c.compactified_field(), c.defining_function(), p)
                           : conformal_residuals(base, rho_field, rho, p);
        worst.sectional = std::max(worst.sectional, r.sectional);
        worst.ricci = std::max(worst.ricci, r.ricci);
        worst.scalar = std::max(worst.scalar, r.scalar);
        worst.log_gradient = std::max(worst.log_gradient, r.log_gradient);
      }
      unit_gradient = std::max(unit_gradient, std::abs(std::sqrt(level_set(c, p).grad_sq) - 1.0));
    }

  // |∇̄ρ| at the boundary for both defining functions.
  double gradient_limit = 0.0;
  const auto bts = boundary_ts(c);
  for (const auto& y : ys) {
    std::vector<double> gt, gr;
    for (double t : bts) {
      const Point<4> p = c.point(t, y);
      gt.push_back(std::sqrt(rho_data(c.compactified_field(), c.defining_function(), p).grad_sq));
      gr.push_back(std::sqrt(rho_data(rho_field, rho, p).grad_sq));
    }
    gradient_limit = std::max({gradient_limit, std::abs(extrapolate(bts, gt) - 1.0),
                               std::abs(extrapolate(bts, gr) - 1.0)});
  }

  // Riccati equation and the scalar-curvature derivative along t-geodesics.
  const auto geodesic_ys = boundary_samples(c, opt.geodesics, 101);
  // s̄ carries O(t^-2) cancellation; differencing it below 0.05 w is roundoff-limited.
  const auto dts = fit::log_spaced(0.05 * c.width(), 0.8 * c.width(), static_cast<int>(opt.t_points));
  double riccati = 0.0, scalar_derivative = 0.0, inequality_margin = INFINITY;
  double sampled_t_max = 0.0;
  const double h = opt.fd_step * c.width();
  for (const auto& y : geodesic_ys)
    for (double t : dts) {
      const Point<4> p = c.point(t, y);
      const auto d = level_set(c, p);
      auto at_r = [&](double rr) { return level_set(c, {rr, y[0], y[1], y[2]}); };
      const double dmean = t_derivative(c, [&](double rr) { return at_r(rr).mean; }, t, h);
      const double dscalar = t_derivative(c, [&](double rr) { return at_r(rr).bar.scalar; }, t, h);
      riccati = std::max(riccati, std::abs(dmean + d.a_sq + d.ric_nn) /
                                      std::max(1.0, std::abs(d.ric_nn)));
      const double rhs = 2.0 * kN * d.a_sq / d.t;
      scalar_derivative =
          std::max(scalar_derivative, std::abs(dscalar - rhs) / std::max(1.0, std::abs(rhs)));
      const double lower = d.t * d.bar.scalar * d.bar.scalar / (2.0 * kN * kN);
      inequality_margin = std::min(
          {inequality_margin, (rhs - lower) / std::max(1.0, rhs), rhs / std::max(1.0, rhs)});
      sampled_t_max = std::max(sampled_t_max, d.t);
    }

  // Boundary curvature identities.
  double boundary_scalar = 0.0, mixed = 0.0, tangential = 0.0;
  double s_bar_min = INFINITY, s_gamma_min = INFINITY;
  for (const auto& y : ys) {
    std::vector<double> s, rnn;
    std::array<std::vector<double>, 3> rnx;
    std::array<std::array<std::vector<double>, 3>, 3> rt;
    for (double t : bts) {
      const auto d = level_set(c, c.point(t, y));
      s.push_back(d.bar.scalar);
      rnn.push_back(d.ric_nn);
      for (int j = 0; j < 3; ++j) {
        const double len = std::sqrt(d.bar.g(j + 1, j + 1));
        rnx[j].push_back(d.normal.dot(d.bar.ricci.col(j + 1)) / len);
        for (int k = 0; k < 3; ++k) rt[j][k].push_back(d.bar.ricci(j + 1, k + 1));
      }
    }
    const auto gamma = curvature_at<3>(c.boundary_metric(), y);
    const double s0 = extrapolate(bts, s);
    const double ricnn0 = extrapolate(bts, rnn);
    boundary_scalar = std::max(
        boundary_scalar, std::max(std::abs(s0 - 2.0 * kN * ricnn0),
                                  std::abs(s0 - kN / (kN - 1.0) * gamma.scalar)) /
                             std::max(1.0, std::abs(s0)));
    for (int j = 0; j < 3; ++j) mixed = std::max(mixed, std::abs(extrapolate(bts, rnx[j])));
    Sym2<3> ric0;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) ric0(j, k) = extrapolate(bts, rt[j][k]);
    const Sym2<3> expected = ((kN - 1.0) * gamma.ricci -
                              gamma.scalar / (2.0 * (kN - 1.0)) * gamma.g) / (kN - 2.0);
    const double en = std::sqrt(std::max(0.0, norm_sq<3>(expected, gamma.g_inv)));
    tangential = std::max(tangential, std::sqrt(std::max(0.0, norm_sq<3>(ric0 - expected, gamma.g_inv))) /
                                          std::max(1.0, en));
    s_bar_min = std::min(s_bar_min, s0);
    s_gamma_min = std::min(s_gamma_min, gamma.scalar);
  }

  std::vector<Check> out;
  const std::string both = "defining functions t and t(1 + a t^2)";
  out.push_back(identity("conformal-sectional", "conformal change of sectional curvature",
                         worst.sectional, both));
  out.push_back(identity("conformal-ricci", "conformal change of Ricci curvature (Einstein form)",
                         worst.ricci, both));
  out.push_back(identity("conformal-scalar", "conformal change of scalar curvature", worst.scalar,
                         both));
  out.push_back(identity("gradient-boundary-limit", "|grad rho| -> 1 at the boundary",
                         gradient_limit, both));
  out.push_back(identity("gradient-log-distance", "|grad rho|_gbar = |grad r|_g, r = -log rho",
                         worst.log_gradient, both));
  out.push_back(identity("geodesic-unit-gradient", "|grad t|_gbar = 1", unit_gradient));
  out.push_back(identity("riccati", "H' + |A|^2 + Ric(N,N) = 0 along t-geodesics", riccati));
  out.push_back(identity("boundary-scalar", "s = 2n Ric(N,N) = n/(n-1) s_gamma at the boundary",
                         boundary_scalar));
  out.push_back(identity("boundary-mixed-ricci", "Ric(N,X) = 0 at the boundary", mixed));
  out.push_back(identity("boundary-tangential-ricci",
                         "Ric^T = ((n-1) Ric_gamma - s_gamma/(2(n-1)) gamma)/(n-2) at the boundary",
                         tangential));
  out.push_back(identity("scalar-derivative", "s' = 2n t^{-1} |D^2 t|^2", scalar_derivative));
  {
    Check ineq = make_check("scalar-derivative-lower-bound",
                            "2n t^{-1} |D^2 t|^2 >= t s^2 / (2 n^2) >= 0", inequality_margin, 0.0,
                            std::max(0.0, -inequality_margin), 1e-9,
                            "value: smallest normalized margin over samples");
    out.push_back(ineq);
  }
  if (s_bar_min > 0) {
    const double bound = 4.0 * kN * kN / s_bar_min;
    const double w2 = c.width() * c.width();
    Check ineq = make_check("width-scalar-bound", "t^2 < 4n^2 / s(0) when s(0) > 0", w2, bound,
                            std::max(0.0, w2 - bound), 1e-8,
                            "value: width^2; largest sampled t^2 = " +
                                std::to_string(sampled_t_max * sampled_t_max));
    if (!(sampled_t_max * sampled_t_max < bound)) ineq.status = Status::kFail;
    out.push_back(ineq);
  } else {
    Check info;
    info.id = "width-scalar-bound";
    info.anchor = "t^2 < 4n^2 / s(0) when s(0) > 0";
    info.value = s_bar_min;
    info.note = "not applicable: boundary scalar curvature is not positive";
    out.push_back(info);
  }
  if (s_gamma_min > 1e-12) {
    const double bound = std::sqrt(3.0) * std::numbers::pi / std::sqrt(s_gamma_min);
    out.push_back(make_check("width-bound", "width <= sqrt(3) pi / sqrt(min s_gamma)", c.width(),
                             bound, std::max(0.0, c.width() - bound), 1e-8));
  } else {
    Check info;
    info.id = "width-bound";
    info.anchor = "width <= sqrt(3) pi / sqrt(min s_gamma)";
    info.value = c.width();
    info.note = "not applicable: min s_gamma <= 0";
    out.push_back(info);
  }
  return out;
}

}  // namespace ahe
