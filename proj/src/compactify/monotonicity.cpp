#include "ahe/compactify/compactify.hpp"

#include "ahe/error.hpp"
#include "ahe/numerics/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ahe {

namespace {

// Geodesic x(s) with three Jacobi fields ξ_a (ξ_a(0) = 0, ξ_a'(0) = e_a) and
// the accumulated volume ∫ J ds.
struct JacobiState {
  Vec<4> x, v;
  std::array<Vec<4>, 3> xi, eta;
  double volume = 0.0;
};

JacobiState axpy(const JacobiState& a, const JacobiState& d, double h) {
  JacobiState out = a;
  out.x += h * d.x;
  out.v += h * d.v;
  for (int k = 0; k < 3; ++k) {
    out.xi[k] += h * d.xi[k];
    out.eta[k] += h * d.eta[k];
  }
  out.volume += h * d.volume;
  return out;
}

Point<4> as_point(const Vec<4>& x) { return {x(0), x(1), x(2), x(3)}; }

double jacobian(const Sym2<4>& g, const JacobiState& s) {
  Sym2<4> m;
  for (int k = 0; k < 3; ++k) m.col(k) = s.xi[k];
  m.col(3) = s.v;
  return std::sqrt(g.determinant()) * std::abs(m.determinant());
}

JacobiState rhs(const MetricField<4>& field, const JacobiState& s) {
  const Point<4> p = as_point(s.x);
  if (!field.patch().contains(p)) {
    throw Error(ErrorCode::kOutOfRange, "geodesic exits the coordinate domain");
  }
  const auto b = curvature_at<4>(field, p);
  JacobiState d;
  d.x = s.v;
  auto gamma = [&](const Vec<4>& u, const Vec<4>& w) {
    Vec<4> out = Vec<4>::Zero();
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(k) += b.christoffel(k, i, j) * u(i) * w(j);
    return out;
  };
  d.v = -gamma(s.v, s.v);
  for (int a = 0; a < 3; ++a) {
    d.xi[a] = s.eta[a];
    Vec<4> dg = Vec<4>::Zero();
    for (int m = 0; m < 4; ++m) {
      if (s.xi[a](m) == 0.0) continue;
      const auto& dm = b.d_christoffel[static_cast<std::size_t>(m)];
      for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) dg(k) += dm(k, i, j) * s.xi[a](m) * s.v(i) * s.v(j);
    }
    d.eta[a] = -dg - 2.0 * gamma(s.v, s.eta[a]);
  }
  d.volume = jacobian(b.g, s);
  return d;
}

JacobiState rk4(const MetricField<4>& field, const JacobiState& s, double h) {
  const auto k1 = rhs(field, s);
  const auto k2 = rhs(field, axpy(s, k1, 0.5 * h));
  const auto k3 = rhs(field, axpy(s, k2, 0.5 * h));
  const auto k4 = rhs(field, axpy(s, k3, h));
  JacobiState out = axpy(s, k1, h / 6.0);
  out = axpy(out, k2, h / 3.0);
  out = axpy(out, k3, h / 3.0);
  return axpy(out, k4, h / 6.0);
}

// Hopf coordinates: uniform directions on S^3 from points of the unit cube.
Vec<4> sphere_point(const std::array<double, 3>& u) {
  const double a = std::sqrt(1.0 - u[0]), b = std::sqrt(u[0]);
  const double p = 2.0 * std::numbers::pi * u[1], q = 2.0 * std::numbers::pi * u[2];
  return {a * std::cos(p), a * std::sin(p), b * std::cos(q), b * std::sin(q)};
}

// ∫_0^s sinh^3
double hyperbolic_ball(double s) {
  const double c = std::cosh(s);
  return c * c * c / 3.0 - c + 2.0 / 3.0;
}

}  // namespace

MonotonicityReport jacobian_monotonicity(const Compactification& c,
                                         const MonotonicityOptions& opt) {
  if (opt.geodesics == 0 || opt.steps < 2 || opt.substeps == 0) {
    throw Error(ErrorCode::kInvalidParameter, "monotonicity grid is empty");
  }
  if (!(opt.t_max_fraction > 0 && opt.t_max_fraction < 1)) {
    throw Error(ErrorCode::kInvalidParameter, "t_max_fraction must lie in (0, 1)");
  }
  MonotonicityReport rep;
  rep.geodesics = opt.geodesics;
  rep.steps = opt.steps;

  // Boundary Jacobian J̄ = sqrt(det g_t / det γ) against τ0^n (1 - (t/τ0)^2)^n.
  const double tau0 = c.width();
  const auto& base = c.base();
  rep.boundary_ratio_min = INFINITY;
  rep.boundary_ratio_max = -INFINITY;
  for (const auto& y : boundary_samples(c, opt.geodesics)) {
    const double det_gamma = to_matrix<3>(c.boundary_metric().components(y)).determinant();
    double prev = NAN;
    for (std::size_t k = 1; k <= opt.steps; ++k) {
      const double t = opt.t_max_fraction * tau0 * static_cast<double>(k) / opt.steps;
      const auto g = base.field.components(c.point(t, y));
      Sym2<3> gt;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) gt(i, j) = t * t * g[i + 1][j + 1];
      const double jbar = std::sqrt(gt.determinant() / det_gamma);
      const double model = std::pow(tau0 * (1.0 - (t / tau0) * (t / tau0)), 3.0);
      const double ratio = jbar / model;
      rep.boundary_ratio_min = std::min(rep.boundary_ratio_min, ratio);
      rep.boundary_ratio_max = std::max(rep.boundary_ratio_max, ratio);
      if (k > 1) rep.boundary_worst_step = std::min(rep.boundary_worst_step, (ratio - prev) / prev);
      prev = ratio;
    }
  }
  rep.boundary_ok = rep.boundary_worst_step >= -opt.tolerance;

  // Interior Bishop-Gromov comparison against hyperbolic space, Ric = -3g.
  Point<4> center = base.orbit_point(c.r_of_t(tau0 * std::exp(-opt.center_offset)));
  for (std::size_t k = 1; k < 4; ++k)
    center[k] = 0.5 * (base.sample_box.lower[k] + base.sample_box.upper[k]);
  const Sym2<4> g0 = to_matrix<4>(base.field.components(center));
  const Sym2<4> frame = orthonormal_frame<4>(g0);
  const double h = opt.ball_radius / static_cast<double>(opt.steps * opt.substeps);
  std::vector<double> ball(opt.steps + 1, 0.0);
  for (std::size_t gi = 0; gi < opt.geodesics; ++gi) {
    const Vec<4> dir = frame * sphere_point(halton<3>(gi + 1));
    // Orthonormal complement of dir, via the frame in g0.
    Sym2<4> basis;
    basis.col(0) = dir;
    int filled = 1;
    for (int j = 0; j < 4 && filled < 4; ++j) {
      Vec<4> e = frame.col(j);
      for (int i = 0; i < filled; ++i) e -= (basis.col(i).dot(g0 * e)) * basis.col(i);
      const double n = std::sqrt(e.dot(g0 * e));
      if (n < 1e-6) continue;
      basis.col(filled++) = e / n;
    }
    JacobiState s;
    s.x = Vec<4>(center[0], center[1], center[2], center[3]);
    s.v = dir;
    for (int a = 0; a < 3; ++a) {
      s.xi[a] = Vec<4>::Zero();
      s.eta[a] = basis.col(a + 1);
    }
    double prev = NAN;
    for (std::size_t k = 1; k <= opt.steps; ++k) {
      for (std::size_t sub = 0; sub < opt.substeps; ++sub) s = rk4(base.field, s, h);
      const double r = opt.ball_radius * static_cast<double>(k) / opt.steps;
      const Sym2<4> g = to_matrix<4>(base.field.components(as_point(s.x)));
      const double sh = std::sinh(r);
      const double ratio = jacobian(g, s) / (sh * sh * sh);
      if (k > 1) rep.jacobi_worst_step = std::max(rep.jacobi_worst_step, (ratio - prev) / prev);
      prev = ratio;
      ball[k] += s.volume / opt.geodesics;
    }
  }
  rep.ball_ratio_min = INFINITY;
  rep.ball_ratio_max = -INFINITY;
  for (std::size_t k = 1; k <= opt.steps; ++k) {
    const double ratio = ball[k] / hyperbolic_ball(opt.ball_radius * static_cast<double>(k) / opt.steps);
    rep.ball_ratio_min = std::min(rep.ball_ratio_min, ratio);
    rep.ball_ratio_max = std::max(rep.ball_ratio_max, ratio);
    if (k > 1) {
      const double prev = ball[k - 1] / hyperbolic_ball(opt.ball_radius * (k - 1.0) / opt.steps);
      rep.ball_worst_step = std::max(rep.ball_worst_step, (ratio - prev) / prev);
    }
  }
  rep.bishop_gromov_ok =
      rep.jacobi_worst_step <= opt.tolerance && rep.ball_worst_step <= opt.tolerance;
  return rep;
}

}  // namespace ahe
