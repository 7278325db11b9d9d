#include "ahe/compactify/compactify.hpp"

#include "ahe/error.hpp"
#include "ahe/numerics/quadrature.hpp"
#include "ahe/numerics/roots.hpp"
#include "ahe/numerics/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace ahe {

namespace detail {

struct RadialState {
  CatalogMetric base;
  double lambda = 1.0;
  double log_lambda = 0.0;
  double r_ref = 1.0;
  double log_t_ref = 0.0;
  double log_width = 0.0;

  double q(double r) const { return base.radial.sqrt_grr(r); }

  // ∫_r^∞ (sqrt(g_rr) - a'/(2a)) dr'
  double tail(double r) const {
    const auto& rad = base.radial;
    // x = 1/r maps the tail to (0, 1/r]; the integrand vanishes as x -> 0.
    const auto f = [&](double x) { return rad.tail_integrand(1.0 / x) / (x * x); };
    // log t needs ~1e-14 absolute; a relative target on a tiny tail chases roundoff
    const double coarse = std::abs(quad::gauss_kronrod(f, 0.0, 1.0 / r, 1.0, 0));
    const double rel = std::clamp(1e-15 / std::max(coarse, 1e-300), 1e-12, 1e-3);
    return quad::gauss_kronrod(f, 0.0, 1.0 / r, rel, 10);
  }

  // ∫_a^b sqrt(g_rr) for r_inner <= a <= b.
  double inner(double a, double b) const {
    if (b <= a) return 0.0;
    if (base.radial.inner == InnerEnd::kBolt) {
      const double ri = base.radial.r_inner;
      return quad::gauss_kronrod(
          [&](double u) {
            // 2u sqrt(g_rr) is even and finite at the bolt; avoid r - r_inner
            // below roundoff of F
            u = std::max(u, 1e-5);
            return 2.0 * u * q(ri + u * u);
          },
          std::sqrt(a - ri),
          std::sqrt(b - ri), 1e-12, 10);
    }
    return quad::adaptive_simpson([&](double s) { return q(s); }, a, b, 1e-13);
  }

  double log_t(double r) const {
    if (!(r >= base.radial.r_inner)) {
      throw Error(ErrorCode::kOutOfRange, "radius below the inner end of the family");
    }
    if (r >= r_ref) return log_lambda - base.radial.half_log_areal(r) + tail(r);
    return log_t_ref + inner(r, r_ref);
  }
};

}  // namespace detail

namespace {

Jet<4> lift_t(const detail::RadialState& st, const Jet<4>& r) {
  const double rv = r.v;
  const double t = std::exp(st.log_t(rv));
  const double q = st.q(rv);
  // d g_rr / dr from the metric jet; g_rr is a function of r alone.
  Point<4> p = st.base.orbit_point(rv);
  const double dgrr = st.base.field.jet(p)[0][0].d[0];
  const double dq = dgrr / (2.0 * q);
  const double t1 = -t * q;
  const double t2 = t * q * q - t * dq;
  return compose(r, t, t1, t2);
}

}  // namespace

const CatalogMetric& Compactification::base() const { return state_->base; }
double Compactification::boundary_scale() const { return state_->lambda; }
double Compactification::width() const { return std::exp(state_->log_width); }
double Compactification::log_t(double r) const { return state_->log_t(r); }
double Compactification::t_of_r(double r) const { return std::exp(state_->log_t(r)); }
double Compactification::dt_dr(double r) const { return -t_of_r(r) * state_->q(r); }

double Compactification::r_of_t(double t) const {
  if (!(t > 0.0 && t <= width())) {
    throw Error(ErrorCode::kOutOfRange, "t outside (0, width]");
  }
  const double ri = state_->base.radial.r_inner;
  const double target = std::log(t);
  if (target >= state_->log_width) return ri;
  auto f = [&](double r) { return state_->log_t(r) - target; };
  auto df = [&](double r) { return -state_->q(r); };
  // Start just above the inner end so the bolt singularity of sqrt(g_rr) is avoided.
  const double lo = ri;
  double hi = std::max(ri + 1.0, -target + 1.0);
  while (f(hi) > 0) hi = ri + 2.0 * (hi - ri);
  return roots::bracketed(f, lo, hi, 1e-13 * (1.0 + hi), df);
}

Point<4> Compactification::point(double t, const Point<3>& y) const {
  return {r_of_t(t), y[0], y[1], y[2]};
}

Jet<4> Compactification::t_jet(const Jet<4>& r) const { return lift_t(*state_, r); }

Compactification geodesic_compactify(const CatalogMetric& metric, double boundary_scale) {
  if (!metric.conformally_compact || metric.radial.inner == InnerEnd::kNone) {
    throw Error(ErrorCode::kNotConformallyCompact, metric.id + " is not conformally compact");
  }
  if (!(boundary_scale > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "boundary scale must be positive");
  }
  auto st = std::make_shared<detail::RadialState>();
  st->base = metric;
  st->lambda = boundary_scale;
  st->log_lambda = std::log(boundary_scale);
  st->r_ref = metric.radial.r_ref;
  st->log_t_ref = st->log_lambda - metric.radial.half_log_areal(st->r_ref) + st->tail(st->r_ref);
  st->log_width = st->log_t_ref + st->inner(metric.radial.r_inner, st->r_ref);

  Compactification c;
  c.state_ = st;
  const auto raw = metric.field;
  c.compactified_ = MetricField<4>(
      metric.field.patch(),
      [st, raw](const Point<4>& p) {
        auto g = raw.components(p);
        const double t = std::exp(st->log_t(p[0]));
        for (auto& row : g)
          for (auto& x : row) x *= t * t;
        return g;
      },
      [st, raw](const JetPoint<4>& x) {
        auto g = raw.jet(x);
        const Jet<4> t = lift_t(*st, x[0]);
        const Jet<4> t2 = t * t;
        for (auto& row : g)
          for (auto& v : row) v = v * t2;
        return g;
      });
  c.defining_ = ScalarField<4>([st](const Point<4>& p) { return std::exp(st->log_t(p[0])); },
                               [st](const JetPoint<4>& x) { return lift_t(*st, x[0]); });
  const auto gamma = metric.boundary.field;
  const double l2 = boundary_scale * boundary_scale;
  c.boundary_ = MetricField<3>(
      gamma.patch(),
      [gamma, l2](const Point<3>& y) {
        auto g = gamma.components(y);
        for (auto& row : g)
          for (auto& v : row) v *= l2;
        return g;
      },
      [gamma, l2](const JetPoint<3>& y) {
        auto g = gamma.jet(y);
        for (auto& row : g)
          for (auto& v : row) v = v * l2;
        return g;
      });
  return c;
}

ScalarField<4> perturbed_defining_function(const Compactification& c, double a) {
  auto t = c.defining_function();
  return ScalarField<4>(
      [t, a](const Point<4>& p) {
        const double v = t(p);
        return v * (1.0 + a * v * v);
      },
      [t, a](const JetPoint<4>& x) {
        const Jet<4> v = t.jet(x);
        return v * (1.0 + a * v * v);
      });
}

MetricField<4> conformal_metric(const CatalogMetric& metric, const ScalarField<4>& rho) {
  const auto raw = metric.field;
  return MetricField<4>(
      raw.patch(),
      [raw, rho](const Point<4>& p) {
        auto g = raw.components(p);
        const double v = rho(p);
        for (auto& row : g)
          for (auto& x : row) x *= v * v;
        return g;
      },
      [raw, rho](const JetPoint<4>& x) {
        auto g = raw.jet(x);
        const Jet<4> v = rho.jet(x);
        const Jet<4> v2 = v * v;
        for (auto& row : g)
          for (auto& e : row) e = e * v2;
        return g;
      });
}

MetricField<4> boundary_chart(const Compactification& c) {
  auto patch = c.base().field.patch();
  patch.names[0] = "t";
  patch.lower[0] = 0.0;
  patch.upper[0] = c.width();
  patch.predicate = nullptr;
  const auto raw = c.base().field;
  return MetricField<4>(
      patch,
      [c, raw](const Point<4>& x) {
        Point<4> p = x;
        p[0] = c.r_of_t(x[0]);
        auto g = raw.components(p);
        const double t2 = x[0] * x[0];
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) g[i][j] = i == 0 || j == 0 ? (i == j ? 1.0 : 0.0) : t2 * g[i][j];
        return g;
      },
      [c, raw](const JetPoint<4>& x) {
        const double t = x[0].v;
        const double r = c.r_of_t(t);
        const double q = c.base().radial.sqrt_grr(r);
        const double dq = raw.jet(c.base().orbit_point(r))[0][0].d[0] / (2.0 * q);
        // r(t): r' = -1/(t q), r'' = (q - q'/q) / (t q)^2
        const double tq = t * q;
        JetPoint<4> bx = x;
        bx[0] = compose(x[0], r, -1.0 / tq, (q - dq / q) / (tq * tq));
        auto g = raw.jet(bx);
        const Jet<4> t2 = x[0] * x[0];
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            g[i][j] = i == 0 || j == 0 ? Jet<4>(i == j ? 1.0 : 0.0) : g[i][j] * t2;
        return g;
      });
}

std::vector<Point<3>> boundary_samples(const Compactification& c, std::size_t n,
                                       std::size_t offset) {
  const auto& box = c.base().sample_box;
  std::vector<Point<3>> out;
  out.reserve(n);
  for (std::size_t i = offset; out.size() < n; ++i) {
    const auto u = halton<3>(i);
    Point<3> y;
    for (std::size_t k = 0; k < 3; ++k)
      y[k] = box.lower[k + 1] + u[k] * (box.upper[k + 1] - box.lower[k + 1]);
    out.push_back(y);
  }
  return out;
}

}  // namespace ahe
