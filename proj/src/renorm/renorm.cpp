#include "ahe/renorm/renorm.hpp"

#include "ahe/error.hpp"
#include "ahe/numerics/fit.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace ahe {

namespace {

constexpr double kPi = std::numbers::pi;

struct Integral {
  double value = 0.0;
  double error = 0.0;
};

// Fixed panels of 61-point Gauss-Kronrod. The Weyl integrands are smooth but
// may be pure roundoff (conformally flat metrics), where an adaptive relative
// tolerance never settles.
Integral integrate(const std::function<double(double)>& f, double a, double b,
                   unsigned panels) {
  Integral out;
  const double h = (b - a) / panels;
  for (unsigned i = 0; i < panels; ++i) {
    double err = 0.0;
    const double lo = a + i * h, hi = i + 1 == panels ? b : a + (i + 1) * h;
    out.value += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 0, 0.0,
                                                                               &err);
    out.error += err;
  }
  return out;
}

// |W|^2 of a metric field at a point on the orbit through r.
double weyl_sq(const MetricField<4>& field, const Point<4>& p) {
  const auto b = curvature_at<4>(field, p);
  return operator_norm_sq<4>(*b.weyl, b.g_inv);
}

void require_settled(const std::string& what, const std::vector<Integral>& parts, double rel_tol) {
  double total = 0.0, err = 0.0;
  for (const auto& p : parts) {
    total += p.value;
    err += p.error;
  }
  if (!std::isfinite(total) || err > rel_tol * std::max(std::abs(total), 1.0)) {
    std::ostringstream msg;
    msg << what << " did not converge; partial sums:";
    for (const auto& p : parts) msg << ' ' << p.value << " (err " << p.error << ')';
    throw Error(ErrorCode::kNoConvergence, msg.str());
  }
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

}  // namespace

double bulk_volume(const Compactification& c, double t) {
  if (!(t > 0.0 && t < c.width())) throw Error(ErrorCode::kOutOfRange, "t outside (0, width)");
  const auto& rad = c.base().radial;
  const double r = c.r_of_t(t);
  return integrate_adaptive(rad.cross_section, rad.r_inner, r);
}

RenormReport renormalized_volume(const Compactification& c, const VolumeFitOptions& opt) {
  if (opt.points < static_cast<int>(opt.powers.size()) + 2 ||
      !(opt.lo_fraction > 0 && opt.lo_fraction < opt.hi_fraction && opt.hi_fraction < 1)) {
    throw Error(ErrorCode::kInvalidParameter, "volume fit grid is invalid");
  }
  auto index = [&](int p) {
    for (std::size_t i = 0; i < opt.powers.size(); ++i)
      if (opt.powers[i] == p) return static_cast<Eigen::Index>(i);
    throw Error(ErrorCode::kInvalidParameter, "volume basis must contain t^-3, t^-1 and t^0");
  };
  const auto i3 = index(-3), i1 = index(-1), i0 = index(0);
  const auto ts = fit::log_spaced(opt.lo_fraction * c.width(), opt.hi_fraction * c.width(),
                                  opt.points);
  std::vector<double> vols;
  vols.reserve(ts.size());
  for (double t : ts) vols.push_back(bulk_volume(c, t));
  const auto f = fit::least_squares(ts, vols, fit::powers(opt.powers), opt.max_condition);

  RenormReport rep;
  rep.family = c.base().id;
  rep.params = c.base().params;
  rep.v3 = f.coefficients[i3];
  rep.v1 = f.coefficients[i1];
  rep.V = f.coefficients[i0];
  rep.I_ren = -6.0 * rep.V;
  rep.fit_residual = f.relative_residual;
  rep.fit_condition = f.condition;
  rep.euler_char = c.base().euler_char;
  rep.identity_residual = NAN;
  return rep;
}

double weyl_energy(const CatalogMetric& metric, const WeylOptions& opt) {
  if (!metric.conformally_compact || metric.radial.inner == InnerEnd::kNone) {
    throw Error(ErrorCode::kNotConformallyCompact, metric.id + " is not conformally compact");
  }
  if (!(opt.split_fraction > 0 && opt.split_fraction < 1)) {
    throw Error(ErrorCode::kInvalidParameter, "split_fraction must lie in (0, 1)");
  }
  const auto& rad = metric.radial;
  const auto bulk_density = [&](double r) {
    return weyl_sq(metric.field, metric.orbit_point(r)) * rad.cross_section(r);
  };
  const auto c = geodesic_compactify(metric);
  const double ts = opt.split_fraction * c.width();
  const double tf = opt.floor_fraction * c.width();
  const double rf = c.r_of_t(tf);
  std::vector<Integral> parts;
  // Below t_floor the curvature differences are roundoff-limited; there
  // |W|^2 dV_g = O(t^2) dt, so the remainder is density * t / 3 in t.
  Integral tail;
  if (opt.mode == WeylMode::kBulk) {
    const double r1 = rad.r_inner + 1.0;
    parts.push_back(integrate(bulk_density, rad.r_inner, r1, opt.panels));
    // x = 1/r on the far end
    parts.push_back(integrate(
        [&](double x) { return bulk_density(1.0 / x) / (x * x); }, 1.0 / rf, 1.0 / r1,
        opt.panels));
    tail.value = bulk_density(rf) / (3.0 * rad.sqrt_grr(rf));
  } else {
    parts.push_back(integrate(bulk_density, rad.r_inner, c.r_of_t(ts), opt.panels));
    // |W|^2 dV is conformally invariant in dimension 4: |W|^2_g dV_g = |W̄|^2_ḡ dV_ḡ,
    // evaluated in the (t, y) chart where ḡ = dt^2 + g_t.
    const auto chart = boundary_chart(c);
    const Point<4> orbit = metric.orbit_point(rad.r_inner + 1.0);
    const auto compact_density = [&](double t) {
      const double r = c.r_of_t(t);
      return weyl_sq(chart, {t, orbit[1], orbit[2], orbit[3]}) * t * t * t *
             rad.cross_section(r) / rad.sqrt_grr(r);
    };
    // u = log t; each node costs a root solve for r(t), so the depth is capped
    parts.push_back(integrate(
        [&](double u) {
          const double t = std::exp(u);
          return compact_density(t) * t;
        },
        std::log(tf), std::log(ts), opt.panels));
    tail.value = compact_density(tf) * tf / 3.0;
  }
  tail.error = std::abs(tail.value);
  parts.push_back(tail);
  require_settled("Weyl energy", parts, opt.rel_tol);
  double total = 0.0;
  for (const auto& p : parts) total += p.value;
  return total;
}

RenormReport gauss_bonnet_check(const CatalogMetric& metric, const VolumeFitOptions& vol,
                                const WeylOptions& weyl) {
  RenormReport rep = renormalized_volume(geodesic_compactify(metric), vol);
  rep.weyl_energy = weyl_energy(metric, weyl);
  rep.identity_residual = std::abs(rep.weyl_energy / (8.0 * kPi * kPi) - rep.euler_char +
                                   3.0 * rep.V / (4.0 * kPi * kPi));
  return rep;
}

}  // namespace ahe
