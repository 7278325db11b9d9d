#pragma once

#include "ahe/catalog/catalog.hpp"
#include "ahe/check.hpp"
#include "ahe/geom/curvature.hpp"

#include <memory>
#include <vector>

namespace ahe {

namespace detail {
struct RadialState;
}

/// Geodesic compactification ḡ = t^2 g of a cohomogeneity-one catalog metric.
///
/// t depends on r only: d log t / dr = -sqrt(g_rr), calibrated so that
/// t^2 a(r) -> boundary_scale^2 (the boundary representative is
/// boundary_scale^2 times the catalog boundary metric).
class Compactification {
 public:
  const CatalogMetric& base() const;
  double boundary_scale() const;
  bool is_geodesic() const { return true; }
  /// sup t over the patch (value at the center or bolt).
  double width() const;

  double log_t(double r) const;
  double t_of_r(double r) const;
  /// dt/dr = -t sqrt(g_rr).
  double dt_dr(double r) const;
  double r_of_t(double t) const;

  const MetricField<4>& compactified_field() const { return compactified_; }
  const ScalarField<4>& defining_function() const { return defining_; }
  const MetricField<3>& boundary_metric() const { return boundary_; }

  /// Bulk point on the level set {t = const} over boundary point y.
  Point<4> point(double t, const Point<3>& y) const;

  /// Geodesic t lifted to a jet through x[0] = r.
  Jet<4> t_jet(const Jet<4>& r) const;

 private:
  friend Compactification geodesic_compactify(const CatalogMetric&, double);
  std::shared_ptr<const detail::RadialState> state_;
  MetricField<4> compactified_;
  ScalarField<4> defining_;
  MetricField<3> boundary_;
};

/// Throws Error{kNotConformallyCompact} for the cusp, Error{kInvalidParameter}
/// for boundary_scale <= 0.
Compactification geodesic_compactify(const CatalogMetric& metric, double boundary_scale = 1.0);

/// ρ = t (1 + a t^2): a non-geodesic defining function for the same boundary.
ScalarField<4> perturbed_defining_function(const Compactification& c, double a);

/// ρ^2 g for an arbitrary defining function ρ on the base patch.
MetricField<4> conformal_metric(const CatalogMetric& metric, const ScalarField<4>& rho);

/// ḡ = dt^2 + g_t in coordinates (t, y), t in (0, width). Unlike the radial
/// chart, where ḡ_rr = t^2 degenerates, this stays well scaled up to t = 0.
MetricField<4> boundary_chart(const Compactification& c);

/// Quasi-random boundary points inside the tangential part of the sample box.
std::vector<Point<3>> boundary_samples(const Compactification& c, std::size_t n,
                                       std::size_t offset = 1);

// --- boundary expansion ---------------------------------------------------

struct FGOptions {
  int points = 24;
  double lo_fraction = 1.0 / 400.0;  // of width
  double hi_fraction = 0.1;          // of width; must not exceed 1/4
  std::vector<int> powers = {0, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double div_step = 1e-3;
  double max_condition = 1e10;
};

struct FGPoint {
  Point<3> y{};
  Sym2<3> gamma;
  Sym2<3> g0, g2, g3;
  /// Norm of a fitted t^1 coefficient when the odd power is admitted.
  double g1_norm = 0.0;
  double fit_residual = 0.0;
  double condition = 0.0;
  double trace_g3 = 0.0;  // tr_γ g3
  double div_g3 = 0.0;    // |div_γ g3|_γ
  double norm_g3 = 0.0;   // |g3|_γ
  double g0_error = 0.0;  // |g0 - γ|_γ
};

struct FGExpansion {
  std::vector<FGPoint> points;
  std::vector<double> t_grid;
  std::vector<int> powers;
  double fit_residual = 0.0;
  double max_trace = 0.0;
  double max_div = 0.0;
  double max_g0_error = 0.0;
  double max_g1 = 0.0;
};

/// Least-squares fit of g_t = t^2 g|_tangential on a log-spaced grid in
/// (0, width/4). Throws Error{kInvalidParameter} for grids with fewer than 8
/// points or reaching past width/4, Error{kIllConditioned} from the fit.
FGExpansion fg_expand(const Compactification& c, const std::vector<Point<3>>& ys,
                      const FGOptions& opt = {});

/// Sign s in g2 = s (Ric_γ - s_γ/4 γ), calibrated on the hyperbolic ball.
inline constexpr double kG2Sign = -1.0;

/// kG2Sign (Ric_γ - (s_γ/4) γ) at y (n = 3).
Sym2<3> g2_closed_form(const MetricField<3>& gamma, const Point<3>& y);

struct G2Calibration {
  double sign = 0.0;        // sign preferred by the hyperbolic ball fit
  double residual_minus = 0.0;
  double residual_plus = 0.0;
};
G2Calibration calibrate_g2_sign();

/// max over ys of |g2_fit - g2_closed_form|_γ.
double g2_pipeline_residual(const Compactification& c, const FGExpansion& e);

/// g3 from the normal derivative of the compactified Ricci tensor,
/// g3 = -(1/3) d/dt Ric(ḡ)^T at t = 0, compared with the fitted g3.
struct RicciDerivativeG3 {
  Sym2<3> from_ricci;
  Sym2<3> fitted;
  double residual = 0.0;            // |from_ricci - fitted|_γ
  double norm_fitted = 0.0;
  double sixth_normal_ratio = 0.0;  // |(1/6) d_t Ric^T| / |g3|
};
RicciDerivativeG3 g3_from_ricci(const Compactification& c, const Point<3>& y,
                                const FGOptions& opt = {});

struct ConformalRuleReport {
  double lambda = 1.0;
  double norm_ratio = 0.0;      // |g̃3|_γ̃ / |g3|_γ, 0 when both vanish
  double expected_ratio = 0.0;  // λ^{-3}
  double tensor_residual = 0.0; // max |g̃3 - λ^{-1} g3|_γ̃
  double max_norm = 0.0;        // max |g3|_γ
};
ConformalRuleReport conformal_rule_check(const CatalogMetric& metric, double lambda,
                                         std::size_t boundary_points = 4,
                                         const FGOptions& opt = {});

// --- appendix identities --------------------------------------------------

struct AppendixOptions {
  std::size_t angle_points = 5;
  std::size_t t_points = 8;
  std::size_t geodesics = 20;
  double perturbation = 0.2;  // ρ = t (1 + a t^2)
  double fd_step = 1e-3;      // of width, for d/dt along geodesics
};

/// Residuals of the conformal curvature relations and the geodesic
/// boundary identities; one Check per identity.
std::vector<Check> appendix_suite(const Compactification& c, const AppendixOptions& opt = {});

/// Boundary scalar curvature of the compactification, s̄(0).
double boundary_scalar_curvature(const Compactification& c, const Point<3>& y);

// --- volume monotonicity --------------------------------------------------

struct MonotonicityOptions {
  std::size_t geodesics = 10;
  std::size_t steps = 50;
  std::size_t substeps = 8;
  double tolerance = 1e-8;
  double t_max_fraction = 0.95;
  double ball_radius = 1.2;
  double center_offset = 1.5;  // center r = r_inner + offset
};

struct MonotonicityReport {
  std::size_t geodesics = 0;
  std::size_t steps = 0;
  /// Most negative relative step of the boundary Jacobian ratio (>= -tol).
  double boundary_worst_step = 0.0;
  double boundary_ratio_min = 0.0;
  double boundary_ratio_max = 0.0;
  /// Largest relative increase of J / sinh^3 along interior geodesics.
  double jacobi_worst_step = 0.0;
  /// Largest relative increase of the ball-volume ratio vol B(s) / V_{-1}(s).
  double ball_worst_step = 0.0;
  double ball_ratio_min = 0.0;
  double ball_ratio_max = 0.0;
  bool boundary_ok = false;
  bool bishop_gromov_ok = false;
};

MonotonicityReport jacobian_monotonicity(const Compactification& c,
                                         const MonotonicityOptions& opt = {});

}  // namespace ahe
