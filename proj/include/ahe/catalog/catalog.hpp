#pragma once

#include "ahe/geom/metric_field.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace ahe {

enum class Family {
  kPoincareBall,
  kHyperbolicQuotient,
  kAdSSchwarzschild,
  kTaubBolt,
  kToralBlackHole,
  kHyperbolicCusp,
  kRoundBoundary,
  kProductBoundary,
  kBergerBoundary,
  kFlatBoundary,
};

const char* to_string(Family f);

/// Flat metric a dx^2 + 2b dx dy + c dy^2 on the unit-cell torus.
struct TorusModuli {
  double a = 1.0;
  double b = 0.0;
  double c = 1.0;
};

/// Conformal infinity: topology label, the calibrated representative metric
/// (in the tangential coordinates of the bulk patch) and its parameters.
struct BoundaryDescription {
  Family family = Family::kRoundBoundary;
  std::string topology;
  std::map<std::string, double> params;
  MetricField<3> field;
  /// Total γ-volume of the boundary coordinate cell.
  double volume = 0.0;
};

enum class InnerEnd { kCenter, kBolt, kNone };

/// Radial data of a cohomogeneity-one family g = g_rr(r) dr^2 + (orbit
/// metric); coordinate 0 of every catalog patch is r.
struct RadialProfile {
  InnerEnd inner = InnerEnd::kNone;
  double r_inner = 0.0;   // center, bolt radius, or lower patch bound
  double r_ref = 1.0;     // calibration reference radius
  std::function<double(double)> sqrt_grr;
  /// a(r) such that t(r)^2 a(r) -> 1 fixes the boundary calibration.
  std::function<double(double)> half_log_areal;
  std::function<double(double)> half_dlog_areal;
  /// sqrt_grr - half_dlog_areal written without cancellation at large r.
  std::function<double(double)> tail_integrand;
  /// Integral of sqrt(det g) over the orbit coordinates at radius r.
  std::function<double(double)> cross_section;
};

struct CatalogMetric {
  Family family = Family::kPoincareBall;
  std::string id;
  std::map<std::string, double> params;
  MetricField<4> field;
  int euler_char = 0;
  BoundaryDescription boundary;
  bool conformally_compact = true;
  RadialProfile radial;
  /// Box (inside the patch) for quasi-random interior sampling; excludes the
  /// coordinate singular tubes.
  CoordinatePatch<4> sample_box;

  std::vector<Point<4>> sample_points(std::size_t n, std::size_t offset = 1) const;
  /// Representative orbit point (angles generic) at radius r.
  Point<4> orbit_point(double r) const;
};

/// Parameter validation errors are Error{kInvalidParameter}.
CatalogMetric poincare_ball();
CatalogMetric hyperbolic_cusp();
CatalogMetric hyperbolic_quotient(double length);
CatalogMetric ads_schwarzschild(double m);
CatalogMetric taub_bolt(double s, int k);
CatalogMetric toral_black_hole(double m, TorusModuli moduli = {});

BoundaryDescription round_boundary();
BoundaryDescription product_boundary(double circle_length);
BoundaryDescription berger_boundary(double fiber_sq, int k);
BoundaryDescription flat_boundary(double circle_length, TorusModuli moduli);

/// Largest (unique positive) root of r^3 + r - 2m.
double r_plus(double m);
/// Bolt-regularity period of the AdS-Schwarzschild circle: 4π r / (1 + 3 r^2).
double beta_of_rplus(double rp);
/// 4π / F'(r_+) for a function F with a simple root at r_+.
double smoothness_period(const std::function<double(double)>& f, double rp);
/// E_{s,k} = (2ks - 4) / (3 (s^2 - 1)).
double e_param(double s, int k);
/// Taub-Bolt quartic with bolt at s and constant E.
double taub_bolt_f(double r, double s, double e);
/// Parameter with E_{s,k} = 1 (round boundary), k >= 2: (k + sqrt(k^2 - 3)) / 3.
double round_boundary_parameter(int k);
/// Area of the bolt {r = s} by quadrature over the bolt sphere.
double bolt_area(const CatalogMetric& taub);

}  // namespace ahe
