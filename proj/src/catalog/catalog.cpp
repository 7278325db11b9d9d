#include "ahe/catalog/catalog.hpp"

#include "ahe/error.hpp"
#include "ahe/numerics/quadrature.hpp"
#include "ahe/numerics/roots.hpp"
#include "ahe/numerics/sampling.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ahe {

using std::numbers::pi;

const char* to_string(Family f) {
  switch (f) {
    case Family::kPoincareBall: return "poincare";
    case Family::kHyperbolicQuotient: return "hyp-quotient";
    case Family::kAdSSchwarzschild: return "ads-schw";
    case Family::kTaubBolt: return "taub-bolt";
    case Family::kToralBlackHole: return "toral";
    case Family::kHyperbolicCusp: return "cusp";
    case Family::kRoundBoundary: return "round-s3";
    case Family::kProductBoundary: return "product-s1xs2";
    case Family::kBergerBoundary: return "berger-s3";
    case Family::kFlatBoundary: return "flat-t3";
  }
  return "unknown";
}

namespace {

// Singular loci (poles, bolts, centers) are excluded from sampling by this tube.
constexpr double kTube = 1e-3;

template <std::size_t D>
CoordinatePatch<D> box(std::array<std::string, D> names, Point<D> lo, Point<D> hi) {
  CoordinatePatch<D> p;
  p.names = std::move(names);
  p.lower = lo;
  p.upper = hi;
  return p;
}

template <class T, std::size_t D>
ComponentMatrix<T, D> zeros() {
  ComponentMatrix<T, D> m;
  for (auto& row : m)
    for (auto& x : row) x = T(0.0);
  return m;
}

std::string format_id(const char* tag, const std::map<std::string, double>& params) {
  std::ostringstream os;
  os.precision(12);
  os << tag;
  char sep = ':';
  for (const auto& [k, v] : params) {
    os << sep << k << '=' << v;
    sep = ',';
  }
  return os.str();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidParameter, what);
}

// --- metric component templates ------------------------------------------

struct PoincareComponents {
  template <class T>
  ComponentMatrix<T, 4> operator()(const std::array<T, 4>& x) const {
    using std::sin;
    using std::sinh;
    auto g = zeros<T, 4>();
    const T sr = sinh(x[0]), s1 = sin(x[1]), s2 = sin(x[2]);
    g[0][0] = T(1.0);
    g[1][1] = sr * sr;
    g[2][2] = sr * sr * s1 * s1;
    g[3][3] = sr * sr * s1 * s1 * s2 * s2;
    return g;
  }
};

struct QuotientComponents {
  template <class T>
  ComponentMatrix<T, 4> operator()(const std::array<T, 4>& x) const {
    using std::cosh;
    using std::sin;
    using std::sinh;
    auto g = zeros<T, 4>();
    const T c = cosh(x[0]), s = sinh(x[0]), st = sin(x[2]);
    g[0][0] = T(1.0);
    g[1][1] = c * c;
    g[2][2] = s * s;
    g[3][3] = s * s * st * st;
    return g;
  }
};

struct CuspComponents {
  template <class T>
  ComponentMatrix<T, 4> operator()(const std::array<T, 4>& x) const {
    using std::exp;
    auto g = zeros<T, 4>();
    const T e = exp(2.0 * x[0]);
    g[0][0] = T(1.0);
    g[1][1] = e;
    g[2][2] = e;
    g[3][3] = e;
    return g;
  }
};

struct AdSSchwarzschildComponents {
  double m;
  template <class T>
  ComponentMatrix<T, 4> operator()(const std::array<T, 4>& x) const {
    using std::sin;
    auto g = zeros<T, 4>();
    const T& r = x[0];
    const T f = 1.0 + r * r - 2.0 * m / r;
    const T s = sin(x[2]);
    g[0][0] = 1.0 / f;
    g[1][1] = f;
    g[2][2] = r * r;
    g[3][3] = r * r * s * s;
    return g;
  }
};

// E{ (r^2-1)/F dr^2 + F/(r^2-1) (dτ + ½cosθ dφ)^2 + (r^2-1) g_{S^2(1/2)} }.
struct TaubBoltComponents {
  double s;
  double e;
  template <class T>
  ComponentMatrix<T, 4> operator()(const std::array<T, 4>& x) const {
    using std::cos;
    using std::sin;
    auto g = zeros<T, 4>();
    const T& r = x[0];
    const T q = r * r - 1.0;
    const double lin = -e * s * s * s + (6.0 * e - 4.0) * s + (3.0 * e - 4.0) / s;
    const T f = e * r * r * r * r + (4.0 - 6.0 * e) * r * r + lin * r + (4.0 - 3.0 * e);
    const T fiber = e * f / q;
    const T base = 0.25 * e * q;
    const T c = 0.5 * cos(x[2]);
    const T sn = sin(x[2]);
    g[0][0] = e * q / f;
    g[1][1] = fiber;
    g[1][3] = fiber * c;
    g[3][1] = g[1][3];
    g[2][2] = base;
    g[3][3] = fiber * c * c + base * sn * sn;
    return g;
  }
};

struct ToralComponents {
  double m;
  TorusModuli t;
  template <class T>
  ComponentMatrix<T, 4> operator()(const std::array<T, 4>& x) const {
    auto g = zeros<T, 4>();
    const T& r = x[0];
    const T v = r * r - 2.0 * m / r;
    g[0][0] = 1.0 / v;
    g[1][1] = v;
    g[2][2] = t.a * r * r;
    g[2][3] = t.b * r * r;
    g[3][2] = g[2][3];
    g[3][3] = t.c * r * r;
    return g;
  }
};

struct RoundS3Components {
  template <class T>
  ComponentMatrix<T, 3> operator()(const std::array<T, 3>& x) const {
    using std::sin;
    auto g = zeros<T, 3>();
    const T a = sin(x[0]), b = sin(x[1]);
    g[0][0] = T(1.0);
    g[1][1] = a * a;
    g[2][2] = a * a * b * b;
    return g;
  }
};

struct ProductComponents {
  template <class T>
  ComponentMatrix<T, 3> operator()(const std::array<T, 3>& x) const {
    using std::sin;
    auto g = zeros<T, 3>();
    const T s = sin(x[1]);
    g[0][0] = T(1.0);
    g[1][1] = T(1.0);
    g[2][2] = s * s;
    return g;
  }
};

struct BergerComponents {
  double e;
  template <class T>
  ComponentMatrix<T, 3> operator()(const std::array<T, 3>& x) const {
    using std::cos;
    using std::sin;
    auto g = zeros<T, 3>();
    const T c = 0.5 * cos(x[1]), s = sin(x[1]);
    g[0][0] = T(e);
    g[0][2] = e * c;
    g[2][0] = g[0][2];
    g[1][1] = T(0.25);
    g[2][2] = e * c * c + 0.25 * s * s;
    return g;
  }
};

struct FlatComponents {
  TorusModuli t;
  template <class T>
  ComponentMatrix<T, 3> operator()(const std::array<T, 3>&) const {
    auto g = zeros<T, 3>();
    g[0][0] = T(1.0);
    g[1][1] = T(t.a);
    g[1][2] = T(t.b);
    g[2][1] = T(t.b);
    g[2][2] = T(t.c);
    return g;
  }
};

double torus_area(const TorusModuli& t) { return std::sqrt(t.a * t.c - t.b * t.b); }

void validate_torus(const TorusModuli& t) {
  require(t.a > 0 && t.a * t.c - t.b * t.b > 0, "torus moduli must define a flat metric");
}

}  // namespace

std::vector<Point<4>> CatalogMetric::sample_points(std::size_t n, std::size_t offset) const {
  std::vector<Point<4>> out;
  out.reserve(n);
  for (std::size_t i = offset; out.size() < n && i < offset + 100 * n; ++i) {
    const auto u = halton<4>(i);
    Point<4> p;
    for (std::size_t k = 0; k < 4; ++k)
      p[k] = sample_box.lower[k] + u[k] * (sample_box.upper[k] - sample_box.lower[k]);
    if (field.patch().contains(p)) out.push_back(p);
  }
  return out;
}

Point<4> CatalogMetric::orbit_point(double r) const {
  Point<4> p;
  p[0] = r;
  for (std::size_t k = 1; k < 4; ++k)
    p[k] = sample_box.lower[k] + 0.37 * (sample_box.upper[k] - sample_box.lower[k]);
  return p;
}

// --- boundaries -----------------------------------------------------------

BoundaryDescription round_boundary() {
  BoundaryDescription b;
  b.family = Family::kRoundBoundary;
  b.topology = "S3";
  b.params = {{"radius", 1.0}};
  b.field = MetricField<3>::from_components(
      box<3>({"chi", "theta", "phi"}, {0.0, 0.0, -pi}, {pi, pi, 3.0 * pi}),
      RoundS3Components{});
  b.volume = 2.0 * pi * pi;
  return b;
}

BoundaryDescription product_boundary(double circle_length) {
  require(circle_length > 0, "circle length must be positive");
  BoundaryDescription b;
  b.family = Family::kProductBoundary;
  b.topology = "S1xS2";
  b.params = {{"L", circle_length}, {"radius", 1.0}};
  b.field = MetricField<3>::from_components(
      box<3>({"theta", "vartheta", "phi"}, {-circle_length, 0.0, -pi},
             {2.0 * circle_length, pi, 3.0 * pi}),
      ProductComponents{});
  b.volume = 4.0 * pi * circle_length;
  return b;
}

BoundaryDescription berger_boundary(double fiber_sq, int k) {
  require(fiber_sq > 0 && k >= 1, "Berger sphere needs E > 0 and k >= 1");
  BoundaryDescription b;
  b.family = Family::kBergerBoundary;
  b.topology = k == 1 ? "S3" : "S3/Z" + std::to_string(k);
  b.params = {{"E", fiber_sq},
              {"k", static_cast<double>(k)},
              {"fiber_length", 2.0 * pi * std::sqrt(fiber_sq) / k}};
  b.field = MetricField<3>::from_components(
      box<3>({"tau", "theta", "phi"}, {-2.0 * pi, 0.0, -pi}, {4.0 * pi, pi, 3.0 * pi}),
      BergerComponents{fiber_sq});
  b.volume = 2.0 * pi * pi * std::sqrt(fiber_sq) / k;
  return b;
}

BoundaryDescription flat_boundary(double circle_length, TorusModuli moduli) {
  validate_torus(moduli);
  BoundaryDescription b;
  b.family = Family::kFlatBoundary;
  b.topology = "T3";
  b.params = {{"L", circle_length}, {"a", moduli.a}, {"b", moduli.b}, {"c", moduli.c}};
  b.field = MetricField<3>::from_components(
      box<3>({"theta", "x", "y"}, {-1e3, -1e3, -1e3}, {1e3, 1e3, 1e3}),
      FlatComponents{moduli});
  b.volume = circle_length * torus_area(moduli);
  return b;
}

// --- bulk families --------------------------------------------------------

CatalogMetric poincare_ball() {
  CatalogMetric c;
  c.family = Family::kPoincareBall;
  c.id = "poincare";
  c.field = MetricField<4>::from_components(
      box<4>({"r", "chi", "theta", "phi"}, {0.0, 0.0, 0.0, -pi}, {60.0, pi, pi, 3.0 * pi}),
      PoincareComponents{});
  c.euler_char = 1;
  c.boundary = round_boundary();
  c.radial.inner = InnerEnd::kCenter;
  c.radial.r_inner = 0.0;
  c.radial.r_ref = 1.0;
  c.radial.sqrt_grr = [](double) { return 1.0; };
  c.radial.half_log_areal = [](double r) { return std::log(std::sinh(r)); };
  c.radial.half_dlog_areal = [](double r) { return 1.0 / std::tanh(r); };
  c.radial.tail_integrand = [](double r) { return -2.0 / std::expm1(2.0 * r); };
  c.radial.cross_section = [](double r) {
    const double s = std::sinh(r);
    return 2.0 * pi * pi * s * s * s;
  };
  c.sample_box = box<4>(c.field.patch().names, {0.05, 2 * kTube, 2 * kTube, 0.0},
                        {6.0, pi - 2 * kTube, pi - 2 * kTube, 2 * pi});
  return c;
}

CatalogMetric hyperbolic_quotient(double length) {
  require(length > 0, "hyperbolic quotient needs L > 0");
  CatalogMetric c;
  c.family = Family::kHyperbolicQuotient;
  c.params = {{"L", length}};
  c.id = format_id("hyp-quotient", c.params);
  c.field = MetricField<4>::from_components(
      box<4>({"r", "s", "theta", "phi"}, {0.0, -length, 0.0, -pi},
             {60.0, 2.0 * length, pi, 3.0 * pi}),
      QuotientComponents{});
  c.euler_char = 0;
  c.boundary = product_boundary(length);
  c.radial.inner = InnerEnd::kCenter;
  c.radial.r_inner = 0.0;
  c.radial.r_ref = 1.0;
  c.radial.sqrt_grr = [](double) { return 1.0; };
  c.radial.half_log_areal = [](double r) { return std::log(std::sinh(r)); };
  c.radial.half_dlog_areal = [](double r) { return 1.0 / std::tanh(r); };
  c.radial.tail_integrand = [](double r) { return -2.0 / std::expm1(2.0 * r); };
  c.radial.cross_section = [length](double r) {
    const double s = std::sinh(r);
    return 4.0 * pi * length * std::cosh(r) * s * s;
  };
  c.sample_box = box<4>(c.field.patch().names, {0.05, 0.0, 2 * kTube, 0.0},
                        {6.0, length, pi - 2 * kTube, 2 * pi});
  return c;
}

CatalogMetric hyperbolic_cusp() {
  CatalogMetric c;
  c.family = Family::kHyperbolicCusp;
  c.id = "cusp";
  c.field = MetricField<4>::from_components(
      box<4>({"r", "x", "y", "z"}, {-60.0, -1e3, -1e3, -1e3}, {60.0, 1e3, 1e3, 1e3}),
      CuspComponents{});
  c.euler_char = 0;
  c.boundary = flat_boundary(1.0, {});
  c.boundary.topology = "T3 (cusp cross-section; not a conformal infinity)";
  c.conformally_compact = false;
  c.radial.inner = InnerEnd::kNone;
  c.radial.r_inner = -60.0;
  c.radial.r_ref = 0.0;
  c.radial.sqrt_grr = [](double) { return 1.0; };
  c.radial.half_log_areal = [](double r) { return r; };
  c.radial.half_dlog_areal = [](double) { return 1.0; };
  c.radial.tail_integrand = [](double) { return 0.0; };
  c.radial.cross_section = [](double r) { return std::exp(3.0 * r); };
  c.sample_box = box<4>(c.field.patch().names, {-3.0, 0.0, 0.0, 0.0}, {3.0, 1.0, 1.0, 1.0});
  return c;
}

double r_plus(double m) {
  require(m > 0, "AdS-Schwarzschild needs m > 0");
  return roots::bracketed([m](double r) { return r * r * r + r - 2.0 * m; }, 0.0, 2.0 * m + 1.0,
                          1e-12, [](double r) { return 3.0 * r * r + 1.0; });
}

double beta_of_rplus(double rp) {
  require(rp > 0, "r_+ must be positive");
  return 4.0 * pi * rp / (1.0 + 3.0 * rp * rp);
}

double smoothness_period(const std::function<double(double)>& f, double rp) {
  const double scale = 1.0 + std::abs(rp);
  if (!(std::abs(f(rp)) <= 1e-10 * scale)) {
    throw Error(ErrorCode::kInvalidParameter, "r_+ is not a root of F");
  }
  auto central = [&](double h) { return (f(rp + h) - f(rp - h)) / (2.0 * h); };
  const double h = 1e-3 * scale;
  const double slope = (4.0 * central(0.5 * h) - central(h)) / 3.0;
  if (!(slope > 0)) throw Error(ErrorCode::kInvalidParameter, "F'(r_+) must be positive");
  return 4.0 * pi / slope;
}

CatalogMetric ads_schwarzschild(double m) {
  require(m > 0, "AdS-Schwarzschild needs m > 0");
  const double rp = r_plus(m);
  const double beta = beta_of_rplus(rp);
  CatalogMetric c;
  c.family = Family::kAdSSchwarzschild;
  c.params = {{"m", m}};
  c.id = format_id("ads-schw", c.params);
  c.params["r_plus"] = rp;
  c.params["beta"] = beta;
  auto patch = box<4>({"r", "theta", "vartheta", "phi"}, {rp, -beta, 0.0, -pi},
                      {1e7, 2.0 * beta, pi, 3.0 * pi});
  patch.predicate = [rp](const Point<4>& p) { return p[0] > rp; };
  c.field = MetricField<4>::from_components(std::move(patch), AdSSchwarzschildComponents{m});
  c.euler_char = 2;
  c.boundary = product_boundary(beta);
  c.radial.inner = InnerEnd::kBolt;
  c.radial.r_inner = rp;
  c.radial.r_ref = rp + 1.0;
  c.radial.sqrt_grr = [m](double r) { return 1.0 / std::sqrt(1.0 + r * r - 2.0 * m / r); };
  c.radial.half_log_areal = [](double r) { return std::log(r); };
  c.radial.half_dlog_areal = [](double r) { return 1.0 / r; };
  c.radial.tail_integrand = [m](double r) {
    const double sf = std::sqrt(1.0 + r * r - 2.0 * m / r);
    return (2.0 * m / r - 1.0) / (r * sf * (r + sf));
  };
  c.radial.cross_section = [beta](double r) { return 4.0 * pi * beta * r * r; };
  c.sample_box = box<4>(c.field.patch().names, {rp + 2 * kTube, 0.0, 2 * kTube, 0.0},
                        {rp + 12.0, beta, pi - 2 * kTube, 2 * pi});
  return c;
}

double e_param(double s, int k) {
  require(k >= 1, "k must be >= 1");
  require(s > 1.0, "E_{s,k} is evaluated for s > 1 only");
  return (2.0 * k * s - 4.0) / (3.0 * (s * s - 1.0));
}

double taub_bolt_f(double r, double s, double e) {
  const double lin = -e * s * s * s + (6.0 * e - 4.0) * s + (3.0 * e - 4.0) / s;
  return e * r * r * r * r + (4.0 - 6.0 * e) * r * r + lin * r + (4.0 - 3.0 * e);
}

double round_boundary_parameter(int k) {
  require(k >= 2, "round boundary parameter needs k >= 2");
  return (k + std::sqrt(static_cast<double>(k) * k - 3.0)) / 3.0;
}

CatalogMetric taub_bolt(double s, int k) {
  require(k >= 1, "Taub-Bolt needs k >= 1");
  if (k == 1) {
    require(s > 2.0, "Taub-Bolt with k = 1 needs s > 2");
  } else {
    require(s > 1.0, "Taub-Bolt with k >= 2 needs s > 1");
  }
  const double e = e_param(s, k);
  require(e > 0, "Taub-Bolt needs E_{s,k} > 0");
  const double period = 2.0 * pi / k;
  CatalogMetric c;
  c.family = Family::kTaubBolt;
  c.params = {{"s", s}, {"k", static_cast<double>(k)}};
  c.id = format_id("taub-bolt", c.params);
  c.params["E"] = e;
  c.params["tau_period"] = period;
  auto patch = box<4>({"r", "tau", "theta", "phi"}, {s, -2 * pi, 0.0, -pi},
                      {1e7, 4 * pi, pi, 3.0 * pi});
  patch.predicate = [s](const Point<4>& p) { return p[0] > s; };
  c.field = MetricField<4>::from_components(std::move(patch), TaubBoltComponents{s, e});
  c.euler_char = 2;
  c.boundary = berger_boundary(e, k);
  c.radial.inner = InnerEnd::kBolt;
  c.radial.r_inner = s;
  c.radial.r_ref = s + 1.0;
  c.radial.sqrt_grr = [s, e](double r) {
    return std::sqrt(e * (r * r - 1.0) / taub_bolt_f(r, s, e));
  };
  c.radial.half_log_areal = [e](double r) { return 0.5 * std::log(e * (r * r - 1.0)); };
  c.radial.half_dlog_areal = [](double r) { return r / (r * r - 1.0); };
  c.radial.tail_integrand = [s, e](double r) {
    const double lin = -e * s * s * s + (6.0 * e - 4.0) * s + (3.0 * e - 4.0) / s;
    const double q2 = r * r - 1.0;
    const double num = ((3.0 * e - 4.0) * r - lin) * r * r * r + (6.0 * e - 4.0) * r * r - e;
    const double f = taub_bolt_f(r, s, e);
    const double q = std::sqrt(e * q2 / f), h = r / q2;
    return num / (f * q2 * q2) / (q + h);
  };
  c.radial.cross_section = [e, k](double r) {
    return 2.0 * pi * pi * e * e * (r * r - 1.0) / k;
  };
  c.sample_box = box<4>(c.field.patch().names, {s + 2 * kTube, 0.0, 2 * kTube, 0.0},
                        {s + 12.0, period, pi - 2 * kTube, 2 * pi});
  return c;
}

CatalogMetric toral_black_hole(double m, TorusModuli moduli) {
  require(m > 0, "toral black hole needs m > 0");
  validate_torus(moduli);
  const double rp = std::cbrt(2.0 * m);
  const double period = 4.0 * pi / (3.0 * rp);
  CatalogMetric c;
  c.family = Family::kToralBlackHole;
  c.params = {{"m", m}};
  if (moduli.a != 1.0 || moduli.b != 0.0 || moduli.c != 1.0) {
    c.params["a"] = moduli.a;
    c.params["b"] = moduli.b;
    c.params["c"] = moduli.c;
  }
  c.id = format_id("toral", c.params);
  c.params["r_plus"] = rp;
  c.params["theta_period"] = period;
  auto patch = box<4>({"r", "theta", "x", "y"}, {rp, -1e3, -1e3, -1e3}, {1e7, 1e3, 1e3, 1e3});
  patch.predicate = [rp](const Point<4>& p) { return p[0] > rp; };
  c.field = MetricField<4>::from_components(std::move(patch), ToralComponents{m, moduli});
  c.euler_char = 0;
  c.boundary = flat_boundary(period, moduli);
  c.radial.inner = InnerEnd::kBolt;
  c.radial.r_inner = rp;
  c.radial.r_ref = rp + 1.0;
  c.radial.sqrt_grr = [m](double r) { return 1.0 / std::sqrt(r * r - 2.0 * m / r); };
  c.radial.half_log_areal = [](double r) { return std::log(r); };
  c.radial.half_dlog_areal = [](double r) { return 1.0 / r; };
  c.radial.tail_integrand = [m](double r) {
    const double sv = std::sqrt(r * r - 2.0 * m / r);
    return (2.0 * m / r) / (r * sv * (r + sv));
  };
  const double area = torus_area(moduli);
  c.radial.cross_section = [period, area](double r) { return period * area * r * r; };
  c.sample_box = box<4>(c.field.patch().names, {rp + 2 * kTube, 0.0, 0.0, 0.0},
                        {rp + 12.0, period, 1.0, 1.0});
  return c;
}

double bolt_area(const CatalogMetric& taub) {
  require(taub.family == Family::kTaubBolt, "bolt area is defined for Taub-Bolt metrics");
  const double s = taub.radial.r_inner;
  // Induced metric on {r = s}: the (θ, φ) block once the fiber has collapsed.
  auto density = [&](double theta, double phi) {
    const auto g = taub.field.components({s, 0.0, theta, phi});
    const double gtt = g[2][2], gpp = g[3][3], gtp = g[2][3];
    return std::sqrt(std::max(0.0, gtt * gpp - gtp * gtp));
  };
  return quad::gauss_kronrod(
      [&](double phi) {
        return quad::gauss_kronrod([&](double th) { return density(th, phi); }, 0.0, pi, 1e-13);
      },
      0.0, 2.0 * pi, 1e-13);
}

}  // namespace ahe
