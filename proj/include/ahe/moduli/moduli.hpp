#pragma once

#include "ahe/catalog/catalog.hpp"
#include "ahe/check.hpp"

#include <boost/rational.hpp>

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace ahe {

/// One-parameter family of Einstein metrics with the boundary invariant it
/// induces, e.g. r_+ -> beta(r_+) or s -> E_{s,k}.
struct FamilyCurve {
  std::string id;
  std::string manifold;
  std::string parameter;
  std::string invariant;
  std::string formula;
  /// Open parameter interval; hi may be +inf.
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  /// Length scale of the map (0, 1) -> (lo, hi) when hi is infinite.
  double scale = 1.0;
  std::function<double(double)> value;
  std::function<CatalogMetric(double)> metric;

  /// Parameter for u in (0, 1).
  double at(double u) const;
  double to_unit(double p) const;
  bool contains(double p) const { return p > lo && p < hi; }
};

/// r_+ -> 4π r_+ / (1 + 3 r_+^2) on AdS-Schwarzschild (R^2 x S^2).
FamilyCurve bolt_period_curve();
/// s -> E_{s,k} on Taub-Bolt over the degree-k disc bundle; s > 2 for k = 1.
FamilyCurve berger_curve(int k);
/// L -> L on the hyperbolic quotients H^4/Z (S^1 x R^3).
FamilyCurve translation_curve();

enum class CriticalKind { kMaximum, kMinimum, kInflection };
const char* to_string(CriticalKind k);

struct CriticalPoint {
  double parameter = 0.0;
  double value = 0.0;
  double second_derivative = 0.0;
  CriticalKind kind = CriticalKind::kInflection;
  bool fold() const { return kind != CriticalKind::kInflection; }
};

struct FoldOptions {
  int grid = 400;                // uniform in the unit coordinate
  double derivative_tol = 1e-6;  // step-halving disagreement, relative
  double fold_tol = 1e-6;        // |f''| below this is an inflection
};

struct FoldReport {
  std::string curve;
  std::vector<CriticalPoint> critical;
  /// Supremum and infimum of the invariant, including the end limits.
  double max_value = 0.0, argmax = 0.0;
  double min_value = 0.0, argmin = 0.0;
  bool max_attained = false, min_attained = false;
  double lo_limit = 0.0, hi_limit = 0.0;
  int grid = 0;
};

/// Interior critical points from derivative sign changes, polished by Newton.
/// Throws Error{kNoConvergence} if the derivative estimate is noisier than
/// `derivative_tol`.
FoldReport fold_analysis(const FamilyCurve& curve, const FoldOptions& opt = {});

/// Limit of the invariant at the lower (upper) end of the interval.
double end_limit(const FamilyCurve& curve, bool upper);

double derivative(const FamilyCurve& curve, double p, double* noise = nullptr);

struct Preimage {
  double parameter = 0.0;
  bool critical = false;
};

/// Every p with value(p) = v to 1e-10, sorted. Empty when v lies outside the
/// range. A value at a fold returns that single critical point.
std::vector<Preimage> preimages(const FamilyCurve& curve, double v, const FoldReport& folds);
std::vector<Preimage> preimages(const FamilyCurve& curve, double v);

/// Index of the L^2 kernel at a preimage; nullopt where it is not known.
using IndexRule = std::function<std::optional<int>(double parameter)>;

/// ind = 1 for m < m_0 and 0 for m > m_0 on AdS-Schwarzschild, m = (r^3 + r)/2.
IndexRule bolt_period_index();
/// 0 everywhere (non-degenerate metrics with unique symmetric fill-in).
IndexRule trivial_index();
/// 1 below the fold parameter, 0 above; nullopt at the fold.
IndexRule fold_index(double fold_parameter);

struct DegreeReport {
  std::string manifold;
  std::string boundary;
  double regular_value = 0.0;
  std::vector<double> preimages;
  std::vector<int> indices;
  int degree = 0;
  int mod2 = 0;
};

/// Σ (-1)^ind. Throws Error{kMissingIndex} if the rule has no index for a
/// preimage and Error{kInvalidParameter} at a critical value.
DegreeReport degree(std::string manifold, std::string boundary, double value,
                    const std::vector<Preimage>& pre, const IndexRule& rule);

struct OrbifoldReport {
  int k = 1;
  boost::rational<long> eta;             // η(S^3/Z_k) = (k-1)(k-2)/(3k)
  boost::rational<long> ale_weyl_energy;  // 2 - 1/k
  long inequality_lhs = 0;                // 4k - 2
  long inequality_rhs = 0;                // |3k - (k-1)(k-2)|
  bool excluded = false;                  // lhs < rhs
  /// The ALE bubble has a nontrivial group only for k >= 2.
  bool nontrivial_group = false;
};

/// Throws Error{kInvalidParameter} for k < 1.
OrbifoldReport orbifold_bound(int k);

struct Witness {
  bool outside_image = false;
  double value = 0.0;
  double sup = 0.0;
  double sup_parameter = 0.0;
  bool sup_attained = false;
};

/// True iff v exceeds the supremum of the curve's invariant.
Witness nonsurjectivity_witness(const FamilyCurve& curve, double v);

struct DegreeEntry {
  DegreeReport report;
  std::string anchor;
  std::string method;
};

/// Degree of the boundary map for the ball, R^2 x S^2, S^1 x R^3,
/// CP^2 minus a ball and the degree-k disc bundles listed.
std::vector<DegreeEntry> catalog_degrees(const std::vector<int>& bundle_degrees = {10, 20, 50});

/// m at the bolt-period fold from r^3 + r = 2m; status kPassDiscrepancy when
/// it matches 2/(3√3) and not the value 2/√3 quoted alongside the fold.
Check fold_mass_check(const FoldReport& bolt_period);

}  // namespace ahe
