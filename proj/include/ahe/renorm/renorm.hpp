#pragma once

#include "ahe/catalog/catalog.hpp"
#include "ahe/compactify/compactify.hpp"

#include <map>
#include <string>
#include <vector>

namespace ahe {

/// g-volume of {t' > t}, the bulk side of the level set S(t).
/// Throws Error{kOutOfRange} unless 0 < t < width.
double bulk_volume(const Compactification& c, double t);

struct VolumeFitOptions {
  int points = 24;
  double lo_fraction = 0.01;  // of width
  double hi_fraction = 0.1;
  /// vol(t) = v3 t^-3 + v1 t^-1 + V + O(t); the O(t) terms are fitted too.
  std::vector<int> powers = {-3, -1, 0, 1, 2, 3, 4, 5};
  double max_condition = 1e12;
};

enum class WeylMode {
  kBulk,   // ∫ |W|^2_g dV_g in the radial coordinate
  kSplit,  // same for t > t_split, ∫ |W̄|^2_ḡ dV_ḡ in the (t, y) chart for t < t_split
};

struct WeylOptions {
  WeylMode mode = WeylMode::kSplit;
  double split_fraction = 0.25;  // t_split / width
  double floor_fraction = 1e-4;  // below this the O(t^3) tail is added in closed form
  unsigned panels = 8;      // Gauss-Kronrod panels per piece
  double rel_tol = 1e-9;    // on the summed Kronrod error estimates
};

struct RenormReport {
  std::string family;
  std::map<std::string, double> params;
  double v3 = 0.0, v1 = 0.0;
  double V = 0.0;
  double I_ren = 0.0;  // -2n V, n = 3
  double fit_residual = 0.0;
  double fit_condition = 0.0;
  double weyl_energy = 0.0;
  int euler_char = 0;
  /// |(1/8π^2) ∫|W|^2 - χ + (3/4π^2) V|; NaN until gauss_bonnet_check fills it.
  double identity_residual = 0.0;
};

/// Fits bulk_volume on a log-spaced grid. Throws Error{kIllConditioned}.
RenormReport renormalized_volume(const Compactification& c, const VolumeFitOptions& opt = {});

/// ∫_M |W|^2 dV_g with |W|^2 = (1/4) W_ijkl W^ijkl (so |R|^2 - |W|^2 = 6).
/// Throws Error{kNotConformallyCompact} for the cusp, Error{kNoConvergence}
/// when the quadrature does not settle.
double weyl_energy(const CatalogMetric& metric, const WeylOptions& opt = {});

/// Full report with the Gauss-Bonnet identity residual.
RenormReport gauss_bonnet_check(const CatalogMetric& metric, const VolumeFitOptions& vol = {},
                                const WeylOptions& weyl = {});

}  // namespace ahe
