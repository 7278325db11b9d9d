#pragma once

#include "ahe/geom/metric_field.hpp"
#include "ahe/geom/tensor.hpp"

#include <array>
#include <optional>

namespace ahe {

/// Metric with first and second coordinate derivatives at a point:
/// dg[k](i,j) = d_k g_ij, ddg[k][l](i,j) = d_k d_l g_ij.
template <std::size_t D>
struct MetricDerivatives {
  Point<D> point{};
  Sym2<D> g;
  std::array<Sym2<D>, D> dg;
  std::array<std::array<Sym2<D>, D>, D> ddg;
};

/// Curvature quantities in coordinate components.
///
/// Conventions: christoffel(k,i,j) = Γ^k_ij; riemann(a,b,c,d) = R_abcd with
/// R^a_bcd = d_c Γ^a_db - d_d Γ^a_cb + Γ^a_ce Γ^e_db - Γ^a_de Γ^e_cb, so that
/// K(e_a,e_b) = R_abab / |e_a ^ e_b|^2 is +1 on the unit sphere, and
/// Ric_bd = R^a_bad gives Ric = -n g on hyperbolic space.
template <std::size_t D>
struct CurvatureBundle {
  Point<D> point{};
  Sym2<D> g;
  Sym2<D> g_inv;
  Tensor3<D> christoffel;
  std::array<Tensor3<D>, D> d_christoffel;  // [m](k,i,j) = d_m Γ^k_ij
  Tensor4<D> riemann;
  Sym2<D> ricci;
  double scalar = 0.0;
  std::optional<Tensor4<D>> weyl;  // populated iff D == 4
};

template <std::size_t D>
MetricDerivatives<D> metric_derivatives(const MetricField<D>& field,
                                        const Point<D>& p);

/// Independent pipeline: central differences on plain metric values,
/// Richardson-extrapolated over steps h and h/2.
template <std::size_t D>
MetricDerivatives<D> metric_derivatives_fd(const MetricField<D>& field,
                                           const Point<D>& p, double h);

template <std::size_t D>
CurvatureBundle<D> curvature_from(const MetricDerivatives<D>& m);

/// Throws Error{kOutsideDomain | kNotPositiveDefinite | kNonFinite}.
template <std::size_t D>
CurvatureBundle<D> curvature_at(const MetricField<D>& field, const Point<D>& p);

template <std::size_t D>
CurvatureBundle<D> curvature_at_fd(const MetricField<D>& field,
                                   const Point<D>& p, double h = 2e-3);

/// Full contraction T_ij T^ij.
template <std::size_t D>
double norm_sq(const Sym2<D>& t, const Sym2<D>& g_inv);

/// Full contraction T_abcd T^abcd.
template <std::size_t D>
double norm_sq(const Tensor4<D>& t, const Sym2<D>& g_inv);

/// Norm of a curvature-type tensor as an operator on 2-forms,
/// |T|^2 = (1/4) T_abcd T^abcd. With this norm hyperbolic 4-space has
/// |R|^2 = 6 and Einstein metrics with Ric = -3g satisfy |R|^2 - |W|^2 = 6.
template <std::size_t D>
double operator_norm_sq(const Tensor4<D>& t, const Sym2<D>& g_inv) {
  return 0.25 * norm_sq<D>(t, g_inv);
}

/// ||Ric + (D-1) g||_g.
double einstein_residual(const CurvatureBundle<4>& c);
double einstein_residual(const MetricField<4>& field, const Point<4>& p);

template <std::size_t D>
double sectional(const CurvatureBundle<D>& c, const Vec<D>& u, const Vec<D>& v);

template <std::size_t D>
double sectional(const MetricField<D>& field, const Point<D>& p,
                 const Vec<D>& u, const Vec<D>& v) {
  return sectional<D>(curvature_at<D>(field, p), u, v);
}

/// (a ∧ b)_ijkl = a_ik b_jl + a_jl b_ik - a_il b_jk - a_jk b_il.
template <std::size_t D>
Tensor4<D> kulkarni_nomizu(const Sym2<D>& a, const Sym2<D>& b);

/// Largest violation of R_abcd = -R_bacd = -R_abdc = R_cdab and the first
/// Bianchi identity, divided by max(1, max|R_abcd|) in an orthonormal frame.
template <std::size_t D>
double riemann_symmetry_residual(const Tensor4<D>& r, const Sym2<D>& g);

/// Largest g-trace of the Weyl tensor over all index pairs, normalized.
double weyl_trace_residual(const CurvatureBundle<4>& c);

template <std::size_t D>
struct HessianLaplacian {
  Sym2<D> hessian;
  double laplacian = 0.0;
  Vec<D> gradient;  // coordinate components of df
};

template <std::size_t D>
HessianLaplacian<D> hessian_and_laplacian(const CurvatureBundle<D>& c,
                                          const Jet<D>& f);

template <std::size_t D>
HessianLaplacian<D> hessian_and_laplacian(const MetricField<D>& field,
                                          const ScalarField<D>& f,
                                          const Point<D>& p) {
  return hessian_and_laplacian<D>(curvature_at<D>(field, p), f.jet(p));
}

/// Orthonormal frame (columns) for g, by Gram-Schmidt on coordinate vectors.
template <std::size_t D>
Sym2<D> orthonormal_frame(const Sym2<D>& g);

}  // namespace ahe
