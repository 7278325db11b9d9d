#include "ahe/geom/curvature.hpp"

#include "ahe/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ahe {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOutsideDomain: return "outside-domain";
    case ErrorCode::kNotPositiveDefinite: return "not-positive-definite";
    case ErrorCode::kNonFinite: return "non-finite";
    case ErrorCode::kDegeneratePlane: return "degenerate-plane";
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kNotConformallyCompact: return "not-conformally-compact";
    case ErrorCode::kNoConvergence: return "no-convergence";
    case ErrorCode::kIllConditioned: return "ill-conditioned";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kMissingIndex: return "missing-index";
    case ErrorCode::kUsage: return "usage";
  }
  return "unknown";
}

namespace {

template <std::size_t D>
std::string describe(const Point<D>& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < D; ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

template <std::size_t D>
void require_inside(const MetricField<D>& field, const Point<D>& p,
                    double margin) {
  if (!field.patch().contains(p, margin)) {
    throw Error(ErrorCode::kOutsideDomain,
                "point " + describe<D>(p) + " is not interior to the patch");
  }
}

template <std::size_t D>
void require_finite(const MetricDerivatives<D>& m) {
  bool ok = m.g.allFinite();
  for (std::size_t k = 0; k < D && ok; ++k) {
    ok = m.dg[k].allFinite();
    for (std::size_t l = 0; l < D && ok; ++l) ok = m.ddg[k][l].allFinite();
  }
  if (!ok) {
    throw Error(ErrorCode::kNonFinite,
                "non-finite metric derivatives at " + describe<D>(m.point));
  }
}

template <std::size_t D>
void require_positive(const Sym2<D>& g, const Point<D>& p) {
  Eigen::LLT<Sym2<D>> llt(g);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "metric is not positive definite at " + describe<D>(p));
  }
}

template <std::size_t D>
Sym2<D> component_shift(const MetricField<D>& field, Point<D> p,
                        std::size_t i, double hi, std::size_t j, double hj) {
  p[i] += hi;
  p[j] += hj;
  return field.at(p);
}

template <std::size_t D>
Tensor4<D> to_frame(const Tensor4<D>& t, const Sym2<D>& e) {
  // Contract one slot at a time: O(D^5).
  Tensor4<D> a, b;
  for (std::size_t p = 0; p < D; ++p)
    for (std::size_t j = 0; j < D; ++j)
      for (std::size_t k = 0; k < D; ++k)
        for (std::size_t l = 0; l < D; ++l) {
          double s = 0;
          for (std::size_t i = 0; i < D; ++i) s += e(i, p) * t(i, j, k, l);
          a(p, j, k, l) = s;
        }
  for (std::size_t p = 0; p < D; ++p)
    for (std::size_t q = 0; q < D; ++q)
      for (std::size_t k = 0; k < D; ++k)
        for (std::size_t l = 0; l < D; ++l) {
          double s = 0;
          for (std::size_t j = 0; j < D; ++j) s += e(j, q) * a(p, j, k, l);
          b(p, q, k, l) = s;
        }
  for (std::size_t p = 0; p < D; ++p)
    for (std::size_t q = 0; q < D; ++q)
      for (std::size_t r = 0; r < D; ++r)
        for (std::size_t l = 0; l < D; ++l) {
          double s = 0;
          for (std::size_t k = 0; k < D; ++k) s += e(k, r) * b(p, q, k, l);
          a(p, q, r, l) = s;
        }
  for (std::size_t p = 0; p < D; ++p)
    for (std::size_t q = 0; q < D; ++q)
      for (std::size_t r = 0; r < D; ++r)
        for (std::size_t u = 0; u < D; ++u) {
          double s = 0;
          for (std::size_t l = 0; l < D; ++l) s += e(l, u) * a(p, q, r, l);
          b(p, q, r, u) = s;
        }
  return b;
}

}  // namespace

template <std::size_t D>
MetricDerivatives<D> metric_derivatives(const MetricField<D>& field,
                                        const Point<D>& p) {
  require_inside<D>(field, p, 0.0);
  const auto jet = field.jet(p);
  MetricDerivatives<D> m;
  m.point = p;
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < D; ++j) {
      m.g(i, j) = jet[i][j].v;
      for (std::size_t k = 0; k < D; ++k) {
        m.dg[k](i, j) = jet[i][j].d[k];
        for (std::size_t l = 0; l < D; ++l) m.ddg[k][l](i, j) = jet[i][j].hess(k, l);
      }
    }
  require_finite<D>(m);
  require_positive<D>(m.g, p);
  return m;
}

template <std::size_t D>
MetricDerivatives<D> metric_derivatives_fd(const MetricField<D>& field,
                                           const Point<D>& p, double h) {
  require_inside<D>(field, p, 2.0 * h);
  MetricDerivatives<D> m;
  m.point = p;
  m.g = field.at(p);

  auto first = [&](std::size_t k, double s) -> Sym2<D> {
    return (component_shift<D>(field, p, k, s, k, 0.0) -
            component_shift<D>(field, p, k, -s, k, 0.0)) /
           (2.0 * s);
  };
  auto second_diag = [&](std::size_t k, double s) -> Sym2<D> {
    return (component_shift<D>(field, p, k, s, k, 0.0) - 2.0 * m.g +
            component_shift<D>(field, p, k, -s, k, 0.0)) /
           (s * s);
  };
  auto second_mixed = [&](std::size_t k, std::size_t l, double s) -> Sym2<D> {
    return (component_shift<D>(field, p, k, s, l, s) -
            component_shift<D>(field, p, k, s, l, -s) -
            component_shift<D>(field, p, k, -s, l, s) +
            component_shift<D>(field, p, k, -s, l, -s)) /
           (4.0 * s * s);
  };
  auto richardson = [](const Sym2<D>& coarse, const Sym2<D>& fine) -> Sym2<D> {
    return (4.0 * fine - coarse) / 3.0;
  };

  for (std::size_t k = 0; k < D; ++k) {
    m.dg[k] = richardson(first(k, h), first(k, 0.5 * h));
    m.ddg[k][k] = richardson(second_diag(k, h), second_diag(k, 0.5 * h));
    for (std::size_t l = 0; l < k; ++l) {
      m.ddg[k][l] = richardson(second_mixed(k, l, h), second_mixed(k, l, 0.5 * h));
      m.ddg[l][k] = m.ddg[k][l];
    }
  }
  require_finite<D>(m);
  require_positive<D>(m.g, p);
  return m;
}

template <std::size_t D>
CurvatureBundle<D> curvature_from(const MetricDerivatives<D>& m) {
  CurvatureBundle<D> c;
  c.point = m.point;
  c.g = m.g;
  c.g_inv = m.g.inverse();

  Tensor3<D> first_kind;  // Γ_lij
  std::array<Tensor3<D>, D> d_first_kind;
  for (std::size_t l = 0; l < D; ++l)
    for (std::size_t i = 0; i < D; ++i)
      for (std::size_t j = 0; j < D; ++j) {
        first_kind(l, i, j) =
            0.5 * (m.dg[i](l, j) + m.dg[j](l, i) - m.dg[l](i, j));
        for (std::size_t q = 0; q < D; ++q)
          d_first_kind[q](l, i, j) = 0.5 * (m.ddg[q][i](l, j) +
                                            m.ddg[q][j](l, i) -
                                            m.ddg[q][l](i, j));
      }

  std::array<Sym2<D>, D> d_inv;
  for (std::size_t q = 0; q < D; ++q) d_inv[q] = -c.g_inv * m.dg[q] * c.g_inv;

  for (std::size_t k = 0; k < D; ++k)
    for (std::size_t i = 0; i < D; ++i)
      for (std::size_t j = 0; j < D; ++j) {
        double s = 0;
        for (std::size_t l = 0; l < D; ++l) s += c.g_inv(k, l) * first_kind(l, i, j);
        c.christoffel(k, i, j) = s;
        for (std::size_t q = 0; q < D; ++q) {
          double ds = 0;
          for (std::size_t l = 0; l < D; ++l)
            ds += d_inv[q](k, l) * first_kind(l, i, j) +
                  c.g_inv(k, l) * d_first_kind[q](l, i, j);
          c.d_christoffel[q](k, i, j) = ds;
        }
      }

  const auto& G = c.christoffel;
  const auto& dG = c.d_christoffel;
  Tensor4<D> up;  // R^a_bcd
  for (std::size_t a = 0; a < D; ++a)
    for (std::size_t b = 0; b < D; ++b)
      for (std::size_t cc = 0; cc < D; ++cc)
        for (std::size_t d = 0; d < D; ++d) {
          double s = dG[cc](a, d, b) - dG[d](a, cc, b);
          for (std::size_t e = 0; e < D; ++e)
            s += G(a, cc, e) * G(e, d, b) - G(a, d, e) * G(e, cc, b);
          up(a, b, cc, d) = s;
        }
  for (std::size_t a = 0; a < D; ++a)
    for (std::size_t b = 0; b < D; ++b)
      for (std::size_t cc = 0; cc < D; ++cc)
        for (std::size_t d = 0; d < D; ++d) {
          double s = 0;
          for (std::size_t e = 0; e < D; ++e) s += m.g(a, e) * up(e, b, cc, d);
          c.riemann(a, b, cc, d) = s;
        }

  c.ricci.setZero();
  for (std::size_t b = 0; b < D; ++b)
    for (std::size_t d = 0; d < D; ++d) {
      double s = 0;
      for (std::size_t a = 0; a < D; ++a) s += up(a, b, a, d);
      c.ricci(b, d) = s;
    }
  c.ricci = 0.5 * (c.ricci + c.ricci.transpose()).eval();
  c.scalar = (c.g_inv.cwiseProduct(c.ricci)).sum();

  if constexpr (D == 4) {
    const double n = static_cast<double>(D);
    const Sym2<D> schouten_like = c.ricci - c.scalar / (2.0 * (n - 1.0)) * c.g;
    const Tensor4<D> kn = kulkarni_nomizu<D>(schouten_like, c.g);
    Tensor4<D> w;
    for (std::size_t i = 0; i < w.c.size(); ++i)
      w.c[i] = c.riemann.c[i] - kn.c[i] / (n - 2.0);
    c.weyl = w;
  }
  return c;
}

template <std::size_t D>
CurvatureBundle<D> curvature_at(const MetricField<D>& field, const Point<D>& p) {
  return curvature_from<D>(metric_derivatives<D>(field, p));
}

template <std::size_t D>
CurvatureBundle<D> curvature_at_fd(const MetricField<D>& field,
                                   const Point<D>& p, double h) {
  return curvature_from<D>(metric_derivatives_fd<D>(field, p, h));
}

template <std::size_t D>
double norm_sq(const Sym2<D>& t, const Sym2<D>& g_inv) {
  return (g_inv * t * g_inv).cwiseProduct(t).sum();
}

template <std::size_t D>
Sym2<D> orthonormal_frame(const Sym2<D>& g) {
  // Columns e_a with g(e_a, e_b) = δ_ab: e = L^{-T} for g = L L^T.
  Eigen::LLT<Sym2<D>> llt(g);
  const Sym2<D> l = llt.matrixL();
  return l.transpose().inverse();
}

template <std::size_t D>
double norm_sq(const Tensor4<D>& t, const Sym2<D>& g_inv) {
  const Sym2<D> e = orthonormal_frame<D>(g_inv.inverse());
  const Tensor4<D> f = to_frame<D>(t, e);
  double s = 0;
  for (double x : f.c) s += x * x;
  return s;
}

double einstein_residual(const CurvatureBundle<4>& c) {
  const Sym2<4> t = c.ricci + 3.0 * c.g;
  return std::sqrt(std::max(0.0, norm_sq<4>(t, c.g_inv)));
}

double einstein_residual(const MetricField<4>& field, const Point<4>& p) {
  return einstein_residual(curvature_at<4>(field, p));
}

template <std::size_t D>
double sectional(const CurvatureBundle<D>& c, const Vec<D>& u, const Vec<D>& v) {
  const double uu = u.dot(c.g * u), vv = v.dot(c.g * v), uv = u.dot(c.g * v);
  const double area = uu * vv - uv * uv;
  if (!(area > 1e-14 * uu * vv)) {
    throw Error(ErrorCode::kDegeneratePlane, "tangent vectors span no plane");
  }
  double s = 0;
  for (std::size_t a = 0; a < D; ++a)
    for (std::size_t b = 0; b < D; ++b)
      for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = 0; j < D; ++j)
          s += c.riemann(a, b, i, j) * u[a] * v[b] * u[i] * v[j];
  return s / area;
}

template <std::size_t D>
Tensor4<D> kulkarni_nomizu(const Sym2<D>& a, const Sym2<D>& b) {
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  const double bsym = (b - b.transpose()).cwiseAbs().maxCoeff();
  const double scale = 1.0 + std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  if (asym > 1e-12 * scale || bsym > 1e-12 * scale) {
    throw Error(ErrorCode::kInvalidParameter,
                "Kulkarni-Nomizu product needs symmetric arguments");
  }
  Tensor4<D> t;
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < D; ++j)
      for (std::size_t k = 0; k < D; ++k)
        for (std::size_t l = 0; l < D; ++l)
          t(i, j, k, l) = a(i, k) * b(j, l) + a(j, l) * b(i, k) -
                          a(i, l) * b(j, k) - a(j, k) * b(i, l);
  return t;
}

template <std::size_t D>
double riemann_symmetry_residual(const Tensor4<D>& r, const Sym2<D>& g) {
  const Tensor4<D> f = to_frame<D>(r, orthonormal_frame<D>(g));
  double scale = 1.0, worst = 0.0;
  for (double x : f.c) scale = std::max(scale, std::abs(x));
  for (std::size_t a = 0; a < D; ++a)
    for (std::size_t b = 0; b < D; ++b)
      for (std::size_t c = 0; c < D; ++c)
        for (std::size_t d = 0; d < D; ++d) {
          const double x = f(a, b, c, d);
          worst = std::max({worst, std::abs(x + f(b, a, c, d)),
                            std::abs(x + f(a, b, d, c)),
                            std::abs(x - f(c, d, a, b)),
                            std::abs(x + f(a, c, d, b) + f(a, d, b, c))});
        }
  return worst / scale;
}

double weyl_trace_residual(const CurvatureBundle<4>& c) {
  if (!c.weyl) return 0.0;
  const Tensor4<4> f = to_frame<4>(*c.weyl, orthonormal_frame<4>(c.g));
  double scale = 1.0, worst = 0.0;
  for (double x : f.c) scale = std::max(scale, std::abs(x));
  for (std::size_t b = 0; b < 4; ++b)
    for (std::size_t d = 0; d < 4; ++d) {
      double tr13 = 0, tr14 = 0, tr12 = 0;
      for (std::size_t a = 0; a < 4; ++a) {
        tr13 += f(a, b, a, d);
        tr14 += f(a, b, d, a);
        tr12 += f(a, a, b, d);
      }
      worst = std::max({worst, std::abs(tr13), std::abs(tr14), std::abs(tr12)});
    }
  return worst / scale;
}

template <std::size_t D>
HessianLaplacian<D> hessian_and_laplacian(const CurvatureBundle<D>& c,
                                          const Jet<D>& f) {
  HessianLaplacian<D> out;
  for (std::size_t i = 0; i < D; ++i) out.gradient[i] = f.d[i];
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < D; ++j) {
      double s = f.hess(i, j);
      for (std::size_t k = 0; k < D; ++k) s -= c.christoffel(k, i, j) * f.d[k];
      out.hessian(i, j) = s;
    }
  out.hessian = 0.5 * (out.hessian + out.hessian.transpose()).eval();
  out.laplacian = c.g_inv.cwiseProduct(out.hessian).sum();
  return out;
}

#define AHE_INSTANTIATE(D)                                                      \
  template MetricDerivatives<D> metric_derivatives<D>(const MetricField<D>&,   \
                                                      const Point<D>&);        \
  template MetricDerivatives<D> metric_derivatives_fd<D>(                      \
      const MetricField<D>&, const Point<D>&, double);                         \
  template CurvatureBundle<D> curvature_from<D>(const MetricDerivatives<D>&);  \
  template CurvatureBundle<D> curvature_at<D>(const MetricField<D>&,           \
                                              const Point<D>&);                \
  template CurvatureBundle<D> curvature_at_fd<D>(const MetricField<D>&,        \
                                                 const Point<D>&, double);     \
  template double norm_sq<D>(const Sym2<D>&, const Sym2<D>&);                  \
  template double norm_sq<D>(const Tensor4<D>&, const Sym2<D>&);               \
  template double sectional<D>(const CurvatureBundle<D>&, const Vec<D>&,       \
                               const Vec<D>&);                                 \
  template Tensor4<D> kulkarni_nomizu<D>(const Sym2<D>&, const Sym2<D>&);      \
  template double riemann_symmetry_residual<D>(const Tensor4<D>&,              \
                                               const Sym2<D>&);                \
  template HessianLaplacian<D> hessian_and_laplacian<D>(                       \
      const CurvatureBundle<D>&, const Jet<D>&);                               \
  template Sym2<D> orthonormal_frame<D>(const Sym2<D>&);

AHE_INSTANTIATE(3)
AHE_INSTANTIATE(4)

#undef AHE_INSTANTIATE

}  // namespace ahe
